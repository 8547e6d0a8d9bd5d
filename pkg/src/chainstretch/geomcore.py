"""Planar primitives and robust predicates.

Orientation and incircle use a floating-point filter with the standard static
error bounds; when the filter cannot certify the sign the determinant is
re-evaluated exactly with :class:`fractions.Fraction` (every double is an
exact rational, so the fallback is exact for the given coordinates).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .errors import GeometryError

_EPS = 2.0**-53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_ERRBOUND = (10.0 + 96.0 * _EPS) * _EPS

TANGENCY_TOL = 1e-9
TWO_PI = 2.0 * math.pi


class _PointBase(NamedTuple):
    x: float
    y: float


class Point(_PointBase):
    """Immutable point with finite coordinates."""

    __slots__ = ()

    def __new__(cls, x: float, y: float) -> "Point":
        x = float(x)
        y = float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GeometryError(f"non-finite point ({x}, {y})")
        return super().__new__(cls, x, y)

    def __repr__(self) -> str:
        return f"Point({self.x!r}, {self.y!r})"


@dataclass(frozen=True, slots=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not isinstance(self.center, Point):
            object.__setattr__(self, "center", Point(*self.center))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0.0):
            raise GeometryError(f"circle radius must be positive and finite, got {r}")
        object.__setattr__(self, "radius", r)

    def point_at(self, theta: float) -> Point:
        return Point(self.center.x + self.radius * math.cos(theta),
                     self.center.y + self.radius * math.sin(theta))

    def angle_of(self, p: Point) -> float:
        return math.atan2(p.y - self.center.y, p.x - self.center.x)

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        """Closed-disk membership, ``tol`` relative to the radius."""
        return dist(self.center, p) <= self.radius * (1.0 + tol)


class Location(str, Enum):
    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


def dist(p: Point, q: Point) -> float:
    return math.hypot(q.x - p.x, q.y - p.y)


def normalize_angle(theta: float) -> float:
    """Map an angle to (-pi, pi]."""
    r = math.remainder(theta, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def ccw_span(start: float, end: float) -> float:
    """Counterclockwise angular distance from ``start`` to ``end`` in [0, 2pi)."""
    s = (end - start) % TWO_PI
    return 0.0 if s >= TWO_PI else s


def signed_angle(p: Point, o: Point, q: Point) -> float:
    """Counterclockwise angle from ray o->p to ray o->q, in (-pi, pi]."""
    ux, uy = p.x - o.x, p.y - o.y
    vx, vy = q.x - o.x, q.y - o.y
    if (ux == 0.0 and uy == 0.0) or (vx == 0.0 and vy == 0.0):
        raise GeometryError("signed_angle: ray endpoint coincides with the apex")
    return normalize_angle(math.atan2(ux * vy - uy * vx, ux * vx + uy * vy))


# -- predicates -------------------------------------------------------------

def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orient2d(a, b, c) -> int:
    """+1 if a, b, c make a left turn, -1 for a right turn, 0 if collinear."""
    if a == b or b == c or a == c:
        return 0
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    errbound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > errbound or -det > errbound:
        return 1 if det > 0 else -1
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1]))
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def _incircle_det(a, b, c, d) -> int:
    """Sign of the incircle determinant; positive when d is inside ccw (a, b, c)."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    if abs(det) > _ICC_ERRBOUND * permanent:
        return 1 if det > 0 else -1
    fa = [Fraction(v) for v in a]
    fb = [Fraction(v) for v in b]
    fc = [Fraction(v) for v in c]
    fd = [Fraction(v) for v in d]
    adx, ady = fa[0] - fd[0], fa[1] - fd[1]
    bdx, bdy = fb[0] - fd[0], fb[1] - fd[1]
    cdx, cdy = fc[0] - fd[0], fc[1] - fd[1]
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return _sign(det)


def incircle_test(a: Point, b: Point, c: Point, d: Point) -> Location:
    """Position of ``d`` relative to the circle through a, b, c (any orientation)."""
    o = orient2d(a, b, c)
    if o == 0:
        raise GeometryError("incircle_test: a, b, c are collinear")
    s = _incircle_det(a, b, c, d) * o
    if s > 0:
        return Location.INSIDE
    if s < 0:
        return Location.OUTSIDE
    return Location.ON


# -- constructions ----------------------------------------------------------

def circumcircle(p: Point, q: Point, r: Point) -> Circle:
    if orient2d(p, q, r) == 0:
        raise GeometryError("circumcircle: points are collinear")
    bx, by = q.x - p.x, q.y - p.y
    cx, cy = r.x - p.x, r.y - p.y
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return Circle(Point(p.x + ux, p.y + uy), math.hypot(ux, uy))


def circle_intersection(c1: Circle, c2: Circle) -> tuple[Point, ...]:
    """Boundary intersection of two circles.

    Returns ``()``, a 1-tuple at tangency, or a pair whose first point lies to
    the left of the directed line c1.center -> c2.center.
    """
    if c1 == c2:
        raise GeometryError("circle_intersection: identical circles")
    r1, r2 = c1.radius, c2.radius
    dx = c2.center.x - c1.center.x
    dy = c2.center.y - c1.center.y
    d = math.hypot(dx, dy)
    if d == 0.0:
        return ()
    ux, uy = dx / d, dy / d
    tol = TANGENCY_TOL * max(r1, r2)
    if abs(d - (r1 + r2)) <= tol:
        return (Point(c1.center.x + r1 * ux, c1.center.y + r1 * uy),)
    if abs(d - abs(r1 - r2)) <= tol:
        s = r1 if r1 > r2 else -r1
        return (Point(c1.center.x + s * ux, c1.center.y + s * uy),)
    if d > r1 + r2 or d < abs(r1 - r2):
        return ()
    x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h = math.sqrt(max(r1 * r1 - x * x, 0.0))
    bx, by = c1.center.x + x * ux, c1.center.y + x * uy
    return (Point(bx - h * uy, by + h * ux), Point(bx + h * uy, by - h * ux))


def half_width(c: Circle, other: Circle) -> float:
    """Half-angle of the arc of ``c`` lying inside ``other``, seen from c's center.

    0 for external tangency, pi when ``c`` sits inside ``other`` (internal tangency).
    """
    d = dist(c.center, other.center)
    r, ro = c.radius, other.radius
    tol = TANGENCY_TOL * max(r, ro)
    if abs(d - (r + ro)) <= tol:
        return 0.0
    if abs(d - abs(r - ro)) <= tol:
        return math.pi if r < ro else 0.0
    cosw = (d * d + r * r - ro * ro) / (2.0 * d * r)
    return math.acos(min(1.0, max(-1.0, cosw)))
