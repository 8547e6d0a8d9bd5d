"""Peaks, green/red arcs, the potential Phi and the target function Upsilon."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .chain import Chain, TerminalPair, arc_path, rubber_band
from .errors import GeometryError
from .constants import DEFAULT_CONSTANTS, PotentialConstants
from .geomcore import Circle, Point, dist, half_width

GREEN = "green"
RED = "red"


@dataclass(frozen=True)
class PeakDecomposition:
    """One joint's contribution to the potential.

    Coordinates are reported in the original frame; ``H`` and ``V`` are the
    signed horizontal and vertical travel along the two peak arcs measured in
    the local frame (centers on the x-axis, intersection point on or above it).
    """

    q_prev: Point
    q_next: Point
    color_prev: str
    color_next: str
    H: float
    V: float
    flipped: bool
    degenerate: bool


def _probe_inside(circle: Circle, other: Circle, t0: float, t1: float) -> bool | None:
    """Three-point containment probe of the arc of ``circle`` between angles t0 and t1."""
    if abs(t1 - t0) < 1e-6:
        return None
    votes = [other.contains(circle.point_at(t0 + f * (t1 - t0)), 1e-12) for f in (0.25, 0.5, 0.75)]
    if all(votes):
        return True
    if not any(votes):
        return False
    raise GeometryError("peak arc is partially inside the neighboring circle")


def peak_decomposition(o_prev: Circle, o_cur: Circle, a_point: Point) -> PeakDecomposition:
    d = dist(o_prev.center, o_cur.center)
    if d == 0.0 or not (abs(o_prev.radius - o_cur.radius) - 1e-9 * max(o_prev.radius, o_cur.radius)
                        <= d <= o_prev.radius + o_cur.radius + 1e-9 * max(o_prev.radius, o_cur.radius)):
        raise GeometryError("peak_decomposition: circles do not intersect")
    ex = ((o_cur.center.x - o_prev.center.x) / d, (o_cur.center.y - o_prev.center.y) / d)
    ey = (-ex[1], ex[0])
    rel = (a_point.x - o_prev.center.x, a_point.y - o_prev.center.y)
    ay = rel[0] * ey[0] + rel[1] * ey[1]
    flipped = ay < 0.0
    if flipped:
        ey = (-ey[0], -ey[1])
    r0, r1 = o_prev.radius, o_cur.radius
    w0, w1 = half_width(o_prev, o_cur), half_width(o_cur, o_prev)
    # local frame: o_prev at origin, o_cur at (d, 0); a at angle w0 on O_prev, pi - w1 on O_cur
    ax, ay = r0 * math.cos(w0), r0 * math.sin(w0)
    degenerate = ay <= 1e-12 * max(r0, r1)

    red_prev = w0 > math.pi / 2
    red_cur = w1 > math.pi / 2
    base0 = math.atan2(ex[1], ex[0])
    # arcs in world angles: from the peak (local angle pi/2) to a (local w0 / pi - w1)
    sgn = 1.0 if not flipped else -1.0
    for circle, other, lw, red in ((o_prev, o_cur, w0, red_prev), (o_cur, o_prev, math.pi - w1, red_cur)):
        probe = _probe_inside(circle, other, base0 + sgn * math.pi / 2, base0 + sgn * lw)
        if probe is not None and probe != red:
            raise GeometryError("arc coloring disagrees with the containment probe")

    s0 = -1.0 if red_prev else 1.0
    s1 = -1.0 if red_cur else 1.0
    H = s0 * abs(ax) + s1 * abs(d - ax)
    V = s0 * (r0 - ay) + s1 * (r1 - ay)
    q_prev = Point(o_prev.center.x + r0 * ey[0], o_prev.center.y + r0 * ey[1])
    q_next = Point(o_cur.center.x + r1 * ey[0], o_cur.center.y + r1 * ey[1])
    return PeakDecomposition(q_prev, q_next, RED if red_prev else GREEN, RED if red_cur else GREEN,
                             H, V, flipped, degenerate)


def joint_decompositions(chain: Chain) -> list[PeakDecomposition]:
    return [peak_decomposition(chain.circles[i - 1], chain.circles[i], chain.a(i)) for i in range(1, chain.n)]


def potential(chain: Chain, constants: PotentialConstants = DEFAULT_CONSTANTS) -> float:
    """phi (r_n - r_1) - (phi / 3) sum_i (2 H_i + V_i), summed left to right."""
    if chain.n == 1:
        return 0.0
    phi = constants.phi
    total = 0.0
    for dec in joint_decompositions(chain):
        total += 2.0 * dec.H + dec.V
    return phi * (chain.circles[-1].radius - chain.circles[0].radius) - phi / 3.0 * total


def upsilon(chain: Chain, t: TerminalPair, constants: PotentialConstants = DEFAULT_CONSTANTS) -> float:
    """|P| - lambda |D| + Phi."""
    return arc_path(chain, t).length - constants.lam * rubber_band(chain, t).length + potential(chain, constants)
