"""Chains of circles: validation, arcs, rubber band, arc paths and chain stretch.

Orientation conventions. At joint ``i`` (between circles ``i`` and ``i+1``,
1-based) ``a_i`` is the intersection point left of the directed center line.
Going counterclockwise around an interior circle ``O_i`` one meets, in order::

    b_i  -(connecting arc toward O_{i+1})->  a_i  -(A_i)->  a_{i-1}
         -(connecting arc toward O_{i-1})->  b_{i-1}  -(B_i)->  b_i

so ``A_i`` is the ccw arc from ``a_i`` to ``a_{i-1}`` and ``B_i`` the ccw arc
from ``b_{i-1}`` to ``b_i``, with ``a_0 = b_0 = u`` and ``a_n = b_n = v``.
When the two connecting arcs on a circle are disjoint this labeling is always
consistent, so left-of-center-line labeling never needs repair.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .delaunay import Triangulation, crossed_triangles
from .errors import ChainError, PropertyOneError, PropertyTwoError, TerminalError
from .geomcore import (
    TWO_PI,
    Circle,
    Point,
    ccw_span,
    circle_intersection,
    circumcircle,
    dist,
    half_width,
    orient2d,
)

ANGLE_TOL = 1e-9
BOUNDARY_TOL = 1e-9
OBSTRUCTION_TOL = 1e-9
STAB_TOL = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class TerminalPair(NamedTuple):
    u: Point
    v: Point


class _Side(NamedTuple):
    theta: float  # direction from this circle's center toward the neighbor's
    width: float  # half-angle of the connecting arc


@dataclass(frozen=True)
class Chain:
    circles: tuple[Circle, ...]
    joints: tuple[tuple[Point, Point], ...]  # (a_i, b_i) for i = 1..n-1
    _prev: tuple[_Side | None, ...]
    _next: tuple[_Side | None, ...]

    @property
    def n(self) -> int:
        return len(self.circles)

    def a(self, i: int) -> Point:
        return self.joints[i - 1][0]

    def b(self, i: int) -> Point:
        return self.joints[i - 1][1]

    def terminal_arc(self, end: str) -> tuple[float, float]:
        """(start angle, ccw span) of the boundary where a terminal may sit.

        ``end`` is ``"u"`` (first circle) or ``"v"`` (last circle).
        """
        if self.n == 1:
            return 0.0, TWO_PI
        if end == "u":
            s = self._next[0]
            return s.theta + s.width, TWO_PI - 2.0 * s.width
        s = self._prev[-1]
        return s.theta + s.width, TWO_PI - 2.0 * s.width


def _same_circle(c1: Circle, c2: Circle, tol: float = 1e-12) -> bool:
    scale = max(c1.radius, c2.radius)
    return dist(c1.center, c2.center) <= tol * scale and abs(c1.radius - c2.radius) <= tol * scale


def _interior_spans(prev: _Side, nxt: _Side) -> tuple[float, float]:
    """Angular spans of A_i and B_i on an interior circle (negative means overlap)."""
    gap = ccw_span(nxt.theta, prev.theta)
    return gap - nxt.width - prev.width, TWO_PI - gap - nxt.width - prev.width


def make_chain(circles: Sequence[Circle]) -> Chain:
    """Check that neighbors cross and connecting arcs stay disjoint, then label the joints."""
    circles = tuple(circles)
    if not circles:
        raise ChainError("a chain needs at least one circle")
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            if _same_circle(circles[i], circles[j]):
                raise ChainError(f"circles {i + 1} and {j + 1} coincide")
    joints = []
    prev: list[_Side | None] = [None] * len(circles)
    nxt: list[_Side | None] = [None] * len(circles)
    for k in range(len(circles) - 1):
        c1, c2 = circles[k], circles[k + 1]
        pts = circle_intersection(c1, c2)
        if not pts:
            raise PropertyOneError(f"circles {k + 1} and {k + 2} do not intersect")
        joints.append((pts[0], pts[-1]))
        th = math.atan2(c2.center.y - c1.center.y, c2.center.x - c1.center.x)
        nxt[k] = _Side(th, half_width(c1, c2))
        prev[k + 1] = _Side(th + math.pi, half_width(c2, c1))
    for k in range(1, len(circles) - 1):
        sa, sb = _interior_spans(prev[k], nxt[k])
        if sa < -ANGLE_TOL or sb < -ANGLE_TOL:
            raise PropertyTwoError(f"connecting arcs overlap on circle {k + 1}")
    return Chain(circles, tuple(joints), tuple(prev), tuple(nxt))


def reverse(chain: Chain) -> Chain:
    return make_chain(chain.circles[::-1])


# -- terminals and arcs -----------------------------------------------------

def _offset(chain: Chain, end: str, p: Point) -> float:
    """Position of a terminal along its permissible arc, as an angle offset."""
    c = chain.circles[0] if end == "u" else chain.circles[-1]
    if abs(dist(c.center, p) - c.radius) > BOUNDARY_TOL * c.radius:
        raise TerminalError(f"terminal {end} is not on the boundary of its circle")
    start, span = chain.terminal_arc(end)
    off = ccw_span(start, c.angle_of(p))
    if off > span:
        if off >= TWO_PI - ANGLE_TOL:
            off = 0.0
        elif off <= span + ANGLE_TOL:
            off = span
        else:
            raise TerminalError(f"terminal {end} lies inside the neighboring circle")
    return off


@dataclass(frozen=True)
class Arcs:
    """Arc lengths ``A[i-1] = |A_i|``, ``B[i-1] = |B_i|`` and gate chords ``gates[i-1] = (a_i, b_i)``."""

    A: tuple[float, ...]
    B: tuple[float, ...]
    gates: tuple[tuple[Point, Point], ...]


def _arc_spans(chain: Chain, off_u: float, off_v: float) -> tuple[list[float], list[float]]:
    n = chain.n
    A = [0.0] * n
    B = [0.0] * n
    _, span_u = chain.terminal_arc("u")
    _, span_v = chain.terminal_arc("v")
    A[0], B[0] = off_u, span_u - off_u
    B[-1], A[-1] = off_v, span_v - off_v
    for k in range(1, n - 1):
        sa, sb = _interior_spans(chain._prev[k], chain._next[k])
        A[k], B[k] = max(sa, 0.0), max(sb, 0.0)
    return A, B


def arcs(chain: Chain, t: TerminalPair) -> Arcs:
    """Lengths of A_1..A_n, B_1..B_n and the gates, for the given terminals."""
    if chain.n == 1:
        c = chain.circles[0]
        if abs(dist(c.center, t.u) - c.radius) > BOUNDARY_TOL * c.radius or \
                abs(dist(c.center, t.v) - c.radius) > BOUNDARY_TOL * c.radius:
            raise TerminalError("terminals must lie on the circle")
        tu, tv = c.angle_of(t.u), c.angle_of(t.v)
        sa, sb = ccw_span(tv, tu), ccw_span(tu, tv)
        return Arcs((c.radius * sa,), (c.radius * sb,), ())
    su, sv = _offset(chain, "u", t.u), _offset(chain, "v", t.v)
    A, B = _arc_spans(chain, su, sv)
    rs = [c.radius for c in chain.circles]
    return Arcs(tuple(r * s for r, s in zip(rs, A)), tuple(r * s for r, s in zip(rs, B)), chain.joints)


# -- rubber band ------------------------------------------------------------

@dataclass(frozen=True)
class RubberBand:
    vertices: tuple[Point, ...]  # u, p_1..p_{n-1}, v
    length: float
    obstructed: bool
    witnesses: tuple[int, ...]  # gate indices j with p_j at a_j or b_j


def _funnel(u: Point, v: Point, gates: Sequence[tuple[Point, Point]]) -> list[tuple[Point, int]]:
    """Taut path through ordered portals (left=a, right=b); returns (vertex, portal index)."""
    portals = [(u, u)] + list(gates) + [(v, v)]
    path = [(u, 0)]
    apex, apex_i = u, 0
    left, left_i = u, 0
    right, right_i = u, 0
    i = 1
    while i < len(portals):
        L, R = portals[i]
        if orient2d(apex, right, R) >= 0:
            if apex == right or orient2d(apex, left, R) <= 0:
                right, right_i = R, i
            else:
                path.append((left, left_i))
                apex, apex_i = left, left_i
                right, right_i = apex, apex_i
                i = apex_i + 1
                continue
        if orient2d(apex, left, L) <= 0:
            if apex == left or orient2d(apex, right, L) >= 0:
                left, left_i = L, i
            else:
                path.append((right, right_i))
                apex, apex_i = right, right_i
                left, left_i = apex, apex_i
                i = apex_i + 1
                continue
        i += 1
    path.append((v, len(portals) - 1))
    return path


def _cross_gate(p: Point, q: Point, a: Point, b: Point) -> Point:
    ex, ey = b.x - a.x, b.y - a.y
    dx, dy = q.x - p.x, q.y - p.y
    den = dx * ey - dy * ex
    if ex == 0.0 and ey == 0.0:
        return a
    if den == 0.0:
        return a if dist(p, a) <= dist(p, b) else b
    mu = (dy * (p.x - a.x) - dx * (p.y - a.y)) / -den
    mu = min(1.0, max(0.0, mu))
    return Point(a.x + mu * ex, a.y + mu * ey)


def _rubber_band(chain: Chain, u: Point, v: Point) -> RubberBand:
    gates = chain.joints
    path = _funnel(u, v, gates)
    length = math.fsum(dist(path[k][0], path[k + 1][0]) for k in range(len(path) - 1))
    verts = [u]
    seg = 0
    for j in range(1, chain.n):
        while path[seg + 1][1] < j:
            seg += 1
        (p, pi), (q, qi) = path[seg], path[seg + 1]
        if pi == j:
            verts.append(p)
        elif qi == j:
            verts.append(q)
        else:
            verts.append(_cross_gate(p, q, *gates[j - 1]))
    verts.append(v)
    witnesses = []
    for j in range(1, chain.n):
        a, b = gates[j - 1]
        scale = max(chain.circles[j - 1].radius, chain.circles[j].radius)
        pj = verts[j]
        if min(dist(pj, a), dist(pj, b)) <= OBSTRUCTION_TOL * scale:
            witnesses.append(j)
    return RubberBand(tuple(verts), length, bool(witnesses), tuple(witnesses))


def rubber_band(chain: Chain, t: TerminalPair) -> RubberBand:
    """Shortest polyline from u to v with its j-th bend on gate a_j b_j."""
    arcs(chain, t)  # terminal validation
    return _rubber_band(chain, t.u, t.v)


def _entry_exit(c: Circle, u: Point, v: Point) -> tuple[float, float]:
    dx, dy = v.x - u.x, v.y - u.y
    fx, fy = u.x - c.center.x, u.y - c.center.y
    A = dx * dx + dy * dy
    B = 2.0 * (fx * dx + fy * dy)
    C = fx * fx + fy * fy - c.radius * c.radius
    disc = max(B * B - 4.0 * A * C, 0.0)
    s = math.sqrt(disc)
    return (-B - s) / (2.0 * A), (-B + s) / (2.0 * A)


def stab_order(chain: Chain, t: TerminalPair) -> bool:
    """Whether segment uv enters and exits the circles in chain order."""
    if rubber_band(chain, t).obstructed:
        raise ChainError("stab_order requires unobstructed terminals")
    if t.u == t.v:
        return True
    params = [_entry_exit(c, t.u, t.v) for c in chain.circles]
    for i in range(len(params)):
        for j in range(i + 1, len(params)):
            if params[i][0] > params[j][0] + STAB_TOL or params[i][1] > params[j][1] + STAB_TOL:
                return False
    return True


# -- arc path ---------------------------------------------------------------

class ArcEdge(NamedTuple):
    kind: str  # "A", "B" or "gate"
    index: int
    length: float


@dataclass(frozen=True)
class ArcPath:
    length: float
    edges: tuple[ArcEdge, ...]


def _ladder_path(n: int, A: Sequence[float], B: Sequence[float],
                 gate_len: Sequence[float], want_edges: bool) -> tuple[float, list[ArcEdge]]:
    # node 0 = u, 1 = v, 2j = a_j, 2j+1 = b_j for 1 <= j <= n-1
    def na(j):
        return 0 if j == 0 else 1 if j == n else 2 * j

    def nb(j):
        return 0 if j == 0 else 1 if j == n else 2 * j + 1

    adj: list[list[tuple[int, float, ArcEdge]]] = [[] for _ in range(2 * n)]

    def link(p, q, e):
        adj[p].append((q, e.length, e))
        adj[q].append((p, e.length, e))

    for i in range(1, n + 1):
        link(na(i - 1), na(i), ArcEdge("A", i, A[i - 1]))
        link(nb(i - 1), nb(i), ArcEdge("B", i, B[i - 1]))
    for j in range(1, n):
        link(na(j), nb(j), ArcEdge("gate", j, gate_len[j - 1]))

    d = [math.inf] * (2 * n)
    back: list[tuple[int, ArcEdge] | None] = [None] * (2 * n)
    d[0] = 0.0
    heap = [(0.0, 0)]
    while heap:
        dx, x = heapq.heappop(heap)
        if dx > d[x]:
            continue
        if x == 1:
            break
        for y, w, e in adj[x]:
            nd = dx + w
            if nd < d[y]:
                d[y] = nd
                back[y] = (x, e)
                heapq.heappush(heap, (nd, y))
    edges: list[ArcEdge] = []
    if want_edges:
        x = 1
        while x != 0:
            x, e = back[x]
            edges.append(e)
        edges.reverse()
    return d[1], edges


def arc_path(chain: Chain, t: TerminalPair) -> ArcPath:
    """Shortest u-v route along arcs A_i, B_i and gate chords."""
    ar = arcs(chain, t)
    if chain.n == 1:
        if ar.A[0] <= ar.B[0]:
            return ArcPath(ar.A[0], (ArcEdge("A", 1, ar.A[0]),))
        return ArcPath(ar.B[0], (ArcEdge("B", 1, ar.B[0]),))
    gl = [dist(a, b) for a, b in ar.gates]
    length, edges = _ladder_path(chain.n, ar.A, ar.B, gl, True)
    return ArcPath(length, tuple(edges))


# -- chain stretch ----------------------------------------------------------

class _Evaluator:
    """Fast |P|, |D| for terminals parametrized by offsets along their permissible arcs."""

    def __init__(self, chain: Chain):
        self.chain = chain
        self.start_u, self.span_u = chain.terminal_arc("u")
        self.start_v, self.span_v = chain.terminal_arc("v")
        self.gate_len = [dist(a, b) for a, b in chain.joints]
        self.radii = [c.radius for c in chain.circles]
        self._inner = _arc_spans(chain, 0.0, 0.0) if chain.n > 1 else None

    def terminals(self, fu: float, fv: float) -> TerminalPair:
        c1, cn = self.chain.circles[0], self.chain.circles[-1]
        return TerminalPair(c1.point_at(self.start_u + fu * self.span_u),
                            cn.point_at(self.start_v + fv * self.span_v))

    def lengths(self, fu: float, fv: float) -> tuple[float, float]:
        ch = self.chain
        t = self.terminals(fu, fv)
        if ch.n == 1:
            diff = abs((fu - fv) * TWO_PI)
            ang = min(diff, TWO_PI - diff)
            return self.radii[0] * ang, dist(t.u, t.v)
        A = [r * s for r, s in zip(self.radii, self._inner[0])]
        B = [r * s for r, s in zip(self.radii, self._inner[1])]
        ou, ov = fu * self.span_u, fv * self.span_v
        A[0], B[0] = self.radii[0] * ou, self.radii[0] * (self.span_u - ou)
        B[-1], A[-1] = self.radii[-1] * ov, self.radii[-1] * (self.span_v - ov)
        P, _ = _ladder_path(ch.n, A, B, self.gate_len, False)
        D = _rubber_band(ch, t.u, t.v).length
        return P, D

    def ratio(self, fu: float, fv: float) -> float:
        P, D = self.lengths(fu, fv)
        if D <= 0.0:
            return 1.0
        return P / D


def _golden_max(f, lo: float, hi: float, iters: int = 40) -> tuple[float, float]:
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _refine(ev: _Evaluator, best: float, bu: float, bv: float, h: float, iters: int):
    """Alternating golden-section searches (axes and both diagonals) in a box of half-width h."""
    lo_u, hi_u = max(0.0, bu - h), min(1.0, bu + h)
    lo_v, hi_v = max(0.0, bv - h), min(1.0, bv + h)
    for _ in range(iters):
        x, fx = _golden_max(lambda s: ev.ratio(s, bv), lo_u, hi_u)
        if fx > best:
            best, bu = fx, x
        y, fy = _golden_max(lambda s: ev.ratio(bu, s), lo_v, hi_v)
        if fy > best:
            best, bv = fy, y
        for sgn in (1.0, -1.0):
            lo = max(lo_u - bu, sgn * (lo_v - bv) if sgn > 0 else bv - hi_v)
            hi = min(hi_u - bu, sgn * (hi_v - bv) if sgn > 0 else bv - lo_v)
            if hi <= lo:
                continue
            s, fs = _golden_max(lambda s: ev.ratio(bu + s, bv + sgn * s), lo, hi)
            if fs > best:
                best, bu, bv = fs, bu + s, bv + sgn * s
    return best, bu, bv


def chain_stretch(chain: Chain, samples_per_arc: int = 32, refine_iters: int = 3) -> tuple[float, TerminalPair]:
    """Sampled lower bound on max |P|/|D| over terminal pairs.

    Terminals are taken at offsets k/m (k = 0..m) along each permissible arc;
    the best grid pair is then polished by golden-section line searches within
    one grid cell. The result is the max over the grids m, m/2, m/4, ... (down
    to 8), so the estimate never decreases when ``samples_per_arc`` doubles.
    """
    m = int(samples_per_arc)
    if m < 8:
        raise ValueError("samples_per_arc must be at least 8")
    ev = _Evaluator(chain)
    levels = [m]
    while levels[-1] % 2 == 0 and levels[-1] // 2 >= 8:
        levels.append(levels[-1] // 2)
    cache: dict[tuple[int, int], float] = {}
    best, bu, bv = -math.inf, 0.0, 0.0
    for lvl in reversed(levels):
        step = m // lvl
        gbest, gu, gv = -math.inf, 0, 0
        for i in range(0, m + 1, step):
            for j in range(0, m + 1, step):
                r = cache.get((i, j))
                if r is None:
                    r = cache[(i, j)] = ev.ratio(i / m, j / m)
                if r > gbest:
                    gbest, gu, gv = r, i, j
        r, fu, fv = _refine(ev, gbest, gu / m, gv / m, step / m, max(0, refine_iters))
        if r > best:
            best, bu, bv = r, fu, fv
    return best, ev.terminals(bu, bv)


# -- triangulations ---------------------------------------------------------

def chain_from_triangulation(t: Triangulation, x: int, y: int) -> tuple[Chain, TerminalPair] | None:
    """Chain of circumcircles of the triangles crossed by segment xy.

    Returns ``None`` when xy is an edge of ``t``.
    """
    crossed = crossed_triangles(t, x, y)
    if not crossed:
        return None
    circles: list[Circle] = []
    for ti in crossed:
        a, b, c = (t.points[k] for k in t.triangles[ti])
        cc = circumcircle(a, b, c)
        if circles and _same_circle(circles[-1], cc, 1e-9):
            continue
        circles.append(cc)
    try:
        chain = make_chain(circles)
    except ChainError as exc:  # pragma: no cover - signals a bug upstream
        raise RuntimeError(f"circumcircle chain failed validation: {exc}") from exc
    return chain, TerminalPair(t.points[x], t.points[y])
