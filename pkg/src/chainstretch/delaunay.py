"""Delaunay triangulation by randomized incremental insertion.

Insertion is Bowyer-Watson over a triangulation closed by ghost triangles
(one per hull edge, sharing a symbolic vertex at infinity), so points outside
the current hull need no special casing. Point location is a stochastic
visibility walk. All sign decisions go through the exact predicates in
:mod:`chainstretch.geomcore`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegenerateSegmentError, GeometryError
from .geomcore import Location, Point, incircle_test, orient2d

GHOST = -1
BOUNDARY = -1


@dataclass(frozen=True)
class Triangulation:
    """Point set plus counterclockwise triangles.

    ``adjacency[t][k]`` is the triangle across the edge opposite vertex ``k``
    of triangle ``t``, or ``BOUNDARY``.
    """

    points: tuple[Point, ...]
    triangles: tuple[tuple[int, int, int], ...]
    adjacency: tuple[tuple[int, int, int], ...] = field(repr=False)

    @classmethod
    def from_triangles(cls, points: Sequence, triangles: Sequence[Sequence[int]]) -> "Triangulation":
        """Build from raw index triples; orients them counterclockwise and links neighbors."""
        pts = tuple(p if isinstance(p, Point) else Point(*p) for p in points)
        tris = []
        for a, b, c in triangles:
            if orient2d(pts[a], pts[b], pts[c]) < 0:
                b, c = c, b
            tris.append((a, b, c))
        return cls(pts, tuple(tris), _link(tris))

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for a, b, c in self.triangles:
            for i, j in ((a, b), (b, c), (c, a)):
                out.add((min(i, j), max(i, j)))
        return out


@dataclass(frozen=True)
class Violation:
    kind: str  # "circumcircle", "orientation" or "adjacency"
    triangle: int
    point: int


def _link(tris: Sequence[tuple[int, int, int]]) -> tuple[tuple[int, int, int], ...]:
    owner = {}
    for t, (a, b, c) in enumerate(tris):
        owner[(a, b)] = t
        owner[(b, c)] = t
        owner[(c, a)] = t
    adj = []
    for a, b, c in tris:
        # edge opposite vertex k: (b,c), (c,a), (a,b)
        adj.append(tuple(owner.get(e, BOUNDARY) for e in ((c, b), (a, c), (b, a))))
    return tuple(adj)


class _Builder:
    def __init__(self, pts: tuple[Point, ...], rng: random.Random):
        self.pts = pts
        self.rng = rng
        self.tris: list[tuple[int, int, int] | None] = []
        self.edge: dict[tuple[int, int], int] = {}
        self.last = 0

    def add(self, tri: tuple[int, int, int]) -> None:
        t = len(self.tris)
        self.tris.append(tri)
        a, b, c = tri
        self.edge[(a, b)] = t
        self.edge[(b, c)] = t
        self.edge[(c, a)] = t
        self.last = t

    def remove(self, t: int) -> None:
        a, b, c = self.tris[t]
        for e in ((a, b), (b, c), (c, a)):
            if self.edge.get(e) == t:
                del self.edge[e]
        self.tris[t] = None

    def in_disk(self, t: int, p: int) -> bool:
        a, b, c = self.tris[t]
        pts = self.pts
        if c == GHOST:
            o = orient2d(pts[a], pts[b], pts[p])
            if o > 0:
                return True
            if o < 0:
                return False
            pa, pb, pp = pts[a], pts[b], pts[p]
            return (min(pa.x, pb.x) <= pp.x <= max(pa.x, pb.x)
                    and min(pa.y, pb.y) <= pp.y <= max(pa.y, pb.y))
        return incircle_test(pts[a], pts[b], pts[c], pts[p]) is Location.INSIDE

    def locate(self, p: int) -> int:
        pts = self.pts
        t = self.last
        if self.tris[t] is None:
            t = next(i for i in range(len(self.tris) - 1, -1, -1) if self.tris[i] is not None)
        a, b, c = self.tris[t]
        if c == GHOST:
            t = self.edge[(b, a)]
        while True:
            a, b, c = self.tris[t]
            if c == GHOST:
                return t
            edges = [(a, b), (b, c), (c, a)]
            start = self.rng.randrange(3)
            for k in range(3):
                i, j = edges[(start + k) % 3]
                if orient2d(pts[i], pts[j], pts[p]) < 0:
                    t = self.edge[(j, i)]
                    break
            else:
                return t

    def insert(self, p: int) -> None:
        start = self.locate(p)
        if not self.in_disk(start, p):
            raise GeometryError("point location failed")  # pragma: no cover
        cavity = {start}
        stack = [start]
        boundary = []
        while stack:
            t = stack.pop()
            a, b, c = self.tris[t]
            for e in ((a, b), (b, c), (c, a)):
                if e[0] == GHOST and e[1] == GHOST:
                    continue
                nb = self.edge.get((e[1], e[0]))
                if nb in cavity:
                    continue
                if nb is not None and self.in_disk(nb, p):
                    cavity.add(nb)
                    stack.append(nb)
                else:
                    boundary.append(e)
        for t in cavity:
            self.remove(t)
        for i, j in boundary:
            tri = (i, j, p)
            if GHOST in tri:
                k = tri.index(GHOST)
                tri = tri[k + 1:] + tri[:k + 1]
            self.add(tri)


def _check_input(points: Sequence) -> tuple[Point, ...]:
    pts = tuple(p if isinstance(p, Point) else Point(*p) for p in points)
    if len(pts) < 3:
        raise GeometryError("triangulate needs at least 3 points")
    if len(set(pts)) != len(pts):
        raise GeometryError("duplicate points")
    return pts


def triangulate(points: Sequence, seed: int = 0) -> Triangulation:
    """Delaunay triangulation of distinct, not-all-collinear points.

    Co-circular ties are broken by the (seeded) insertion order.
    """
    pts = _check_input(points)
    order = list(range(len(pts)))
    rng = random.Random(seed)
    rng.shuffle(order)

    i0, i1 = order[0], order[1]
    k = next((k for k in range(2, len(order)) if orient2d(pts[i0], pts[i1], pts[order[k]]) != 0), None)
    if k is None:
        raise GeometryError("all points are collinear")
    i2 = order[k]
    rest = order[2:k] + order[k + 1:]
    if orient2d(pts[i0], pts[i1], pts[i2]) < 0:
        i1, i2 = i2, i1

    b = _Builder(pts, rng)
    b.add((i0, i1, i2))
    b.add((i1, i0, GHOST))
    b.add((i2, i1, GHOST))
    b.add((i0, i2, GHOST))
    for p in rest:
        b.insert(p)

    real = [t for t in b.tris if t is not None and GHOST not in t]
    return Triangulation(pts, tuple(real), _link(real))


def validate_delaunay(t: Triangulation) -> list[Violation]:
    """Brute-force check of orientation, adjacency symmetry and empty circumcircles."""
    out = []
    pts = t.points
    for ti, (a, b, c) in enumerate(t.triangles):
        if orient2d(pts[a], pts[b], pts[c]) <= 0:
            out.append(Violation("orientation", ti, -1))
            continue
        for k, nb in enumerate(t.adjacency[ti]):
            if nb != BOUNDARY and ti not in t.adjacency[nb]:
                out.append(Violation("adjacency", ti, nb))
        for p in range(len(pts)):
            if p in (a, b, c):
                continue
            if incircle_test(pts[a], pts[b], pts[c], pts[p]) is Location.INSIDE:
                out.append(Violation("circumcircle", ti, p))
    return out


def hull_size(t: Triangulation) -> int:
    return sum(1 for adj in t.adjacency for nb in adj if nb == BOUNDARY)


def _between(p: Point, q: Point, r: Point) -> bool:
    """For collinear p, q, r: is q strictly between p and r?"""
    return (min(p.x, r.x) <= q.x <= max(p.x, r.x) and min(p.y, r.y) <= q.y <= max(p.y, r.y)
            and q != p and q != r)


def crossed_triangles(t: Triangulation, x: int, y: int) -> list[int]:
    """Triangles whose interiors the open segment xy meets, in order from x to y.

    Returns ``[]`` when xy is an edge. Raises :class:`DegenerateSegmentError`
    when the segment passes through another vertex.
    """
    if x == y:
        raise GeometryError("crossed_triangles: x and y must differ")
    pts = t.points
    px, py = pts[x], pts[y]
    if (min(x, y), max(x, y)) in t.edges():
        return []

    first = None
    for ti, tri in enumerate(t.triangles):
        if x not in tri:
            continue
        k = tri.index(x)
        p, q = tri[(k + 1) % 3], tri[(k + 2) % 3]
        op = orient2d(px, pts[p], py)
        oq = orient2d(px, pts[q], py)
        for v, o in ((p, op), (q, oq)):
            if o == 0 and _between(px, pts[v], py):
                raise DegenerateSegmentError(f"segment passes through vertex {v}", v)
        if op > 0 and oq < 0:
            first = ti
            break
    if first is None:
        raise GeometryError("crossed_triangles: no triangle at x points toward y")  # pragma: no cover

    out = [first]
    cur = first
    k = t.triangles[cur].index(x)
    # exit edge is the one opposite x
    exit_k = k
    while True:
        nb = t.adjacency[cur][exit_k]
        if nb == BOUNDARY:
            raise GeometryError("crossed_triangles: walked off the hull")  # pragma: no cover
        out.append(nb)
        tri = t.triangles[nb]
        if y in tri:
            return out
        prev = cur
        cur = nb
        m = t.adjacency[cur].index(prev)
        w = tri[m]
        o = orient2d(px, py, pts[w])
        if o == 0:
            raise DegenerateSegmentError(f"segment passes through vertex {w}", w)
        # the edge we leave through keeps w and the vertex on the opposite side of xy
        a = tri[(m + 1) % 3]
        same_as_a = orient2d(px, py, pts[a]) == o
        # leaving via edge (w, b) when w is on a's side, i.e. opposite vertex a
        exit_k = (m + 1) % 3 if same_as_a else (m + 2) % 3
