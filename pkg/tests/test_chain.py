from __future__ import annotations

import math
import random

import pytest
from scipy.optimize import minimize

from chainstretch.chain import (
    TerminalPair,
    arc_path,
    arcs,
    chain_from_triangulation,
    chain_stretch,
    make_chain,
    reverse,
    rubber_band,
    stab_order,
)
from chainstretch.delaunay import triangulate
from chainstretch.errors import ChainError, PropertyOneError, PropertyTwoError, TerminalError
from chainstretch.experiments import random_chain, sample_terminals, terminal_at
from chainstretch.geomcore import Circle, Point, dist

from conftest import SQ3_2

TWO_THIRDS_PI = 2 * math.pi / 3
TWO_UA1 = 1.3680805733026749  # 2 * |u a_1| for u at 100 degrees on the unit circle


def C(x, y, r):
    return Circle(Point(x, y), r)


def _band_oracle(chain, t):
    """Minimize the polyline length over gate parameters directly."""
    gates = chain.joints

    def length(mu):
        pts = [t.u] + [Point(a.x + m * (b.x - a.x), a.y + m * (b.y - a.y)) for m, (a, b) in zip(mu, gates)] + [t.v]
        return sum(dist(p, q) for p, q in zip(pts, pts[1:]))

    best = math.inf
    for start in (0.5, 0.1, 0.9):
        res = minimize(length, [start] * len(gates), method="L-BFGS-B", bounds=[(0, 1)] * len(gates),
                       options={"ftol": 1e-15, "gtol": 1e-12})
        best = min(best, res.fun)
    return best


def _sampled_overlap(c, prev, nxt):
    """Oracle for overlapping connecting arcs: dense sample of c's boundary inside both neighbors."""
    hits = 0
    for k in range(20000):
        p = c.point_at(2 * math.pi * k / 20000)
        if dist(p, prev.center) < prev.radius * (1 - 1e-9) and dist(p, nxt.center) < nxt.radius * (1 - 1e-9):
            hits += 1
    return hits > 0


# -- make_chain ---------------------------------------------------------------

def test_symmetric_pair(sym_chain):
    assert sym_chain.a(1) == pytest.approx((0.5, SQ3_2))
    assert sym_chain.b(1) == pytest.approx((0.5, -SQ3_2))


def test_property_one():
    with pytest.raises(PropertyOneError):
        make_chain([C(0, 0, 1), C(3, 0, 1)])
    with pytest.raises(PropertyOneError):  # nested
        make_chain([C(0, 0, 2), C(0.2, 0, 0.5)])


def test_duplicates_and_empty():
    with pytest.raises(ChainError):
        make_chain([C(0, 0, 1), C(1, 0, 1), C(0, 0, 1)])
    with pytest.raises(ChainError):
        make_chain([])


def test_nearly_concentric_triple_is_valid():
    # Unit circles 0.1 apart: each connecting arc on the middle circle spans about 174 degrees,
    # so the two arcs stay disjoint.
    ch = make_chain([C(0, 0, 1), C(0.1, 0, 1), C(0.2, 0, 1)])
    assert ch.n == 3
    mid = ch.circles[1]
    assert not _sampled_overlap(mid, ch.circles[0], ch.circles[2])


def test_property_two():
    circles = [C(-0.8, 0, 1), C(0, 0, 0.5), C(0.8, 0, 1)]
    assert _sampled_overlap(circles[1], circles[0], circles[2])
    with pytest.raises(PropertyTwoError):
        make_chain(circles)


@pytest.mark.parametrize("seed", range(40))
def test_property_two_against_sampling_oracle(seed):
    rng = random.Random(seed)
    r = [rng.uniform(0.4, 1.5) for _ in range(3)]
    c0 = C(0, 0, r[0])
    d1 = rng.uniform(abs(r[0] - r[1]), r[0] + r[1])
    c1 = C(d1, 0, r[1])
    ang = rng.uniform(-math.pi, math.pi)
    d2 = rng.uniform(abs(r[1] - r[2]), r[1] + r[2])
    c2 = C(d1 + d2 * math.cos(ang), d2 * math.sin(ang), r[2])
    overlap = _sampled_overlap(c1, c0, c2)
    try:
        make_chain([c0, c1, c2])
        valid = True
    except PropertyTwoError:
        valid = False
    assert valid == (not overlap)


def test_tangent_pair_has_point_gate():
    ch = make_chain([C(0, 0, 1), C(2, 0, 1)])
    assert ch.a(1) == ch.b(1) == Point(1, 0)
    ar = arcs(ch, TerminalPair(Point(-1, 0), Point(3, 0)))
    assert ar.A == pytest.approx((math.pi, math.pi)) and ar.B == pytest.approx((math.pi, math.pi))
    rb = rubber_band(ch, TerminalPair(Point(-1, 0), Point(3, 0)))
    assert rb.length == pytest.approx(4.0) and rb.obstructed and rb.witnesses == (1,)


# -- arcs ------------------------------------------------------------------------

def test_arcs_symmetric(sym_chain, sym_terminals):
    ar = arcs(sym_chain, sym_terminals)
    assert ar.A == pytest.approx((TWO_THIRDS_PI,) * 2)
    assert ar.B == pytest.approx((TWO_THIRDS_PI,) * 2)


def test_arcs_single_circle_antipodal():
    ch = make_chain([C(0, 0, 1)])
    ar = arcs(ch, TerminalPair(Point(1, 0), Point(-1, 0)))
    assert ar.A == pytest.approx((math.pi,)) and ar.B == pytest.approx((math.pi,))


def test_terminal_constraints(sym_chain):
    with pytest.raises(TerminalError):  # off the circle
        arcs(sym_chain, TerminalPair(Point(-0.5, 0), Point(2, 0)))
    with pytest.raises(TerminalError):  # inside O_2
        arcs(sym_chain, TerminalPair(Point(1, 0), Point(2, 0)))
    arcs(sym_chain, TerminalPair(sym_chain.a(1), Point(2, 0)))  # boundary of the permissible arc is fine


@pytest.mark.parametrize("seed", range(10))
def test_arc_spans_sum_to_circumference(seed):
    rng = random.Random(seed)
    ch = random_chain(rng, 5)
    t = sample_terminals(ch, rng, 1)[0]
    ar = arcs(ch, t)
    for k in range(1, ch.n - 1):
        c = ch.circles[k]
        inner = sum(
            2 * math.acos(max(-1.0, min(1.0, (dist(c.center, o.center) ** 2 + c.radius ** 2 - o.radius ** 2)
                                       / (2 * dist(c.center, o.center) * c.radius))))
            for o in (ch.circles[k - 1], ch.circles[k + 1]))
        assert ar.A[k] + ar.B[k] + c.radius * inner == pytest.approx(2 * math.pi * c.radius, rel=1e-9)


# -- rubber band ------------------------------------------------------------------

def test_rubber_band_symmetric(sym_chain, sym_terminals):
    rb = rubber_band(sym_chain, sym_terminals)
    assert rb.length == pytest.approx(3.0) and not rb.obstructed
    assert rb.vertices[1] == pytest.approx((1.0, 0.0)) or rb.vertices[1] == pytest.approx((0.5, 0.0))


def test_rubber_band_obstructed(sym_chain):
    u = Point(math.cos(math.radians(100)), math.sin(math.radians(100)))
    v = Point(1 + math.cos(math.radians(80)), math.sin(math.radians(80)))
    rb = rubber_band(sym_chain, TerminalPair(u, v))
    assert rb.obstructed and rb.witnesses == (1,)
    assert rb.length == pytest.approx(TWO_UA1, rel=1e-12)
    assert rb.vertices[1] == pytest.approx((0.5, SQ3_2))


def test_rubber_band_single_circle():
    ch = make_chain([C(0, 0, 1)])
    t = TerminalPair(Point(1, 0), Point(0, 1))
    rb = rubber_band(ch, t)
    assert rb.length == pytest.approx(math.sqrt(2)) and not rb.obstructed


@pytest.mark.parametrize("seed", range(12))
def test_rubber_band_matches_optimizer(seed):
    rng = random.Random(seed)
    ch = random_chain(rng, rng.randint(2, 6))
    for t in sample_terminals(ch, rng, 4):
        rb = rubber_band(ch, t)
        assert rb.length == pytest.approx(_band_oracle(ch, t), rel=1e-6)
        if not rb.obstructed:
            assert rb.length == pytest.approx(dist(t.u, t.v), rel=1e-12)
        for j, (a, b) in enumerate(ch.joints, 1):  # bends lie on their gates
            p = rb.vertices[j]
            assert dist(a, p) + dist(p, b) == pytest.approx(dist(a, b), abs=1e-9)


# -- stab order ------------------------------------------------------------------

def test_stab_order_symmetric(sym_chain, sym_terminals):
    assert stab_order(sym_chain, sym_terminals)


def test_stab_order_requires_unobstructed(sym_chain):
    u = Point(math.cos(math.radians(100)), math.sin(math.radians(100)))
    v = Point(1 + math.cos(math.radians(80)), math.sin(math.radians(80)))
    with pytest.raises(ChainError):
        stab_order(sym_chain, TerminalPair(u, v))


@pytest.mark.parametrize("seed", range(20))
def test_stab_order_random_three_circle(seed):
    rng = random.Random(1000 + seed)
    ch = random_chain(rng, 3)
    for t in sample_terminals(ch, rng, 20):
        if not rubber_band(ch, t).obstructed:
            assert stab_order(ch, t)


# -- arc path -----------------------------------------------------------------------

def test_arc_path_single_circle():
    ch = make_chain([C(0, 0, 1)])
    assert arc_path(ch, TerminalPair(Point(1, 0), Point(-1, 0))).length == pytest.approx(math.pi)


def test_arc_path_symmetric(sym_chain, sym_terminals):
    p = arc_path(sym_chain, sym_terminals)
    assert p.length == pytest.approx(4 * math.pi / 3, rel=1e-12)
    assert [e.kind for e in p.edges] in (["A", "A"], ["B", "B"])
    q = arc_path(sym_chain, TerminalPair(Point(-1, 0), sym_chain.a(1)))
    assert q.length == pytest.approx(TWO_THIRDS_PI, rel=1e-12)


def test_arc_path_uses_gate_when_shorter():
    ch = make_chain([C(0, 0, 1), C(1.9, 0, 1)])
    u = ch.circles[0].point_at(math.radians(60))
    v = ch.circles[1].point_at(math.radians(-120))
    p = arc_path(ch, TerminalPair(u, v))
    assert any(e.kind == "gate" for e in p.edges)


def _enumerate_ladder(ar, n):
    """All simple u-v routes in the arc graph (tiny n only)."""
    import itertools
    nodes = ["u", "v"] + [f"{s}{j}" for j in range(1, n) for s in "ab"]
    def name(s, j):
        return "u" if j == 0 else "v" if j == n else f"{s}{j}"
    edges = {}
    for i in range(1, n + 1):
        edges[frozenset((name("a", i - 1), name("a", i)))] = ar.A[i - 1]
        edges[frozenset((name("b", i - 1), name("b", i)))] = min(
            ar.B[i - 1], edges.get(frozenset((name("b", i - 1), name("b", i))), math.inf))
    for j in range(1, n):
        a, b = ar.gates[j - 1]
        edges[frozenset((f"a{j}", f"b{j}"))] = dist(a, b)
    others = [x for x in nodes if x not in ("u", "v")]
    best = math.inf
    for k in range(len(others) + 1):
        for mid in itertools.permutations(others, k):
            path = ("u", *mid, "v")
            try:
                best = min(best, sum(edges[frozenset(e)] for e in zip(path, path[1:])))
            except KeyError:
                pass
    return best


@pytest.mark.parametrize("seed", range(10))
def test_arc_path_matches_enumeration_and_reversal(seed):
    rng = random.Random(seed)
    ch = random_chain(rng, rng.randint(2, 4))
    rch = reverse(ch)
    for t in sample_terminals(ch, rng, 5):
        ar = arcs(ch, t)
        p = arc_path(ch, t)
        if ch.n > 1:
            assert p.length == pytest.approx(_enumerate_ladder(ar, ch.n), rel=1e-12)
        assert arc_path(rch, TerminalPair(t.v, t.u)).length == pytest.approx(p.length, rel=1e-9)
        rb = rubber_band(ch, t)
        assert p.length >= rb.length - 1e-9 >= dist(t.u, t.v) - 2e-9
        assert math.isclose(sum(e.length for e in p.edges), p.length, rel_tol=1e-12)


# -- chain stretch -------------------------------------------------------------------

def test_chain_stretch_requires_samples(sym_chain):
    with pytest.raises(ValueError):
        chain_stretch(sym_chain, 4)


def test_chain_stretch_symmetric(sym_chain):
    est, t = chain_stretch(sym_chain, 16)
    assert est >= 4 * math.pi / 9
    assert est == pytest.approx(1.5202905720686328, rel=1e-9)
    assert arc_path(sym_chain, t).length / rubber_band(sym_chain, t).length == pytest.approx(est, rel=1e-12)


def test_chain_stretch_single_circle_small_grid():
    est, _ = chain_stretch(make_chain([C(0, 0, 1)]), 16)
    assert est <= math.pi / 2 + 1e-9
    assert est > 1.57


def test_chain_stretch_monotone_under_doubling():
    ch = make_chain([C(0, 0, 1), C(1.5, 0.3, 0.8), C(2.6, -0.2, 1.1)])
    vals = [chain_stretch(ch, m, 2)[0] for m in (8, 16, 32)]
    assert vals == sorted(vals)
    assert vals[-1] < 1.998


# -- triangulation to chain ------------------------------------------------------------

def test_chain_from_triangulation_abcd():
    t = triangulate([(0, 0), (10, 0), (5, 1), (5, -1)])
    ch, term = chain_from_triangulation(t, 0, 1)
    assert [c.center for c in ch.circles] == [pytest.approx((2.6, 0)), pytest.approx((7.4, 0))]
    assert [c.radius for c in ch.circles] == pytest.approx([2.6, 2.6])
    assert term == (Point(0, 0), Point(10, 0))


def test_chain_from_triangulation_edge():
    t = triangulate([(0, 0), (1, 0), (0, 1)])
    assert chain_from_triangulation(t, 0, 1) is None


def test_terminal_at_endpoints_are_permissible(sym_chain):
    for fu in (0.0, 0.5, 1.0):
        t = terminal_at(sym_chain, fu, 0.5)
        arcs(sym_chain, t)
