"""Seeded experiment drivers: random triangulations, random chains, lower-bound point sets.

Every driver derives one ``random.Random`` per trial from ``(seed, trial)``,
so results do not depend on how trials are spread over worker processes.
"""
from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .chain import (
    Chain,
    TerminalPair,
    arc_path,
    chain_from_triangulation,
    chain_stretch,
    make_chain,
    rubber_band,
    stab_order,
)
from .constants import DEFAULT_CONSTANTS, RHO, PotentialConstants
from .delaunay import Triangulation, triangulate
from .errors import ChainError, DegenerateSegmentError
from .geomcore import Circle, Point, dist
from .potential import joint_decompositions, potential
from .stretch import EdgeGraph, StretchReport, shortest_path_length, stretch_factor

PEAK_TOL = 1e-9
PREFIX_TOL = 1e-9
JITTER_ANGLE = 1e-12
LOWERBOUND_SQUASH = 0.02
MAX_REJECTIONS = 1000


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent generator for one trial of a seeded run."""
    return random.Random(f"{seed}:{trial}")


def worker_count(env: str = "STRETCH_THREADS") -> int:
    """Worker processes from the environment: unset means 1, 0 means one per CPU."""
    raw = os.environ.get(env, "").strip()
    if not raw:
        return 1
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"{env} must be a non-negative integer, got {raw!r}") from None
    if k < 0:
        raise ValueError(f"{env} must be a non-negative integer, got {raw!r}")
    return k if k > 0 else (os.cpu_count() or 1)


def ordered_map(fn: Callable, items: Iterable, workers: int = 1) -> list:
    """``list(map(fn, items))``, fanned out over processes when ``workers > 1``; order is kept."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


# -- point sets --------------------------------------------------------------

def random_points(rng: random.Random, n: int) -> list[Point]:
    """``n`` distinct points uniform in the unit square."""
    seen: set[Point] = set()
    out = []
    while len(out) < n:
        p = Point(rng.random(), rng.random())
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def lowerbound_points(n: int, squash: float = LOWERBOUND_SQUASH) -> list[Point]:
    """Points on the unit circle pulled inward onto the ellipse with semi-axes 1 and 1 - squash.

    Upper-half points sit at angles 2 pi k / n; lower-half points are shifted by
    half a step so no four points are co-circular by symmetry. Pulling the
    points off the circle flattens the hull and makes graph paths between
    opposite sides follow the boundary.
    """
    if n < 8:
        raise ValueError("lower-bound construction needs n >= 8")
    out = []
    for k in range(n):
        th = 2.0 * math.pi * k / n
        if th > math.pi:
            th += math.pi / n
        out.append(Point(math.cos(th), (1.0 - squash) * math.sin(th)))
    return out


# -- random triangulation experiments ----------------------------------------

@dataclass(frozen=True)
class ExperimentRecord:
    seed: int
    n: int
    trial: int
    stretch: float
    witness: tuple[int, int]
    runtime_ms: float


def stretch_trial(args: tuple[int, int, int]) -> ExperimentRecord:
    seed, n, trial = args
    start = time.perf_counter()
    pts = random_points(trial_rng(seed, trial), n)
    rep = stretch_factor(triangulate(pts, seed=seed))
    return ExperimentRecord(seed, n, trial, rep.stretch, rep.witness, 1e3 * (time.perf_counter() - start))


def run_random(n: int, trials: int, seed: int, workers: int = 1) -> list[ExperimentRecord]:
    if n < 3 or trials < 1:
        raise ValueError("need n >= 3 and trials >= 1")
    return ordered_map(stretch_trial, [(seed, n, k) for k in range(trials)], workers)


def lowerbound(n: int) -> StretchReport:
    return stretch_factor(triangulate(lowerbound_points(n)))


# -- triangulation to chain -------------------------------------------------

@dataclass(frozen=True)
class PathBoundCheck:
    x: int
    y: int
    jittered: bool
    chain_n: int
    euclid: float
    band: float
    obstructed: bool
    graph: float
    arc: float

    @property
    def ok(self) -> bool:
        return (not self.obstructed
                and abs(self.band - self.euclid) <= 1e-9 * self.euclid
                and self.graph <= self.arc + 1e-9)


def _rotate_about(y: Point, x: Point, angle: float) -> Point:
    c, s = math.cos(angle), math.sin(angle)
    dx, dy = y.x - x.x, y.y - x.y
    return Point(x.x + c * dx - s * dy, x.y + s * dx + c * dy)


def path_bound_check(t: Triangulation, x: int, y: int, seed: int = 0) -> PathBoundCheck | None:
    """Compare graph distance, arc path and rubber band for a non-adjacent pair.

    If segment xy runs through a vertex, y is rotated about x by
    ``JITTER_ANGLE`` radians, the set is re-triangulated and the check runs on
    the perturbed triangulation (reported via ``jittered``). Returns ``None``
    for adjacent pairs.
    """
    jittered = False
    try:
        built = chain_from_triangulation(t, x, y)
    except DegenerateSegmentError:
        pts = list(t.points)
        pts[y] = _rotate_about(pts[y], pts[x], JITTER_ANGLE)
        t = triangulate(pts, seed=seed)
        built = chain_from_triangulation(t, x, y)
        jittered = True
    if built is None:
        return None
    chain, term = built
    rb = rubber_band(chain, term)
    g = shortest_path_length(EdgeGraph.from_triangulation(t), x, y)
    return PathBoundCheck(x, y, jittered, chain.n, dist(term.u, term.v), rb.length, rb.obstructed,
                          g, arc_path(chain, term).length)


# -- random chains ----------------------------------------------------------

def random_chain(rng: random.Random, n: int, max_rejections: int = MAX_REJECTIONS) -> Chain:
    """Random valid chain of ``n`` circles.

    Each new circle gets a radius within a factor 3 of its predecessor and a
    center distance strictly between |r - r'| and r + r', so consecutive
    circles always cross. The heading turns by up to 120 degrees per link;
    links that break the disjoint-connecting-arc property are redrawn.
    """
    if n < 1:
        raise ValueError("a chain needs at least one circle")
    r = rng.uniform(0.5, 2.0)
    circles = [Circle(Point(0.0, 0.0), r)]
    heading = rng.uniform(-math.pi, math.pi)
    while len(circles) < n:
        last = circles[-1]
        for _ in range(max_rejections + 1):
            r2 = last.radius * math.exp(rng.uniform(-math.log(3.0), math.log(3.0)))
            lo, hi = abs(last.radius - r2), last.radius + r2
            d = lo + (hi - lo) * rng.uniform(0.02, 0.98)
            h = heading + rng.uniform(-2.0 * math.pi / 3.0, 2.0 * math.pi / 3.0)
            cand = Circle(Point(last.center.x + d * math.cos(h), last.center.y + d * math.sin(h)), r2)
            try:
                make_chain(circles + [cand])
            except ChainError:
                continue
            circles.append(cand)
            heading = h
            break
        else:
            raise ChainError(f"no valid link after {max_rejections} rejections")
    return make_chain(circles)


def terminal_at(chain: Chain, fu: float, fv: float) -> TerminalPair:
    """Terminals at fractions ``fu``, ``fv`` along the permissible arcs of the end circles."""
    su, spu = chain.terminal_arc("u")
    sv, spv = chain.terminal_arc("v")
    return TerminalPair(chain.circles[0].point_at(su + fu * spu), chain.circles[-1].point_at(sv + fv * spv))


def sample_terminals(chain: Chain, rng: random.Random, count: int) -> list[TerminalPair]:
    return [terminal_at(chain, rng.random(), rng.random()) for _ in range(count)]


VIOLATION_KINDS = ("upsilon", "ratio", "stab_order", "peak_travel", "prefix_potential", "ordering")


@dataclass
class ChainResult:
    """Property checks on one chain over a batch of terminal pairs."""

    index: int
    n: int
    pairs: int
    unobstructed: int
    max_upsilon: float
    max_ratio: float
    stretch_estimate: float
    violations: dict[str, int] = field(default_factory=lambda: dict.fromkeys(VIOLATION_KINDS, 0))


def check_chain(chain: Chain, terminals: Sequence[TerminalPair], index: int = 0,
                constants: PotentialConstants = DEFAULT_CONSTANTS, samples_per_arc: int = 8,
                refine_iters: int = 1, rho: float = RHO) -> ChainResult:
    bad = dict.fromkeys(VIOLATION_KINDS, 0)
    for i, dec in enumerate(joint_decompositions(chain), 1):
        o0, o1 = chain.circles[i - 1], chain.circles[i]
        d = dist(o0.center, o1.center)
        if abs(dec.H - d) > PEAK_TOL * d or dec.V < abs(o1.radius - o0.radius) - PEAK_TOL:
            bad["peak_travel"] += 1
    phi_total = potential(chain, constants)
    if chain.n >= 2 and phi_total > potential(make_chain(chain.circles[:-1]), constants) + PREFIX_TOL:
        bad["prefix_potential"] += 1

    scale = max(c.radius for c in chain.circles)
    max_ups = max_ratio = -math.inf
    unobstructed = 0
    for t in terminals:
        P = arc_path(chain, t).length
        rb = rubber_band(chain, t)
        D = rb.length
        ups = P - constants.lam * D + phi_total
        max_ups = max(max_ups, ups)
        if ups >= 0.0:
            bad["upsilon"] += 1
        if D > 0.0:
            ratio = P / D
            max_ratio = max(max_ratio, ratio)
            if ratio >= rho:
                bad["ratio"] += 1
        if P < D - 1e-9 * scale or D < dist(t.u, t.v) - 1e-9 * scale:
            bad["ordering"] += 1
        if not rb.obstructed:
            unobstructed += 1
            if not stab_order(chain, t):
                bad["stab_order"] += 1
    est = math.nan
    if samples_per_arc > 0:
        est, _ = chain_stretch(chain, samples_per_arc, refine_iters)
        if est >= rho:
            bad["ratio"] += 1
    return ChainResult(index, chain.n, len(terminals), unobstructed, max_ups, max_ratio, est, bad)


def chain_trial(args: tuple[int, int, int, int, int]) -> ChainResult:
    seed, index, max_n, pairs, samples = args
    rng = trial_rng(seed, index)
    chain = random_chain(rng, rng.randint(2, max_n))
    return check_chain(chain, sample_terminals(chain, rng, pairs), index, samples_per_arc=samples)


@dataclass
class SuiteSummary:
    seed: int
    count: int
    max_n: int
    pairs_per_chain: int
    total_pairs: int
    unobstructed_pairs: int
    max_upsilon: float
    max_ratio: float
    max_stretch_estimate: float
    violations: dict[str, int]

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    def to_json(self) -> dict:
        return {
            "seed": self.seed, "count": self.count, "max_n": self.max_n,
            "pairs_per_chain": self.pairs_per_chain, "total_pairs": self.total_pairs,
            "unobstructed_pairs": self.unobstructed_pairs, "max_upsilon": self.max_upsilon,
            "max_ratio": self.max_ratio, "max_stretch_estimate": self.max_stretch_estimate,
            "violations": dict(self.violations), "total_violations": self.total_violations,
        }


def summarize(results: Sequence[ChainResult], seed: int, count: int, max_n: int, pairs: int) -> SuiteSummary:
    viol = dict.fromkeys(VIOLATION_KINDS, 0)
    for r in results:
        for k, v in r.violations.items():
            viol[k] += v
    ests = [r.stretch_estimate for r in results if not math.isnan(r.stretch_estimate)]
    return SuiteSummary(
        seed, count, max_n, pairs,
        sum(r.pairs for r in results), sum(r.unobstructed for r in results),
        max((r.max_upsilon for r in results), default=-math.inf),
        max((r.max_ratio for r in results), default=-math.inf),
        max(ests, default=math.nan), viol,
    )


def run_chain_suite(count: int, max_n: int, seed: int, pairs: int = 64, samples_per_arc: int = 8,
                    workers: int = 1) -> SuiteSummary:
    if count < 1 or max_n < 2 or pairs < 1:
        raise ValueError("need count >= 1, max_n >= 2 and pairs >= 1")
    jobs = [(seed, k, max_n, pairs, samples_per_arc) for k in range(count)]
    return summarize(ordered_map(chain_trial, jobs, workers), seed, count, max_n, pairs)
