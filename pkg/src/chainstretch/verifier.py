"""Lipschitz certification of the four closing inequalities g_1..g_4 < 0.

``bound`` is the bisection scheme: an interval [s, t] with endpoint values
g(s), g(t) has ``max(g(s), g(t)) + L (t - s) / 2`` as an upper bound for g,
valid whenever |g'| <= L. Intervals whose bound is not yet below the guard
are halved, left half first.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from .constants import LAMBDA, RHO, phi_from

CERTIFIED = "certified_negative"
VIOLATION = "violation_found"
EXHAUSTED = "depth_exhausted"
_PRECEDENCE = {VIOLATION: 2, EXHAUSTED: 1, CERTIFIED: 0}

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class VerifierConfig:
    lam: float = LAMBDA
    rho: float = RHO
    lipschitz_L: float = 16.0
    guard: float = -1e-6
    max_depth: int = 64

    def __post_init__(self):
        if not self.guard < 0:
            raise ValueError("guard must be negative")
        if self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")

    @property
    def phi(self) -> float:
        return phi_from(self.lam, self.rho)


DEFAULT_CONFIG = VerifierConfig()

INTERVALS = {1: (HALF_PI, math.pi), 2: (HALF_PI, math.pi), 3: (0.0, HALF_PI), 4: (0.0, HALF_PI)}


def gamma_plus(alpha: float, lam: float = LAMBDA) -> float:
    """Threshold angle (3 sin a - a)/4 + arcsin(z / (lam sin z)), z = (a + sin a)/4.

    At alpha = 0 the ratio z / sin z is replaced by its limit 1.
    """
    z = (alpha + math.sin(alpha)) / 4.0
    ratio = 1.0 if z == 0.0 else z / math.sin(z)
    arg = ratio / lam
    if not -1.0 <= arg <= 1.0:
        raise ArithmeticError(f"gamma_plus: arcsin argument {arg} outside [-1, 1]; check lambda")
    return (3.0 * math.sin(alpha) - alpha) / 4.0 + math.asin(arg)


def f_eval(alpha: float, beta: float, gamma: float, lam: float = LAMBDA) -> float:
    return -lam * (math.cos(gamma) - math.cos(alpha) * (math.cos(beta - gamma) + beta * math.sin(beta - gamma)))


def g_eval(i: int, alpha: float, config: VerifierConfig = DEFAULT_CONFIG) -> float:
    if i not in INTERVALS:
        raise ValueError(f"inequality index must be 1..4, got {i}")
    lo, hi = INTERVALS[i]
    if not lo <= alpha <= hi:
        raise ValueError(f"alpha={alpha} outside [{lo}, {hi}] for g_{i}")
    lam, phi = config.lam, config.phi
    c = 2.0 * phi / 3.0 if i <= 2 else 4.0 * phi / 3.0
    base = math.sin(alpha) - alpha * math.cos(alpha) - 2.0 * phi / 3.0 - c * math.cos(alpha)
    if i == 1:
        return base + f_eval(alpha, 0.0, 0.0, lam)
    if i == 2:
        return base + f_eval(alpha, 0.0, gamma_plus(alpha, lam), lam)
    beta = math.sin(alpha)
    if i == 3:
        return base + f_eval(alpha, beta, 0.0, lam)
    return base + f_eval(alpha, beta, gamma_plus(alpha, lam), lam)


@dataclass
class BoundOutcome:
    status: str
    apex: float
    evaluations: int
    violation_point: float | None = None


def bound_function(g: Callable[[float], float], s: float, t: float,
                   config: VerifierConfig = DEFAULT_CONFIG) -> BoundOutcome:
    """Certify ``g < guard`` on [s, t] by Lipschitz bisection."""
    if not s < t:
        raise ValueError("bound needs s < t")
    L, guard = config.lipschitz_L, config.guard
    evals = 2
    gs, gt = g(s), g(t)

    def rec(s, t, gs, gt, depth) -> BoundOutcome:
        nonlocal evals
        if gs >= 0.0 or gt >= 0.0:
            return BoundOutcome(VIOLATION, max(gs, gt), 0, s if gs >= gt else t)
        apex = max(gs, gt) + L * (t - s) / 2.0
        if apex <= guard:
            return BoundOutcome(CERTIFIED, apex, 0)
        # Once an endpoint sits above the guard no subdivision can certify;
        # keep refining only until the bound is negative so the apex stays informative.
        unreachable = max(gs, gt) > guard
        if (unreachable and apex < 0.0) or depth >= config.max_depth:
            return BoundOutcome(EXHAUSTED, apex, 0)
        m = 0.5 * (s + t)
        gm = g(m)
        evals += 1
        left = rec(s, m, gs, gm, depth + 1)
        right = rec(m, t, gm, gt, depth + 1)
        worst = left if _PRECEDENCE[left.status] >= _PRECEDENCE[right.status] else right
        return BoundOutcome(worst.status, max(left.apex, right.apex), 0,
                            left.violation_point if left.violation_point is not None else right.violation_point)

    out = rec(s, t, gs, gt, 0)
    out.evaluations = evals
    return out


def bound(i: int, s: float, t: float, config: VerifierConfig = DEFAULT_CONFIG) -> BoundOutcome:
    return bound_function(lambda a: g_eval(i, a, config), s, t, config)


@dataclass
class CertificateReport:
    results: dict[int, BoundOutcome]
    config: VerifierConfig
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and len(self.results) == 4 and \
            all(r.status == CERTIFIED for r in self.results.values())

    @property
    def total_evaluations(self) -> int:
        return sum(r.evaluations for r in self.results.values())

    def to_json(self) -> dict:
        out = {
            "pass": self.passed,
            "inequalities": [
                {"i": i, "interval": list(INTERVALS[i]), "apex": r.apex, "status": r.status,
                 "evals": r.evaluations, "violation_point": r.violation_point}
                for i, r in sorted(self.results.items())
            ],
            "lambda": self.config.lam,
            "rho": self.config.rho,
            "phi": self.config.phi,
            "L": self.config.lipschitz_L,
            "guard": self.config.guard,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def certify(config: VerifierConfig = DEFAULT_CONFIG) -> CertificateReport:
    """Run ``bound`` for g_1, g_2 on [pi/2, pi] and g_3, g_4 on [0, pi/2]."""
    results = {}
    try:
        for i, (s, t) in INTERVALS.items():
            results[i] = bound(i, s, t, config)
    except ArithmeticError as exc:
        return CertificateReport(results, config, str(exc))
    return CertificateReport(results, config)


def _max_slope(fn: Callable[[float], float], lo: float, hi: float, sample_count: int, seed: int,
               h: float = 1e-6) -> float:
    if sample_count < 1000:
        raise ValueError("sample_count must be at least 1000")
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(sample_count):
        a = rng.uniform(lo + h, hi - h)
        worst = max(worst, abs(fn(a + h) - fn(a - h)) / (2.0 * h))
    return worst


def lipschitz_spot_check(i: int, sample_count: int = 100_000, seed: int = 0,
                         config: VerifierConfig = DEFAULT_CONFIG) -> float:
    """Largest central-difference slope of g_i over seeded uniform samples."""
    lo, hi = INTERVALS[i]
    return _max_slope(lambda a: g_eval(i, a, config), lo, hi, sample_count, seed)


def gamma_plus_spot_check(sample_count: int = 100_000, seed: int = 0, lam: float = LAMBDA) -> float:
    """Largest central-difference slope of gamma_plus over (0, pi)."""
    return _max_slope(lambda a: gamma_plus(a, lam), 0.0, math.pi, sample_count, seed)
