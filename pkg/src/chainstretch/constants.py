"""Shared constants of the potential argument; phi is derived in one place."""
from __future__ import annotations

import math
from dataclasses import dataclass

LAMBDA = 1.8
RHO = 1.998


def phi_from(lam: float, rho: float) -> float:
    """Weight of the potential: (3 / sqrt 5) (1 - lam / rho)."""
    return 3.0 / math.sqrt(5.0) * (1.0 - lam / rho)


@dataclass(frozen=True)
class PotentialConstants:
    lam: float = LAMBDA
    rho: float = RHO

    @property
    def phi(self) -> float:
        return phi_from(self.lam, self.rho)


DEFAULT_CONSTANTS = PotentialConstants()
