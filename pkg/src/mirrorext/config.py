"""Global tolerance record."""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    fp: float = 1e-9  # real-valued invariant checks (FPdim and friends)
    unitarity: float = 1e-9  # symmetry, unitarity, S^2 permutation
    verlinde: float = 1e-6  # distance of a Verlinde sum from the nearest integer
    power_iteration: float = 1e-12  # successive Rayleigh quotients
    max_iterations: int = 10_000
    snap: float = 1e-13  # S entries smaller than this become exact zeros

    def with_tol(self, tol: float) -> "Tolerances":
        return replace(self, fp=tol, unitarity=tol)


DEFAULT = Tolerances()


def resolve(tol: Tolerances | float | None) -> Tolerances:
    if tol is None:
        return DEFAULT
    if isinstance(tol, Tolerances):
        return tol
    return DEFAULT.with_tol(float(tol))
