"""Modular data of the affine VOAs L_{sl_n}(k, 0), plus closed-form test fixtures.

Weights are written in Dynkin labels ``(l_1, ..., l_{n-1})``.  For inner
products a weight is mapped to its partition vector ``v_a = sum_{b >= a} l_b``
(with ``v_n = 0``); the form on the trace-zero hyperplane is then
``<v, w> = sum v_a w_a - |v| |w| / n``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import pi, sqrt

import numpy as np

from . import config
from .errors import InvalidLevel, InvalidRank
from .fusion_ring import FusionRing
from .modular_data import ModularData


@dataclass(frozen=True)
class AffineSpec:
    n: int
    k: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidRank(f"rank parameter n must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidLevel(f"level must be an integer >= 1, got {self.k!r}")

    def weights(self) -> list[tuple[int, ...]]:
        """Level-k dominant weights, vacuum first, then by level and reverse lexicographic order."""
        r = self.n - 1
        out = [w for w in itertools.product(range(self.k + 1), repeat=r) if sum(w) <= self.k]
        return sorted(out, key=lambda w: (sum(w), tuple(-x for x in w)))


def _partition(dynkin) -> list[int]:
    v = list(itertools.accumulate(reversed(dynkin)))[::-1]
    return v + [0]


def _form(v, w) -> Fraction:
    n = len(v)
    return sum(Fraction(a * b) for a, b in zip(v, w)) - Fraction(sum(v) * sum(w), n)


def conformal_weight(dynkin, k: int) -> Fraction:
    n = len(dynkin) + 1
    v = _partition(dynkin)
    two_rho = [2 * (n - 1 - a) for a in range(n)]
    lam_plus = [x + y for x, y in zip(v, two_rho)]
    return _form(v, lam_plus) / (2 * (k + n))


def _weight_name(dynkin) -> str:
    return "(" + ",".join(str(x) for x in dynkin) + ")"


def _normalize(R: np.ndarray, unit: int, snap: float) -> np.ndarray:
    # fix the overall scalar so that S is unitary with a positive unit row
    S = R * (abs(R[unit, unit]) / R[unit, unit]) / np.linalg.norm(R[unit])
    S.real[np.abs(S.real) < snap] = 0.0
    S.imag[np.abs(S.imag) < snap] = 0.0
    return S


def sl2_modular(k: int) -> ModularData:
    if not isinstance(k, int) or k < 1:
        raise InvalidLevel(f"level must be an integer >= 1, got {k!r}")
    idx = np.arange(k + 1) + 1
    S = sqrt(2 / (k + 2)) * np.sin(pi * np.outer(idx, idx) / (k + 2))
    S[np.abs(S) < config.DEFAULT.snap] = 0.0
    h = [Fraction(l * (l + 2), 4 * (k + 2)) for l in range(k + 1)]
    return ModularData(tuple(f"l{l}" for l in range(k + 1)), S, h, Fraction(3 * k, k + 2))


def _weyl_raw(xs: list[list[int]], m: int, det=np.linalg.det) -> np.ndarray:
    # sum_w sign(w) exp(-2 pi i <w(x), y> / m) = exp(2 pi i |x||y| / (n m)) det[exp(-2 pi i x_a y_b / m)]
    n = len(xs[0])
    size = len(xs)
    R = np.empty((size, size), dtype=complex)
    for p, x in enumerate(xs):
        for q, y in enumerate(xs):
            phase = np.exp(2j * pi * sum(x) * sum(y) / (n * m))
            R[p, q] = phase * det(np.exp(-2j * pi * np.outer(x, y) / m))
    return R


def sln_modular(n: int, k: int) -> ModularData:
    """Kac-Peterson modular data of L_{sl_n}(k, 0)."""
    spec = AffineSpec(n, k)
    weights = spec.weights()
    rho = [n - 1 - a for a in range(n)]
    shifted = [[a + b for a, b in zip(_partition(w), rho)] for w in weights]
    S = _normalize(_weyl_raw(shifted, k + n), 0, config.DEFAULT.snap)
    h = [conformal_weight(w, k) for w in weights]
    c = Fraction(k * (n * n - 1), k + n)
    return ModularData(tuple(_weight_name(w) for w in weights), S, h, c)


def sl2_fusion_oracle(k: int) -> FusionRing:
    """Truncated Clebsch-Gordan rule in doubled-spin labels, built without any S-matrix."""
    if not isinstance(k, int) or k < 1:
        raise InvalidLevel(f"level must be an integer >= 1, got {k!r}")
    N = {}
    for a in range(k + 1):
        for b in range(k + 1):
            for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1):
                if (a + b + c) % 2 == 0:
                    N[(a, b, c)] = 1
    return FusionRing(tuple(f"l{l}" for l in range(k + 1)), N, 0, tuple(range(k + 1)))


def ising_modular() -> ModularData:
    r = sqrt(2)
    S = 0.5 * np.array([[1, 1, r], [1, 1, -r], [r, -r, 0]], dtype=complex)
    h = [Fraction(0), Fraction(1, 2), Fraction(1, 16)]
    return ModularData(("1", "eps", "sigma"), S, h, Fraction(1, 2))


def trivial_modular() -> ModularData:
    return ModularData(("1",), np.array([[1.0]]), [Fraction(0)], Fraction(0))
