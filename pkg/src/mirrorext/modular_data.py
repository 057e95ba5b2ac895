"""Modular data (S-matrix, conformal weights, central charge) and the Verlinde formula.

S is approximate (complex doubles); conformal weights and the central charge
are exact ``Fraction``s, so weight integrality is decided without tolerance.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from . import config
from .errors import DualityError, IntegralityError, NonPseudoUnitaryError, ShapeError, UnknownLabel
from .fusion_ring import FusionRing, Label, LabelRef, fpdim_object, product_name
from .report import CheckReport, entry


def _memo(obj, key, fn):
    cache = obj.__dict__.setdefault("_memo", {})
    if key not in cache:
        cache[key] = fn()
    return cache[key]


@dataclass(frozen=True, eq=False)
class ModularData:
    names: tuple[str, ...]
    S: np.ndarray
    h: tuple[Fraction, ...]
    c: Fraction
    unit: int = 0

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        S = np.array(self.S, dtype=complex)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ShapeError(f"S must be square, got shape {S.shape}")
        if S.shape[0] != len(names) or len(self.h) != len(names):
            raise ShapeError(f"{len(names)} labels, {len(self.h)} weights, S of size {S.shape[0]}")
        if len(set(names)) != len(names):
            raise ShapeError("label names must be unique")
        if not 0 <= self.unit < len(names):
            raise UnknownLabel(f"unit index {self.unit} out of range")
        S.flags.writeable = False
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "h", tuple(Fraction(x) for x in self.h))
        object.__setattr__(self, "c", Fraction(self.c))

    def __repr__(self) -> str:
        return f"ModularData({len(self.names)} labels, c={self.c})"

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(Label(i, n) for i, n in enumerate(self.names))

    @cached_property
    def _name_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def index(self, ref: LabelRef) -> int:
        if isinstance(ref, Label):
            ref = ref.index
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if 0 <= ref < self.size:
                return int(ref)
            raise UnknownLabel(f"label index {ref} out of range")
        try:
            return self._name_index[ref]
        except (KeyError, TypeError):
            raise UnknownLabel(f"unknown label {ref!r}") from None

    def label(self, ref: LabelRef) -> Label:
        i = self.index(ref)
        return Label(i, self.names[i])

    @property
    def twists(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.array([float(x) for x in self.h]))

    def dual_map(self, tol=None) -> tuple[int, ...]:
        tol = config.resolve(tol)
        return _memo(self, ("dual", tol), lambda: _s2_permutation(self.S, tol.unitarity))

    @property
    def dual(self) -> tuple[int, ...]:
        return self.dual_map()

    def ring(self, tol=None) -> FusionRing:
        """Verlinde fusion ring, computed once per tolerance record."""
        tol = config.resolve(tol)
        return _memo(self, ("ring", tol), lambda: verlinde_fusion(self, tol))

    def same_as(self, other: "ModularData") -> bool:
        return (self.names == other.names and self.h == other.h and self.c == other.c
                and self.unit == other.unit and np.array_equal(self.S, other.S))


def _s2_permutation(S: np.ndarray, tol: float) -> tuple[int, ...]:
    P = S @ S
    n = S.shape[0]
    perm = [int(np.argmax(np.abs(P[a]))) for a in range(n)]
    target = np.zeros((n, n))
    target[np.arange(n), perm] = 1.0
    resid = float(np.max(np.abs(P - target))) if n else 0.0
    if resid >= tol or sorted(perm) != list(range(n)):
        raise DualityError(f"S^2 is not a permutation matrix (residual {resid:.3g})")
    return tuple(perm)


def _verlinde_raw(S: np.ndarray, unit: int) -> np.ndarray:
    row = S[unit]
    Sc = S.conj().T
    n = S.shape[0]
    out = np.empty((n, n, n), dtype=complex)
    for a in range(n):
        out[a] = (S * (S[a] / row)[None, :]) @ Sc
    return out


def validate_modular(md: ModularData, tol=None) -> CheckReport:
    tol = config.resolve(tol)
    S, n, u = md.S, md.size, md.unit
    names = md.names
    rep = CheckReport(subject=f"modular data ({n} labels, c = {md.c})")
    eps = tol.unitarity

    asym = np.abs(S - S.T)
    bad = [(names[a], names[b]) for a, b in zip(*np.nonzero(asym >= eps)) if a < b]
    rep.add(entry("symmetry", "S is symmetric", not bad,
                  f"max |S - S^T| = {asym.max(initial=0.0):.3g}", bad))

    dev = np.abs(S @ S.conj().T - np.eye(n))
    bad = [names[a] for a in range(n) if dev[a].max(initial=0.0) >= eps]
    rep.add(entry("unitarity", "S is unitary", not bad,
                  f"max |S S^dagger - 1| = {dev.max(initial=0.0):.3g}", bad))

    row = S[u]
    bad = [names[a] for a in range(n) if not (row[a].real > 0 and abs(row[a].imag) < eps)]
    rep.add(entry("positivity", "unit row of S is strictly positive (pseudo-unitary)", not bad,
                  offenders=bad))

    try:
        perm = _s2_permutation(S, eps)
        bad = [names[a] for a in range(n) if perm[perm[a]] != a]
        if perm[u] != u:
            bad.insert(0, names[u])
        rep.add(entry("s2_permutation", "S^2 is an involutive permutation fixing the unit", not bad,
                      offenders=bad))
    except DualityError as exc:
        rep.add(entry("s2_permutation", "S^2 is an involutive permutation fixing the unit", False, str(exc)))

    rep.add(entry("theta_unit", "unit has weight 0 (trivial twist)", md.h[u] == 0,
                  f"h_unit = {md.h[u]}", [] if md.h[u] == 0 else [names[u]]))

    if np.any(np.abs(row) < eps):
        rep.add(entry("verlinde_integrality", "Verlinde numbers are nonnegative integers", False,
                      "unit row of S has a zero entry"))
    else:
        raw = _verlinde_raw(S, u)
        near = np.rint(raw.real)
        resid = np.abs(raw - near)
        bad_idx = list(zip(*np.nonzero((resid > tol.verlinde) | (near < 0))))
        bad = [(names[a], names[b], names[c]) for a, b, c in bad_idx]
        rep.add(entry("verlinde_integrality", "Verlinde numbers are nonnegative integers", not bad,
                      f"max residual {resid.max(initial=0.0):.3g}", bad))
    return rep


def verlinde_fusion(md: ModularData, tol=None) -> FusionRing:
    """Fusion ring from S via ``N_ab^c = sum_x S_ax S_bx conj(S_cx) / S_{unit,x}``."""
    tol = config.resolve(tol)
    u = md.unit
    if np.any(np.abs(md.S[u]) < tol.unitarity):
        raise NonPseudoUnitaryError("unit row of S has a zero entry; Verlinde formula undefined")
    raw = _verlinde_raw(md.S, u)
    near = np.rint(raw.real)
    resid = np.abs(raw - near)
    worst = np.unravel_index(int(np.argmax(resid)), resid.shape) if resid.size else (0, 0, 0)
    worst_val = float(resid[worst]) if resid.size else 0.0
    if worst_val > tol.verlinde:
        w = tuple(md.names[i] for i in worst)
        raise IntegralityError(f"Verlinde sum {w} is {raw[worst]:.6g}, off by {worst_val:.3g}",
                               worst=w, residual=worst_val)
    if np.any(near < 0):
        w = tuple(md.names[i] for i in np.argwhere(near < 0)[0])
        raise IntegralityError(f"negative Verlinde number at {w}", worst=w, residual=0.0)
    N = {(int(a), int(b), int(c)): int(near[a, b, c]) for a, b, c in zip(*np.nonzero(near))}
    return FusionRing(md.names, N, u, md.dual_map(tol))


def quantum_dims(md: ModularData, tol=None) -> dict[Label, float]:
    """``d_a = S_{unit,a} / S_{unit,unit}``; warns if a value disagrees with FPdim."""
    tol = config.resolve(tol)
    row = md.S[md.unit]
    d = {lab: float((row[lab.index] / row[md.unit]).real) for lab in md.labels}
    ring = md.ring(tol)
    off = [lab.name for lab in md.labels if abs(d[lab] - fpdim_object(ring, lab.index, tol)) >= tol.fp]
    if off:
        warnings.warn(f"quantum dimensions differ from FPdim at {off}", RuntimeWarning, stacklevel=2)
    return d


def deligne_modular(md1: ModularData, md2: ModularData) -> ModularData:
    """Product category: Kronecker product S, added weights and central charges."""
    names = tuple(product_name(a, x) for a in md1.names for x in md2.names)
    h = tuple(a + x for a in md1.h for x in md2.h)
    return ModularData(names, np.kron(md1.S, md2.S), h, md1.c + md2.c, md1.unit * md2.size + md2.unit)


def twist_integral(md: ModularData, subset: Iterable[LabelRef]) -> tuple[bool, list[Label]]:
    """True iff every weight in the subset is an integer (exact test)."""
    bad = [md.label(x) for x in subset]
    bad = sorted({lab for lab in bad if md.h[lab.index].denominator != 1})
    return not bad, bad


def require_valid(md: ModularData, tol=None, role: str = "category") -> None:
    """Raise unless ``md`` passes every modular-data check."""
    tol = config.resolve(tol)
    rep = _memo(md, ("report", tol), lambda: validate_modular(md, tol))
    if rep.overall:
        return
    from .errors import InvalidInput

    if rep["positivity"].status != "pass":
        raise NonPseudoUnitaryError(f"{role} is not pseudo-unitary")
    raise InvalidInput(f"{role} fails modular-data checks: {', '.join(rep.failed())}")
