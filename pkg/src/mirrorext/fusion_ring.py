"""Fusion rings: sparse structure constants, axiom checks, Frobenius-Perron dimensions.

A ring is stored as a sparse map ``(a, b, c) -> N_ab^c`` over integer label
indices.  Multiplicities are plain Python ints, so nothing caps their size;
the dense float tensor used for eigenvalue work is derived on demand.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Union

import numpy as np

from . import config
from .errors import ConvergenceError, DualityError, UnknownLabel
from .report import CheckReport, entry


class Label(NamedTuple):
    index: int
    name: str

    def __str__(self) -> str:
        return self.name


LabelRef = Union[int, str, Label]


def infer_duals(N: Mapping[tuple[int, int, int], int], unit: int, size: int | None = None) -> tuple[int, ...]:
    """Recover the dual of every label from the unit channel ``N_{a,b}^{unit} = 1``."""
    if size is None:
        size = 1 + max([unit] + [max(k) for k in N])
    partners: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for (a, b, c), m in N.items():
        if c == unit and m:
            partners[a].append((b, m))
    dual = []
    for a in range(size):
        found = partners.get(a, [])
        if len(found) != 1:
            raise DualityError(f"label {a} has {len(found)} dual candidates")
        b, m = found[0]
        if m != 1:
            raise DualityError(f"label {a} meets its dual {b} with multiplicity {m}")
        dual.append(b)
    if any(dual[dual[a]] != a for a in range(size)):
        raise DualityError("inferred duality is not an involution")
    return tuple(dual)


@dataclass(frozen=True, eq=False)
class FusionRing:
    names: tuple[str, ...]
    N: Mapping[tuple[int, int, int], int]
    unit: int = 0
    dual: tuple[int, ...] | None = None

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if len(set(names)) != len(names):
            raise ValueError("label names must be unique")
        n = len(names)
        if not 0 <= self.unit < n:
            raise UnknownLabel(f"unit index {self.unit} out of range")
        clean: dict[tuple[int, int, int], int] = {}
        for key, m in self.N.items():
            a, b, c = (int(x) for x in key)
            if not all(0 <= x < n for x in (a, b, c)):
                raise UnknownLabel(f"fusion entry {key} references an unknown label")
            m = int(m)
            if m < 0:
                raise ValueError(f"negative multiplicity at {key}")
            if m:
                clean[(a, b, c)] = clean.get((a, b, c), 0) + m
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "N", dict(sorted(clean.items())))
        if self.dual is None:
            dual = infer_duals(self.N, self.unit, n)
        else:
            dual = tuple(int(d) for d in self.dual)
            if len(dual) != n or not all(0 <= d < n for d in dual):
                raise DualityError("dual map must send every label to a label")
        object.__setattr__(self, "dual", dual)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (self.names, self.unit, self.dual, self.N) == (other.names, other.unit, other.dual, other.N)

    __hash__ = None

    def __repr__(self) -> str:
        return f"FusionRing({len(self.names)} labels, {len(self.N)} nonzero N)"

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

    def mult(self, a: LabelRef, b: LabelRef, c: LabelRef) -> int:
        return self.N.get((self.index(a), self.index(b), self.index(c)), 0)

    @cached_property
    def _products(self) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
        table: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
        for (a, b, c), m in self.N.items():
            table[(a, b)].append((c, m))
        return {k: tuple(v) for k, v in table.items()}

    def products(self, a: int, b: int) -> tuple[tuple[int, int], ...]:
        """Nonzero ``(c, N_ab^c)`` pairs in label order, by raw index."""
        return self._products.get((a, b), ())

    @cached_property
    def dense(self) -> np.ndarray:
        T = np.zeros((self.size,) * 3)
        for (a, b, c), m in self.N.items():
            T[a, b, c] = m
        T.flags.writeable = False
        return T

    def fusion_matrix(self, a: LabelRef) -> np.ndarray:
        """``(N_a)_{bc} = N_{ab}^c``."""
        return np.array(self.dense[self.index(a)])

    def restrict(self, subset: Iterable[LabelRef]) -> "FusionRing":
        """The fusion sub-ring on a closed label set, relabeled in ring order."""
        keep = sorted({self.index(x) for x in subset} | {self.unit})
        pos = {old: new for new, old in enumerate(keep)}
        N = {}
        for (a, b, c), m in self.N.items():
            if a in pos and b in pos:
                if c not in pos:
                    raise ValueError(f"label set is not closed: {self.names[c]} appears in "
                                     f"{self.names[a]} x {self.names[b]}")
                N[(pos[a], pos[b], pos[c])] = m
        if any(self.dual[i] not in pos for i in keep):
            raise ValueError("label set is not closed under duals")
        return FusionRing(tuple(self.names[i] for i in keep), N, pos[self.unit],
                          tuple(pos[self.dual[i]] for i in keep))

    @cached_property
    def fpdims(self) -> tuple[float, ...]:
        return _fpdims(self, config.DEFAULT)


def _product(ring: FusionRing, left: Counter, right_label: int) -> Counter:
    out: Counter = Counter()
    for e, m in left.items():
        for d, m2 in ring.products(e, right_label):
            out[d] += m * m2
    return out


def validate_ring(ring: FusionRing, tol=None) -> CheckReport:
    """Check every fusion-ring axiom; failures become report entries, never exceptions."""
    n, u, dual = ring.size, ring.unit, ring.dual
    N = ring.N
    names = ring.names
    rep = CheckReport(subject=f"fusion ring ({n} labels)")

    bad = [(names[a], names[b]) for a in range(n) for b in range(n)
           if N.get((u, a, b), 0) != (a == b) or N.get((a, u, b), 0) != (a == b)]
    rep.add(entry("unit", "unit is a two-sided identity", not bad, offenders=bad))

    bad = [names[a] for a in range(n) if dual[dual[a]] != a]
    if dual[u] != u:
        bad.insert(0, names[u])
    rep.add(entry("dual_involution", "dual is an involution fixing the unit", not bad, offenders=bad))

    bad = [(names[a], names[b]) for a in range(n) for b in range(n)
           if N.get((a, b, u), 0) != (b == dual[a])]
    rep.add(entry("unit_channel", "unit appears in a x b exactly when b is dual to a", not bad,
                  offenders=bad))

    bad = []
    for a in range(n):
        for b in range(n):
            ab = Counter(dict(ring.products(a, b)))
            for c in range(n):
                left = _product(ring, ab, c)
                right: Counter = Counter()
                for f, m in ring.products(b, c):
                    for d, m2 in ring.products(a, f):
                        right[d] += m * m2
                if +left != +right:
                    bad.append((names[a], names[b], names[c]))
    rep.add(entry("associativity", "associativity (a x b) x c = a x (b x c)", not bad, offenders=bad))

    bad = sorted({(names[a], names[b], names[c]) for (a, b, c), m in N.items()
                  if N.get((b, a, c), 0) != m})
    rep.add(entry("commutativity", "commutativity N_ab^c = N_ba^c", not bad, offenders=bad))

    # the compared relations are involutions, so scanning the nonzero triples suffices
    bad = sorted({(names[a], names[b], names[c]) for (a, b, c), m in N.items()
                  if N.get((dual[a], dual[b], dual[c]), 0) != m})
    rep.add(entry("dual_symmetry", "dual symmetry N_ab^c = N_a'b'^c'", not bad, offenders=bad))

    bad = sorted({(names[a], names[b], names[c]) for (a, b, c), m in N.items()
                  if not (m == N.get((dual[a], c, b), 0) == N.get((c, dual[b], a), 0))})
    rep.add(entry("frobenius_reciprocity", "Frobenius reciprocity N_ab^c = N_a'c^b = N_cb'^a",
                  not bad, offenders=bad))
    return rep


def fuse(ring: FusionRing, a: LabelRef, b: LabelRef) -> list[tuple[Label, int]]:
    i, j = ring.index(a), ring.index(b)
    return [(Label(c, ring.names[c]), m) for c, m in ring.products(i, j)]


def _fpdims(ring: FusionRing, tol: config.Tolerances, fallback: bool = True) -> tuple[float, ...]:
    # Power iteration on N_a + 1 for all labels at once.  The shift makes the
    # Perron-Frobenius eigenvalue strictly dominant even when N_a is periodic
    # (bipartite sl2 matrices, permutation matrices of pointed rings).
    n = ring.size
    M = ring.dense + np.eye(n)[None, :, :]
    V = np.ones((n, n))
    rq = np.full(n, np.nan)
    result = np.full(n, np.nan)
    active = np.ones(n, dtype=bool)
    for _ in range(tol.max_iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        W = np.einsum("abc,ac->ab", M[idx], V[idx])
        new = np.einsum("ab,ab->a", V[idx], W) / np.einsum("ab,ab->a", V[idx], V[idx])
        V[idx] = W / np.linalg.norm(W, axis=1, keepdims=True)
        done = np.abs(new - rq[idx]) < tol.power_iteration
        rq[idx] = new
        result[idx[done]] = new[done] - 1.0
        active[idx[done]] = False
    for a in np.flatnonzero(active):
        if not fallback:
            raise ConvergenceError(f"power iteration for {ring.names[a]} did not converge "
                                   f"in {tol.max_iterations} steps")
        result[a] = float(np.max(np.abs(np.linalg.eigvals(ring.dense[a]))))
    return tuple(float(x) for x in result)


def fpdim_object(ring: FusionRing, a: LabelRef, tol=None) -> float:
    """Frobenius-Perron dimension: the largest eigenvalue of the fusion matrix of ``a``."""
    i = ring.index(a)
    tol = config.resolve(tol)
    if tol == config.DEFAULT:
        return ring.fpdims[i]
    return _fpdims(ring, tol)[i]


def fpdim_category(ring: FusionRing, subset: Iterable[LabelRef] | None = None, tol=None) -> float:
    idx = range(ring.size) if subset is None else sorted({ring.index(x) for x in subset})
    tol = config.resolve(tol)
    d = ring.fpdims if tol == config.DEFAULT else _fpdims(ring, tol)
    return float(sum(d[i] ** 2 for i in idx))


def _closure_indices(ring: FusionRing, seeds: Iterable[int]) -> set[int]:
    closed = set(seeds) | {ring.unit}
    frontier = list(closed)
    while frontier:
        new = set()
        for a in frontier:
            new.add(ring.dual[a])
            for b in list(closed):
                new.update(c for c, _ in ring.products(a, b))
                new.update(c for c, _ in ring.products(b, a))
        frontier = [x for x in new if x not in closed]
        closed.update(frontier)
    return closed


def subring_closure(ring: FusionRing, seeds: Iterable[LabelRef]) -> frozenset[Label]:
    """Smallest label set containing the seeds and the unit, closed under fusion and duals."""
    idx = _closure_indices(ring, (ring.index(s) for s in seeds))
    return frozenset(Label(i, ring.names[i]) for i in idx)


def product_name(a: str, b: str) -> str:
    return f"{a}⊠{b}"


def deligne_product(r1: FusionRing, r2: FusionRing) -> FusionRing:
    """Labels are pairs ``(a, x)`` at index ``a * len(r2) + x``; structure constants multiply."""
    n2 = r2.size
    names = tuple(product_name(a, x) for a in r1.names for x in r2.names)
    N = {}
    for (a, b, c), m in r1.N.items():
        for (x, y, z), m2 in r2.N.items():
            N[(a * n2 + x, b * n2 + y, c * n2 + z)] = m * m2
    dual = tuple(r1.dual[a] * n2 + r2.dual[x] for a in range(r1.size) for x in range(n2))
    return FusionRing(names, N, r1.unit * n2 + r2.unit, dual)


def pointed_ring(order: int, names: Iterable[str] | None = None) -> FusionRing:
    """Group ring of the cyclic group of the given order."""
    names = tuple(names) if names is not None else tuple(str(g) for g in range(order))
    N = {(a, b, (a + b) % order): 1 for a in range(order) for b in range(order)}
    return FusionRing(names, N, 0)
