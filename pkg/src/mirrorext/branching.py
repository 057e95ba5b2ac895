"""Branching matrices Z of an extension U over V1 (x) V2, their necessary conditions, and search.

Checks run in a fixed order, (a) through (i).  Every check always gets a report
entry; a check whose inputs are unavailable (no bijection, open support) is
marked ``skip``, which counts as not passing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import config
from .errors import BudgetExceeded, InvalidInput, UnknownLabel
from .fusion_ring import FusionRing, LabelRef, _closure_indices, deligne_product, fpdim_category, fpdim_object
from .modular_data import ModularData, require_valid
from .report import SKIP, CheckEntry, CheckReport, entry

CHECKS = (
    ("a", "unit_sector", "(a) vacuum pairs only with vacuum"),
    ("b", "multiplicity_free", "(b) nonzero multiplicities equal 1"),
    ("c", "bijection", "(c) support is the graph of a bijection tau"),
    ("d", "dual_symmetry", "(d) Z is invariant under dualizing both sides"),
    ("e", "weight_integrality", "(e) paired conformal weights sum to a nonnegative integer"),
    ("f", "fusion_closure", "(f) both supports are closed under fusion and duals"),
    ("g", "fusion_match", "(g) tau preserves fusion rules on the support"),
    ("h", "fpdim_balance", "(h) tau preserves FPdim; support dimensions balance"),
    ("i", "global_dimension", "(i) FPdim(A) * FPdim(C_A) = FPdim(C) on the support subcategory"),
)
CHECK_NAMES = tuple(name for _, name, _ in CHECKS)
_TITLES = {name: title for _, name, title in CHECKS}
_BY_LETTER = {letter: name for letter, name, _ in CHECKS}


@dataclass
class BranchingMatrix:
    cat1: ModularData
    cat2: ModularData
    entries: dict[tuple[int, int], int]
    hypotheses: dict[str, bool] = field(default_factory=dict)
    tau: dict[int, int] | None = None
    validated: bool = False

    def __post_init__(self):
        clean = {}
        for key, m in self.entries.items():
            i, j = key
            try:
                i, j = self.cat1.index(i), self.cat2.index(j)
            except UnknownLabel as exc:
                raise InvalidInput(f"branching entry {key}: {exc}") from None
            if int(m) != m or m < 0:
                raise InvalidInput(f"branching entry {key} has invalid multiplicity {m!r}")
            if m:
                clean[(i, j)] = clean.get((i, j), 0) + int(m)
        self.entries = dict(sorted(clean.items()))

    @classmethod
    def from_pairs(cls, cat1, cat2, pairs: Iterable, hypotheses=None) -> "BranchingMatrix":
        """Build from ``(i, j)`` or ``(i, j, mult)`` items; labels may be names or indices."""
        entries: dict = {}
        for p in pairs:
            i, j, *rest = p
            m = rest[0] if rest else 1
            try:
                key = (cat1.index(i), cat2.index(j))
            except UnknownLabel as exc:
                raise InvalidInput(f"branching pair {tuple(p)}: {exc}") from None
            entries[key] = entries.get(key, 0) + m
        return cls(cat1, cat2, entries, dict(hypotheses or {}))

    @property
    def support(self) -> list[tuple[int, int]]:
        return sorted(self.entries)

    @property
    def support1(self) -> list[int]:
        return sorted({i for i, _ in self.entries})

    @property
    def support2(self) -> list[int]:
        return sorted({j for _, j in self.entries})

    def pair_names(self) -> list[tuple[str, str, int]]:
        return [(self.cat1.names[i], self.cat2.names[j], m) for (i, j), m in self.entries.items()]

    def __repr__(self) -> str:
        pairs = ", ".join(f"({a},{b})" + (f"x{m}" if m != 1 else "") for a, b, m in self.pair_names())
        return f"BranchingMatrix({{{pairs}}})"


class _Checker:
    def __init__(self, Z: BranchingMatrix, tol):
        self.Z = Z
        self.tol = config.resolve(tol)
        require_valid(Z.cat1, self.tol, "cat1")
        require_valid(Z.cat2, self.tol, "cat2")
        self.r1: FusionRing = Z.cat1.ring(self.tol)
        self.r2: FusionRing = Z.cat2.ring(self.tol)
        self.n1 = Z.cat1.names
        self.n2 = Z.cat2.names
        self.tau: dict[int, int] | None = None
        self.closed = False

    def _d1(self, i):
        return fpdim_object(self.r1, i, self.tol)

    def _d2(self, j):
        return fpdim_object(self.r2, j, self.tol)

    def _skip(self, name, why) -> CheckEntry:
        return CheckEntry(name, _TITLES[name], SKIP, why)

    def unit_sector(self) -> CheckEntry:
        Z, u1, u2 = self.Z.entries, self.Z.cat1.unit, self.Z.cat2.unit
        bad = []
        if Z.get((u1, u2), 0) != 1:
            bad.append((self.n1[u1], self.n2[u2]))
        bad += [(self.n1[i], self.n2[j]) for (i, j) in Z if (i == u1) != (j == u2)]
        return entry("unit_sector", _TITLES["unit_sector"], not bad,
                     f"Z[unit,unit] = {Z.get((u1, u2), 0)}", bad)

    def multiplicity_free(self) -> CheckEntry:
        bad = [(self.n1[i], self.n2[j], m) for (i, j), m in self.Z.entries.items() if m != 1]
        return entry("multiplicity_free", _TITLES["multiplicity_free"], not bad, offenders=bad)

    def bijection(self) -> CheckEntry:
        rows: dict[int, list[int]] = {}
        cols: dict[int, list[int]] = {}
        for i, j in self.Z.support:
            rows.setdefault(i, []).append(j)
            cols.setdefault(j, []).append(i)
        bad = [self.n1[i] for i, js in rows.items() if len(js) > 1]
        bad += [self.n2[j] for j, is_ in cols.items() if len(is_) > 1]
        if not bad:
            self.tau = {i: js[0] for i, js in rows.items()}
        tau_txt = ", ".join(f"{self.n1[i]}->{self.n2[j]}" for i, j in (self.tau or {}).items())
        return entry("bijection", _TITLES["bijection"], not bad, f"tau = {{{tau_txt}}}" if not bad else
                     "labels paired more than once", bad)

    def dual_symmetry(self) -> CheckEntry:
        Z, d1, d2 = self.Z.entries, self.r1.dual, self.r2.dual
        bad = [(self.n1[i], self.n2[j]) for (i, j), m in Z.items() if Z.get((d1[i], d2[j]), 0) != m]
        return entry("dual_symmetry", _TITLES["dual_symmetry"], not bad, offenders=bad)

    def weight_integrality(self) -> CheckEntry:
        h1, h2 = self.Z.cat1.h, self.Z.cat2.h
        bad = []
        for i, j in self.Z.support:
            s = h1[i] + h2[j]
            if s.denominator != 1 or s < 0 or h1[i] < 0 or h2[j] < 0:
                bad.append((self.n1[i], self.n2[j], str(s)))
        return entry("weight_integrality", _TITLES["weight_integrality"], not bad, offenders=bad)

    def fusion_closure(self) -> CheckEntry:
        I, J = self.Z.support1, self.Z.support2
        extra1 = sorted(_closure_indices(self.r1, I) - set(I))
        extra2 = sorted(_closure_indices(self.r2, J) - set(J))
        self.closed = not extra1 and not extra2
        bad = [("cat1", self.n1[i]) for i in extra1] + [("cat2", self.n2[j]) for j in extra2]
        return entry("fusion_closure", _TITLES["fusion_closure"], self.closed,
                     "" if self.closed else "closure adds labels outside the support", bad)

    def fusion_match(self) -> CheckEntry:
        if self.tau is None:
            return self._skip("fusion_match", "requires a bijection, see (c)")
        tau, D = self.tau, self.r2.dual
        I = sorted(tau)
        bad = []
        for a in I:
            for b in I:
                for c in I:
                    left = self.r1.N.get((a, b, c), 0)
                    dualized = self.r2.N.get((D[tau[a]], D[tau[b]], D[tau[c]]), 0)
                    plain = self.r2.N.get((tau[a], tau[b], tau[c]), 0)
                    if not left == dualized == plain:
                        bad.append((self.n1[a], self.n1[b], self.n1[c], left, dualized))
        return entry("fusion_match", _TITLES["fusion_match"], not bad,
                     f"{len(I) ** 3} support triples compared", bad)

    def _balance(self):
        tau, Z = self.tau, self.Z.entries
        dim1 = sum(self._d1(i) ** 2 for i in tau)
        dim2 = sum(self._d2(j) ** 2 for j in tau.values())
        dim_a = sum(Z[(i, j)] * self._d1(i) * self._d2(j) for i, j in tau.items())
        return dim1, dim2, dim_a

    def fpdim_balance(self) -> CheckEntry:
        if self.tau is None:
            return self._skip("fpdim_balance", "requires a bijection, see (c)")
        eps = self.tol.fp
        bad = [(self.n1[i], self.n2[j], round(self._d1(i), 12), round(self._d2(j), 12))
               for i, j in self.tau.items() if abs(self._d1(i) - self._d2(j)) >= eps]
        dim1, dim2, dim_a = self._balance()
        ok = not bad and abs(dim1 - dim2) < eps and abs(dim_a - dim1) < eps
        return entry("fpdim_balance", _TITLES["fpdim_balance"], ok,
                     f"FPdim C1^0 = {dim1:.12g}, FPdim C2^0 = {dim2:.12g}, FPdim A = {dim_a:.12g}", bad)

    def global_dimension(self) -> CheckEntry:
        if self.tau is None:
            return self._skip("global_dimension", "requires a bijection, see (c)")
        if not self.closed:
            return self._skip("global_dimension", "requires closed supports, see (f)")
        if self.tau.get(self.Z.cat1.unit) != self.Z.cat2.unit:
            return self._skip("global_dimension", "requires the vacuum pair, see (a)")
        gd = global_dimension_data(self.Z, self.tau, self.tol)
        eps = self.tol.fp
        ok = (abs(gd["fpdim_A"] * gd["fpdim_C_A"] - gd["fpdim_C"]) < eps
              and abs(gd["fpdim_C_A"] - gd["fpdim_C1"]) < eps)
        return entry("global_dimension", _TITLES["global_dimension"], ok,
                     "FPdim A = {fpdim_A:.12g}, FPdim C_A = {fpdim_C_A:.12g}, FPdim C = {fpdim_C:.12g}, "
                     "{n_modules} simple free A-modules".format(**gd))

    def run(self, name: str) -> CheckEntry:
        return getattr(self, name)()


def global_dimension_data(Z: BranchingMatrix, tau: Mapping[int, int], tol=None) -> dict:
    """Ring-level data for the identity FPdim(A) FPdim(C_A) = FPdim(C).

    C is the fusion subcategory of the product spanned by support1 x support2,
    A the algebra object with multiplicities Z.  FPdim(C_A) is obtained from the
    hom-dimensions between free modules: free modules on simple objects with a
    one-dimensional endomorphism space are simple, and two of them are
    isomorphic exactly when the hom space between them is nonzero.
    """
    tol = config.resolve(tol)
    r1, r2 = Z.cat1.ring(tol), Z.cat2.ring(tol)
    I, J = sorted(tau), sorted(tau.values())
    C = deligne_product(r1.restrict(I), r2.restrict(J))
    pos1 = {i: p for p, i in enumerate(I)}
    pos2 = {j: p for p, j in enumerate(J)}
    nJ = len(J)
    algebra = {pos1[i] * nJ + pos2[j]: Z.entries[(i, j)] for i, j in tau.items()}
    dims = [fpdim_object(C, x, tol) for x in range(C.size)]
    fp_a = sum(m * dims[x] for x, m in algebra.items())
    reps: list[int] = []
    for u in range(C.size):
        if free_module_hom(C, algebra, u, u) != 1:
            continue
        if not any(free_module_hom(C, algebra, u, v) for v in reps):
            reps.append(u)
    fp_ca = sum(dims[u] ** 2 for u in reps)
    return {
        "fpdim_A": fp_a,
        "fpdim_C": fpdim_category(C, tol=tol),
        "fpdim_C_A": fp_ca,
        "fpdim_C1": fpdim_category(r1, I, tol),
        "fpdim_C2": fpdim_category(r2, J, tol),
        "n_modules": len(reps),
    }


def validate_branching(Z: BranchingMatrix, tol=None) -> CheckReport:
    """Run checks (a)-(i); on success store the bijection in ``Z.tau``."""
    chk = _Checker(Z, tol)
    rep = CheckReport(subject=f"branching {Z!r}")
    for name in CHECK_NAMES:
        rep.add(chk.run(name))
    Z.validated = rep.overall
    Z.tau = dict(chk.tau) if rep.overall else None
    for key in ("double_commutant", "simple_self_dual_U"):
        if key in Z.hypotheses:
            rep.meta[f"declared hypothesis {key} (not checkable)"] = Z.hypotheses[key]
    return rep


def run_check(Z: BranchingMatrix, check: str, tol=None) -> CheckEntry:
    """Run one check in isolation (letter ``'a'``..``'i'`` or its name)."""
    name = _BY_LETTER.get(check, check)
    if name not in CHECK_NAMES:
        raise KeyError(check)
    chk = _Checker(Z, tol)
    if name in ("fusion_match", "fpdim_balance", "global_dimension"):
        chk.bijection()
    if name == "global_dimension":
        chk.fusion_closure()
    return chk.run(name)


def mirror_branching(Z: BranchingMatrix) -> BranchingMatrix:
    """Swap the two sides and dualize both: the new entry at (j', i') is Z[i, j]."""
    d1, d2 = Z.cat1.dual, Z.cat2.dual
    entries = {(d2[j], d1[i]): m for (i, j), m in Z.entries.items()}
    return BranchingMatrix(Z.cat2, Z.cat1, entries, dict(Z.hypotheses))


def search_branchings(cat1: ModularData, cat2: ModularData, max_support: int | None = None,
                      budget: int = 10**6, tol=None) -> list[BranchingMatrix]:
    """All multiplicity-free branchings passing every check, in lexicographic DFS order.

    Candidate pairs are pruned by exact weight integrality and FPdim equality
    before the fusion-level checks.  ``max_support`` bounds the number of pairs,
    vacuum included.  ``budget`` caps the number of partial assignments.
    """
    tol = config.resolve(tol)
    require_valid(cat1, tol, "cat1")
    require_valid(cat2, tol, "cat2")
    r1, r2 = cat1.ring(tol), cat2.ring(tol)
    u1, u2 = cat1.unit, cat2.unit
    D1, D2 = r1.dual, r2.dual

    def compatible(i, j):
        s = cat1.h[i] + cat2.h[j]
        return (s.denominator == 1 and s >= 0 and cat1.h[i] >= 0 and cat2.h[j] >= 0
                and abs(fpdim_object(r1, i, tol) - fpdim_object(r2, j, tol)) < tol.fp)

    left = [i for i in range(cat1.size) if i != u1]
    options = {i: [j for j in range(cat2.size) if j != u2 and compatible(i, j)] for i in left}
    cap = max_support if max_support is not None else cat1.size
    nodes = 0
    found: list[BranchingMatrix] = []
    assign: dict[int, int | None] = {}

    def leaf():
        pairs = {(u1, u2): 1}
        pairs.update({(i, j): 1 for i, j in assign.items() if j is not None})
        Z = BranchingMatrix(cat1, cat2, pairs)
        if validate_branching(Z, tol).overall:
            found.append(Z)

    def dfs(pos: int, size: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"more than {budget} partial assignments")
        while pos < len(left) and left[pos] in assign:
            pos += 1
        if pos == len(left):
            leaf()
            return
        i = left[pos]
        di = D1[i]
        # leave i (and its dual) out of the support
        assign[i] = None
        assign[di] = None
        dfs(pos + 1, size)
        del assign[i]
        assign.pop(di, None)
        used = {j for j in assign.values() if j is not None}
        extra = 1 if di == i else 2
        if size + extra > cap:
            return
        for j in options[i]:
            dj = D2[j]
            if j in used or dj in used:
                continue
            if di == i and dj != j:
                continue
            if di != i and (dj == j or dj not in options[di]):
                continue
            assign[i] = j
            assign[di] = dj
            dfs(pos + 1, size + extra)
            del assign[i]
            assign.pop(di, None)

    dfs(0, 1)
    return found


def free_module_hom(cat, algebra: Mapping[LabelRef, int], u: LabelRef, v: LabelRef) -> int:
    """dim Hom_A(A x u, A x v) at ring level: sum_a n_a N_{a,v}^u."""
    ring = cat.ring() if isinstance(cat, ModularData) else cat
    iu, iv = ring.index(u), ring.index(v)
    n = {ring.index(a): int(m) for a, m in algebra.items()}
    if n.get(ring.unit, 0) < 1:
        raise InvalidInput("algebra must contain the unit")
    return sum(m * ring.N.get((a, iv, iu), 0) for a, m in n.items())
