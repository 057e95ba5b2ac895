"""Extension specifications V^e = V + sum m_i M^i and their mirror extensions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import config
from .branching import BranchingMatrix, mirror_branching, validate_branching
from .errors import InvalidInput, PreconditionError
from .fusion_ring import LabelRef, _closure_indices, fpdim_category, fpdim_object
from .modular_data import ModularData
from .report import WARN, CheckEntry, CheckReport, entry


@dataclass
class ExtensionSpec:
    category: ModularData
    m: dict[int, int]
    side: int = 1
    simple: bool = False

    def __post_init__(self):
        if self.side not in (1, 2):
            raise InvalidInput(f"side must be 1 or 2, got {self.side!r}")
        clean: dict[int, int] = {}
        for ref, mult in self.m.items():
            i = self.category.index(ref)
            if int(mult) != mult or mult < 0:
                raise InvalidInput(f"multiplicity of {ref!r} must be a nonnegative integer")
            if mult:
                clean[i] = clean.get(i, 0) + int(mult)
        self.m = dict(sorted(clean.items()))

    @classmethod
    def of(cls, category: ModularData, m: Mapping[LabelRef, int], side: int = 1, simple: bool = False):
        return cls(category, dict(m), side, simple)

    def named(self) -> dict[str, int]:
        return {self.category.names[i]: k for i, k in self.m.items()}


@dataclass
class MirrorResult:
    category: ModularData
    m_prime: dict[int, int]
    tau_used: dict[int, int]
    report: CheckReport
    simple: bool = False
    extension: ExtensionSpec | None = field(default=None, repr=False)

    def named(self) -> dict[str, int]:
        return {self.category.names[j]: k for j, k in self.m_prime.items()}


def _side(Z: BranchingMatrix, side: int):
    if side == 1:
        return Z.cat1, Z.support1
    return Z.cat2, Z.support2


def _require_validated(Z: BranchingMatrix, tol):
    if not Z.validated or Z.tau is None:
        rep = validate_branching(Z, tol)
        if not rep.overall:
            raise PreconditionError(f"branching fails checks {rep.failed()}")


def check_extension(Z: BranchingMatrix, side: int, m: ExtensionSpec, tol=None) -> CheckReport:
    tol = config.resolve(tol)
    _require_validated(Z, tol)
    cat, support = _side(Z, side)
    if m.category is not cat and not m.category.same_as(cat):
        raise InvalidInput(f"extension category does not match side {side} of the branching")
    ring = cat.ring(tol)
    names = cat.names
    mult = m.m
    rep = CheckReport(subject=f"extension on side {side}: {m.named()}")

    rep.add(entry("connected", "(a) unit occurs exactly once", mult.get(cat.unit, 0) == 1,
                  f"m_unit = {mult.get(cat.unit, 0)}"))

    outside = [names[i] for i in mult if i not in set(support)]
    rep.add(entry("support", "(b) constituents lie in the branching support", not outside,
                  offenders=outside))

    bad = [(names[i], str(cat.h[i])) for i in mult if cat.h[i].denominator != 1]
    rep.add(entry("twist_trivial", "(c) every constituent has integral weight", not bad,
                  offenders=bad))

    D = ring.dual
    bad = [names[i] for i in range(cat.size) if mult.get(i, 0) != mult.get(D[i], 0)]
    rep.add(entry("self_dual", "(d) multiplicities are invariant under duality", not bad,
                  offenders=bad))

    fp_a = sum(k * fpdim_object(ring, i, tol) for i, k in mult.items())
    fp_sub = fpdim_category(ring, support, tol)
    rep.add(entry("fpdim_bound", "(e) FPdim A does not exceed the support dimension",
                  fp_a <= fp_sub + tol.fp, f"FPdim A = {fp_a:.12g}, FPdim C^0 = {fp_sub:.12g}"))

    closure = _closure_indices(ring, mult)
    extra = sorted(closure - set(mult))
    e = entry("fusion_closure", "(f) constituents closed under fusion (advisory)", not extra,
              offenders=[names[i] for i in extra])
    if extra:
        e.status = WARN
        e.detail = "support of m is not fusion-closed"
    rep.add(e)
    return rep


def mirror_extend(Z: BranchingMatrix, m: ExtensionSpec, tol=None) -> MirrorResult:
    """m'_j = m_i with j = dual(tau(i)) on the other side, plus consistency assertions."""
    tol = config.resolve(tol)
    if m.side == 2:
        Z = mirror_branching(Z)
        m = ExtensionSpec(m.category, dict(m.m), 1, m.simple)
    _require_validated(Z, tol)
    pre = check_extension(Z, 1, m, tol)
    if not pre.overall:
        raise PreconditionError(f"extension fails checks {pre.failed()}")
    tau = dict(Z.tau)
    r1, r2 = Z.cat1.ring(tol), Z.cat2.ring(tol)
    D2 = r2.dual
    m_prime = dict(sorted((D2[tau[i]], k) for i, k in m.m.items()))
    rep = CheckReport(subject=f"mirror of {m.named()}")
    rep.entries.extend(pre.entries)

    bad = [(Z.cat2.names[j], str(Z.cat2.h[j])) for j in m_prime if Z.cat2.h[j].denominator != 1]
    rep.add(entry("p1_weights", "(p1) mirror constituents have integral weight", not bad, offenders=bad))

    fp = sum(k * fpdim_object(r1, i, tol) for i, k in m.m.items())
    fp_prime = sum(k * fpdim_object(r2, j, tol) for j, k in m_prime.items())
    rep.add(entry("p2_fpdim", "(p2) FPdim of the extension equals FPdim of its mirror",
                  abs(fp - fp_prime) < tol.fp, f"{fp:.12g} vs {fp_prime:.12g}"))

    ext2 = ExtensionSpec(Z.cat2, m_prime, 2, m.simple)
    back = check_extension(Z, 2, ext2, tol)
    rep.add(CheckEntry("p3_mirror_valid", "(p3) mirror extension passes the extension checks",
                       "pass" if back.overall else "fail",
                       "" if back.overall else f"failed: {back.failed()}"))
    rep.meta["simple (declared)"] = m.simple
    return MirrorResult(Z.cat2, m_prime, tau, rep, m.simple, ext2)


def mirror_involution(Z: BranchingMatrix, m: ExtensionSpec, tol=None) -> bool:
    """Mirroring twice (through the swapped, dualized branching) returns the original m."""
    tol = config.resolve(tol)
    first = mirror_extend(Z, m, tol)
    if not first.report.overall:
        raise PreconditionError(f"mirror assertions failed: {first.report.failed()}")
    Zm = mirror_branching(Z if m.side == 1 else mirror_branching(Z))
    second = mirror_extend(Zm, ExtensionSpec(first.category, first.m_prime, 1, m.simple), tol)
    return second.m_prime == m.m
