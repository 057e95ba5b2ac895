"""Level-rank experiment: sl2(k) x sl_n(2) pairs inside sl_{2n}(1).

For each (k, n) with k = n the search enumerates every branching, keeps the
one with the largest support, and mirrors every valid extension supported on
integral-weight labels of the first factor.
"""
from __future__ import annotations

import argparse
import time

from mirrorext.affine_data import sl2_modular, sln_modular
from mirrorext.branching import search_branchings
from mirrorext.mirror_engine import ExtensionSpec, check_extension, mirror_extend


def run(n: int, budget: int) -> None:
    a, b, big = sl2_modular(n), sln_modular(n, 2), sln_modular(2 * n, 1)
    print(f"sl2({n}) x sl{n}(2): c = {a.c} + {b.c} = {a.c + b.c}, c(sl{2 * n}(1)) = {big.c}")
    t0 = time.perf_counter()
    found = search_branchings(a, b, budget=budget)
    print(f"  {len(found)} branchings in {time.perf_counter() - t0:.3f} s")
    for Z in found:
        print("   ", ", ".join(f"({x},{y})" for x, y, _ in Z.pair_names()))
    Z = max(found, key=lambda Z: len(Z.entries))
    integral = [i for i in Z.support1 if a.h[i].denominator == 1 and i != a.unit]
    for i in integral:
        ext = ExtensionSpec(a, {a.unit: 1, i: 1, a.dual[i]: 1})
        if not check_extension(Z, 1, ext).overall:
            continue
        res = mirror_extend(Z, ext)
        weights = {res.category.names[j]: str(res.category.h[j]) for j in res.m_prime}
        print(f"  mirror of {ext.named()} -> {res.named()}  weights {weights}  "
              f"{'ok' if res.report.overall else 'FAILED ' + str(res.report.failed())}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ranks", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args(argv)
    for n in args.ranks:
        run(n, args.budget)


if __name__ == "__main__":
    main()
