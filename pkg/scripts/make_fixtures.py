"""Regenerate the JSON fixtures shipped in src/mirrorext/data.

Categories come from the closed-form / Kac-Peterson generators; the level-rank
branching is whatever search_branchings returns with the largest support.
"""
from __future__ import annotations

import argparse
from pathlib import Path

from mirrorext import affine_data
from mirrorext.branching import BranchingMatrix, search_branchings, validate_branching
from mirrorext.bundle import branching_to_doc, extension_to_doc, modular_to_doc, save_doc
from mirrorext.mirror_engine import ExtensionSpec
from mirrorext.modular_data import require_valid

HYP = {"double_commutant": True, "simple_self_dual_U": True}


def _cat(out: Path, name: str, md, provenance: str):
    require_valid(md, role=name)
    save_doc(modular_to_doc(md, {"provenance": provenance}), out / name)
    return md


def _branching(out: Path, name: str, Z: BranchingMatrix, f1: str, f2: str, provenance: str):
    rep = validate_branching(Z)
    assert rep.overall, rep.render()
    save_doc(branching_to_doc(Z, out / f1, out / f2, out / name, {"provenance": provenance}), out / name)


def _ext(out: Path, name: str, cat, cat_file: str, m: dict, provenance: str):
    ext = ExtensionSpec.of(cat, m)
    save_doc(extension_to_doc(ext, out / cat_file, out / name, {"provenance": provenance}), out / name)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/mirrorext/data")
    args = ap.parse_args(argv)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    sl2 = {}
    for k in range(1, 11):
        sl2[k] = _cat(out, f"sl2_level{k}.json", affine_data.sl2_modular(k),
                      f"sl2 level {k}: closed-form S = sqrt(2/(k+2)) sin(pi (a+1)(b+1)/(k+2)), "
                      "h = l(l+2)/(4(k+2))")
    ising = _cat(out, "ising.json", affine_data.ising_modular(),
                 "Ising model: textbook S-matrix, weights 0, 1/2, 1/16, c = 1/2")
    sl4_2 = None
    for n, k in ((4, 1), (4, 2), (8, 1)):
        md = _cat(out, f"sl{n}_level{k}.json", affine_data.sln_modular(n, k),
                  f"sl{n} level {k}: Kac-Peterson Weyl-group sum (determinant form), exact weights")
        if (n, k) == (4, 2):
            sl4_2 = md

    gko = BranchingMatrix.from_pairs(sl2[2], ising, [("l0", "1"), ("l2", "eps")], HYP)
    _branching(out, "gko_ising_branching.json", gko, "sl2_level2.json", "ising.json",
               "coset sl2(1) x sl2(1) / sl2(2) = Ising; sectors read off from the vacuum module decomposition")

    emb = BranchingMatrix.from_pairs(sl2[2], sl2[2], [("l0", "l0"), ("l2", "l2")], HYP)
    _branching(out, "sl4level1_branching.json", emb, "sl2_level2.json", "sl2_level2.json",
               "sl2(2) x sl2(2) inside sl4(1): exhaustive search; (l1,l1) excluded since h-sum is 3/8")

    found = search_branchings(sl2[4], sl4_2)
    best = max(found, key=lambda Z: len(Z.entries))
    best.hypotheses = dict(HYP)
    _branching(out, "levelrank_2_4.json", best, "sl2_level4.json", "sl4_level2.json",
               f"search_branchings(sl2 level 4, sl4 level 2): {len(found)} results, largest support kept; "
               "level-rank pair inside sl8(1)")

    _ext(out, "gko_trivial_ext.json", sl2[2], "sl2_level2.json", {"l0": 1}, "unit-only extension")
    _ext(out, "gko_ext_l2.json", sl2[2], "sl2_level2.json", {"l0": 1, "l2": 1},
         "l2 has h = 1/2, so this extension is rejected by the integrality check")
    _ext(out, "levelrank_ext_l4.json", sl2[4], "sl2_level4.json", {"l0": 1, "l4": 1},
         "simple-current extension of sl2(4) by l4 (h = 1)")
    print(f"wrote fixtures to {out}")


if __name__ == "__main__":
    main()
