"""Command-line interface.

Exit codes: 0 every check passed, 1 a mathematical check failed,
2 input or usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import affine_data, config
from .branching import search_branchings, validate_branching
from .bundle import (Bundle, branching_to_doc, dump_doc, extension_to_doc, load_bundle, modular_to_doc,
                     ring_to_doc, save_doc)
from .errors import IntegralityError, MirrorExtError, PreconditionError
from .fusion_ring import validate_ring
from .mirror_engine import check_extension, mirror_extend
from .modular_data import validate_modular, verlinde_fusion
from .report import CheckReport

OK, CHECK_FAILED, INPUT_ERROR = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help="tolerance for real-valued checks (default 1e-9)")
    p.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS)
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    # a fresh parent per parser: argparse shares action objects between a parent and its children
    parser = _Parser(prog="mirrorext", description=__doc__.splitlines()[0], parents=[_common()])
    parser.set_defaults(tol=config.DEFAULT.fp, format="text", quiet=False)
    common = _common()
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check-ring", parents=[common], help="validate the fusion-ring axioms")
    p.add_argument("file")
    p = sub.add_parser("check-modular", parents=[common], help="validate modular data")
    p.add_argument("file")
    p = sub.add_parser("verlinde", parents=[common], help="fusion ring of modular data")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p = sub.add_parser("gen-affine", parents=[common], help="Kac-Peterson data of L_{sl_n}(k,0)")
    p.add_argument("--algebra", choices=("sl2", "sln"), required=True)
    p.add_argument("--rank", type=int, default=2, help="n in sl_n (ignored for sl2)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("-o", "--output")
    p = sub.add_parser("check-branching", parents=[common], help="validate a branching matrix")
    p.add_argument("file")
    p = sub.add_parser("search-branchings", parents=[common], help="enumerate valid branchings")
    p.add_argument("cat1")
    p.add_argument("cat2")
    p.add_argument("--max-support", type=int)
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("-o", "--output", help="write the branching with the largest support")
    p = sub.add_parser("check-extension", parents=[common], help="validate an extension")
    p.add_argument("branching")
    p.add_argument("extension")
    p = sub.add_parser("mirror", parents=[common], help="compute the mirror extension")
    p.add_argument("branching")
    p.add_argument("extension")
    p.add_argument("-o", "--output")
    return parser


def _load(path, kind) -> Bundle:
    b = load_bundle(path)
    if b.kind != kind:
        raise MirrorExtError(f"{path}: expected a {kind} bundle, found {b.kind}")
    return b


class _Out:
    def __init__(self, args):
        self.fmt = args.format
        self.quiet = args.quiet
        self.text: list[str] = []
        self.machine: dict = {"command": args.command}

    def report(self, rep: CheckReport, key="report"):
        if self.fmt == "machine":
            self.machine.setdefault(key, rep.to_dict())
        elif self.quiet:
            self.text.append(rep.render().splitlines()[0])
        else:
            self.text.append(rep.render())

    def info(self, line: str, **data):
        self.machine.update(data)
        if not self.quiet:
            self.text.append(line)

    def render(self, code: int) -> str:
        if self.fmt == "machine":
            self.machine["exit_code"] = code
            return json.dumps(self.machine, sort_keys=True)
        return "\n".join(self.text)


def _write(doc: dict, output, out: _Out):
    if output:
        save_doc(doc, output)
        out.info(f"wrote {output}", output=str(output))
    else:
        out.text.append(dump_doc(doc).rstrip())
        out.machine["document"] = doc


def _cmd(args, tol, out: _Out) -> int:
    cmd = args.command
    if cmd == "check-ring":
        b = load_bundle(args.file)
        ring = b.payload if b.kind == "ring" else b.payload.ring(tol) if b.kind == "modular" else None
        if ring is None:
            raise MirrorExtError(f"{args.file}: expected a ring or modular bundle")
        rep = validate_ring(ring, tol)
        out.report(rep)
        return OK if rep.overall else CHECK_FAILED

    if cmd == "check-modular":
        rep = validate_modular(_load(args.file, "modular").payload, tol)
        out.report(rep)
        return OK if rep.overall else CHECK_FAILED

    if cmd == "verlinde":
        b = _load(args.file, "modular")
        try:
            ring = verlinde_fusion(b.payload, tol)
        except IntegralityError as exc:
            out.info(f"Verlinde integrality failed: {exc}", worst=list(exc.worst or ()), residual=exc.residual)
            return CHECK_FAILED
        meta = {"provenance": f"Verlinde formula applied to {Path(args.file).name}"}
        _write(ring_to_doc(ring, meta), args.output, out)
        return OK

    if cmd == "gen-affine":
        if args.algebra == "sl2":
            md = affine_data.sl2_modular(args.level)
            what = f"sl2 level {args.level}"
        else:
            md = affine_data.sln_modular(args.rank, args.level)
            what = f"sl{args.rank} level {args.level}"
        meta = {"provenance": f"Kac-Peterson modular data of {what} (gen-affine)"}
        _write(modular_to_doc(md, meta), args.output, out)
        return OK

    if cmd == "check-branching":
        Z = _load(args.file, "branching").payload
        rep = validate_branching(Z, tol)
        out.report(rep)
        return OK if rep.overall else CHECK_FAILED

    if cmd == "search-branchings":
        c1 = _load(args.cat1, "modular")
        c2 = _load(args.cat2, "modular")
        found = search_branchings(c1.payload, c2.payload, args.max_support, args.budget, tol)
        out.info(f"{len(found)} branching(s) pass every check:",
                 branchings=[[[a, b, m] for a, b, m in Z.pair_names()] for Z in found])
        for Z in found:
            out.info("  " + ", ".join(f"({a},{b})" for a, b, _ in Z.pair_names()))
        if args.output:
            best = max(found, key=lambda Z: len(Z.entries))
            meta = {"provenance": f"search-branchings {Path(args.cat1).name} {Path(args.cat2).name}, "
                                  "largest support among the results"}
            save_doc(branching_to_doc(best, c1.path, c2.path, args.output, meta), args.output)
            out.info(f"wrote {args.output}", output=str(args.output))
        return OK

    bz = _load(args.branching, "branching")
    be = _load(args.extension, "extension")
    Z, ext = bz.payload, be.payload
    zrep = validate_branching(Z, tol)
    if not zrep.overall:
        out.report(zrep, "branching_report")
        return CHECK_FAILED
    side_cat = Z.cat1 if ext.side == 1 else Z.cat2
    if not ext.category.same_as(side_cat):
        raise MirrorExtError(f"{args.extension}: category does not match side {ext.side} of the branching")
    ext.category = side_cat

    if cmd == "check-extension":
        rep = check_extension(Z, ext.side, ext, tol)
        out.report(rep)
        return OK if rep.overall else CHECK_FAILED

    # mirror
    pre = check_extension(Z, ext.side, ext, tol)
    if not pre.overall:
        out.report(pre)
        return CHECK_FAILED
    try:
        res = mirror_extend(Z, ext, tol)
    except PreconditionError as exc:
        out.info(f"mirror failed: {exc}")
        return CHECK_FAILED
    out.report(res.report)
    out.info("m' = " + json.dumps(res.named()), m_prime=res.named())
    if args.output:
        other = bz.refs["cat2"] if ext.side == 1 else bz.refs["cat1"]
        meta = {"provenance": f"mirror of {Path(args.extension).name} through {Path(args.branching).name}"}
        save_doc(extension_to_doc(res.extension, other, args.output, meta), args.output)
        out.info(f"wrote {args.output}", output=str(args.output))
    return OK if res.report.overall else CHECK_FAILED


def run_command(argv: list[str]) -> tuple[int, str]:
    """Run one CLI invocation; returns (exit code, rendered output)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        return INPUT_ERROR, str(exc)
    except SystemExit as exc:  # --help
        return int(exc.code or 0), parser.format_help()
    out = _Out(args)
    tol = config.DEFAULT.with_tol(args.tol)
    try:
        code = _cmd(args, tol, out)
    except MirrorExtError as exc:
        kind = type(exc).__name__
        if out.fmt == "machine":
            out.machine["error"] = {"type": kind, "message": str(exc)}
        else:
            out.text.append(f"error ({kind}): {exc}")
        code = INPUT_ERROR
    return code, out.render(code)


def main(argv=None) -> int:
    code, text = run_command(sys.argv[1:] if argv is None else list(argv))
    if text:
        stream = sys.stderr if code == INPUT_ERROR else sys.stdout
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
