"""JSON bundle files: fusion rings, modular data, branchings, extensions.

Rationals are written as ``"p/q"`` strings and parsed exactly.  Duals are never
read from files; they are recomputed from the ring or from S^2.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .branching import BranchingMatrix
from .errors import DualityError, InvalidInput, ParseError, ResolutionError, SchemaError, ShapeError, UnknownLabel
from .fusion_ring import FusionRing
from .mirror_engine import ExtensionSpec
from .modular_data import ModularData

KINDS = ("ring", "modular", "branching", "extension")

_RATIONAL = {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}
_NAMES = {"type": "array", "items": {"type": "string"}, "minItems": 1}
_META = {"type": "object"}

SCHEMAS: dict[str, dict] = {
    "ring": {
        "type": "object",
        "required": ["labels", "N"],
        "properties": {
            "kind": {"const": "ring"},
            "labels": _NAMES,
            "unit": {"type": ["integer", "string"]},
            "N": {"type": "array", "items": {
                "type": "array", "items": {"type": ["integer", "string"]}, "minItems": 4, "maxItems": 4}},
            "meta": _META,
        },
    },
    "modular": {
        "type": "object",
        "required": ["labels", "S", "h", "c"],
        "properties": {
            "kind": {"const": "modular"},
            "labels": _NAMES,
            "S": {"type": "array", "items": {"type": "array", "items": {
                "oneOf": [{"type": "number"},
                          {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}}},
            "h": {"type": "array", "items": _RATIONAL},
            "c": _RATIONAL,
            "unit": {"type": ["integer", "string"]},
            "meta": _META,
        },
    },
    "branching": {
        "type": "object",
        "required": ["cat1", "cat2", "pairs"],
        "properties": {
            "kind": {"const": "branching"},
            "cat1": {"type": "string"},
            "cat2": {"type": "string"},
            "pairs": {"type": "array", "items": {
                "type": "array", "minItems": 2, "maxItems": 3,
                "items": {"type": ["integer", "string"]}}},
            "hypotheses": {"type": "object", "additionalProperties": {"type": "boolean"}},
            "meta": _META,
        },
    },
    "extension": {
        "type": "object",
        "required": ["category", "m"],
        "properties": {
            "kind": {"const": "extension"},
            "category": {"type": "string"},
            "side": {"enum": [1, 2]},
            "m": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
            "simple": {"type": "boolean"},
            "meta": _META,
        },
    },
}


@dataclass
class Bundle:
    kind: str
    payload: Any
    meta: dict = field(default_factory=dict)
    path: Path | None = None
    refs: dict[str, Path] = field(default_factory=dict)


def _kind_of(doc: dict) -> str:
    if "kind" in doc:
        if doc["kind"] not in KINDS:
            raise SchemaError(f"unknown bundle kind {doc['kind']!r}")
        return doc["kind"]
    for kind, key in (("modular", "S"), ("ring", "N"), ("branching", "pairs"), ("extension", "m")):
        if key in doc:
            return kind
    raise SchemaError("cannot tell the bundle kind; add a 'kind' field")


def _read_json(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ResolutionError(f"{path}: no such file") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be a JSON object")
    return doc


def _validate_schema(doc: dict, kind: str, path: Path) -> None:
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{path}: field {where}: {exc.message}") from None


def _rational(text: str, where: str) -> Fraction:
    try:
        return Fraction(text.replace(" ", ""))
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: invalid rational {text!r}") from None


def _unit_index(doc: dict, names: list[str], path: Path) -> int:
    unit = doc.get("unit", 0)
    if isinstance(unit, str):
        if unit not in names:
            raise SchemaError(f"{path}: field unit: unknown label {unit!r}")
        return names.index(unit)
    if not 0 <= unit < len(names):
        raise SchemaError(f"{path}: field unit: index {unit} out of range")
    return unit


def _parse_ring(doc: dict, path: Path) -> FusionRing:
    names = doc["labels"]
    pos = {n: i for i, n in enumerate(names)}

    def ref(x, k):
        if isinstance(x, str):
            if x not in pos:
                raise SchemaError(f"{path}: field N/{k}: unknown label {x!r}")
            return pos[x]
        return x

    entries = {}
    for k, (a, b, c, m) in enumerate(doc["N"]):
        if not isinstance(m, int) or m < 0:
            raise SchemaError(f"{path}: field N/{k}: multiplicity must be a nonnegative integer")
        key = (ref(a, k), ref(b, k), ref(c, k))
        entries[key] = entries.get(key, 0) + m
    try:
        return FusionRing(tuple(names), entries, _unit_index(doc, names, path))
    except (UnknownLabel, DualityError, ValueError) as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _parse_modular(doc: dict, path: Path) -> ModularData:
    names = doc["labels"]
    rows = doc["S"]
    try:
        S = np.array([[complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in row] for row in rows],
                     dtype=complex)
    except ValueError:
        raise SchemaError(f"{path}: field S: rows have different lengths") from None
    h = [_rational(x, f"{path}: field h/{k}") for k, x in enumerate(doc["h"])]
    c = _rational(doc["c"], f"{path}: field c")
    unit = _unit_index(doc, names, path)
    if len(h) != len(names):
        raise SchemaError(f"{path}: field h: {len(h)} weights for {len(names)} labels")
    if h[unit] != 0:
        raise SchemaError(f"{path}: field h/{unit}: the unit must have weight 0, got {h[unit]}")
    try:
        return ModularData(tuple(names), S, h, c, unit)
    except (ShapeError, UnknownLabel) as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _resolve(base: Path, rel: str, field_name: str) -> Path:
    p = (base.parent / rel).resolve()
    if not p.is_file():
        raise ResolutionError(f"{base}: field {field_name}: referenced file {rel!r} not found")
    return p


def _load_category(path: Path) -> ModularData:
    b = load_bundle(path)
    if b.kind != "modular":
        raise ResolutionError(f"{path}: expected modular data, found a {b.kind} bundle")
    return b.payload


def load_bundle(path) -> Bundle:
    """Read and schema-check one bundle; branching/extension references are loaded too."""
    path = Path(path)
    doc = _read_json(path)
    kind = _kind_of(doc)
    _validate_schema(doc, kind, path)
    meta = dict(doc.get("meta", {}))
    if kind == "ring":
        return Bundle(kind, _parse_ring(doc, path), meta, path)
    if kind == "modular":
        return Bundle(kind, _parse_modular(doc, path), meta, path)
    if kind == "branching":
        p1 = _resolve(path, doc["cat1"], "cat1")
        p2 = _resolve(path, doc["cat2"], "cat2")
        cat1 = _load_category(p1)
        cat2 = cat1 if p2 == p1 else _load_category(p2)
        pairs = [tuple(p) for p in doc["pairs"]]
        for k, p in enumerate(pairs):
            if len(p) == 3 and (not isinstance(p[2], int) or p[2] < 0):
                raise SchemaError(f"{path}: field pairs/{k}: multiplicity must be a nonnegative integer")
        try:
            Z = BranchingMatrix.from_pairs(cat1, cat2, pairs, doc.get("hypotheses", {}))
        except InvalidInput as exc:
            raise ResolutionError(f"{path}: {exc}") from None
        return Bundle(kind, Z, meta, path, {"cat1": p1, "cat2": p2})
    p = _resolve(path, doc["category"], "category")
    cat = _load_category(p)
    m = {}
    for key, mult in doc["m"].items():
        try:
            i = cat.index(key)
        except UnknownLabel:
            if key.isdigit() and int(key) < cat.size:
                i = int(key)
            else:
                raise ResolutionError(f"{path}: field m: unknown label {key!r}") from None
        m[i] = m.get(i, 0) + mult
    ext = ExtensionSpec(cat, m, doc.get("side", 1), doc.get("simple", False))
    return Bundle(kind, ext, meta, path, {"category": p})


def _rel(target: Path, out: Path) -> str:
    import os

    return os.path.relpath(Path(target).resolve(), Path(out).resolve().parent)


def ring_to_doc(ring: FusionRing, meta=None) -> dict:
    return {"kind": "ring", "labels": list(ring.names), "unit": ring.unit,
            "N": [[a, b, c, m] for (a, b, c), m in ring.N.items()], "meta": dict(meta or {})}


def modular_to_doc(md: ModularData, meta=None) -> dict:
    return {"kind": "modular", "labels": list(md.names),
            "S": [[[float(z.real), float(z.imag)] for z in row] for row in md.S],
            "h": [str(x) for x in md.h], "c": str(md.c), "unit": md.unit, "meta": dict(meta or {})}


def branching_to_doc(Z: BranchingMatrix, cat1_path, cat2_path, out, meta=None) -> dict:
    return {"kind": "branching", "cat1": _rel(cat1_path, out), "cat2": _rel(cat2_path, out),
            "pairs": [[i, j, m] for (i, j), m in Z.entries.items()],
            "hypotheses": dict(Z.hypotheses), "meta": dict(meta or {})}


def extension_to_doc(ext: ExtensionSpec, category_path, out, meta=None) -> dict:
    return {"kind": "extension", "category": _rel(category_path, out), "side": ext.side,
            "m": ext.named(), "simple": ext.simple, "meta": dict(meta or {})}


def bundle_to_doc(b: Bundle, out) -> dict:
    if b.kind == "ring":
        return ring_to_doc(b.payload, b.meta)
    if b.kind == "modular":
        return modular_to_doc(b.payload, b.meta)
    if b.kind == "branching":
        return branching_to_doc(b.payload, b.refs["cat1"], b.refs["cat2"], out, b.meta)
    return extension_to_doc(b.payload, b.refs["category"], out, b.meta)


def dump_doc(doc: dict) -> str:
    # repr-based float output round-trips doubles exactly (17 significant digits at most)
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def save_bundle(b: Bundle, path) -> Path:
    path = Path(path)
    path.write_text(dump_doc(bundle_to_doc(b, path)), encoding="utf-8")
    return path


def save_doc(doc: dict, path) -> Path:
    path = Path(path)
    path.write_text(dump_doc(doc), encoding="utf-8")
    return path
