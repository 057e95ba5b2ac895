"""Access to the JSON fixtures shipped inside the package."""
from __future__ import annotations

from pathlib import Path

from .bundle import Bundle, load_bundle
from .modular_data import ModularData, require_valid

DATA_DIR = Path(__file__).resolve().parent / "data"

CATEGORY_FILES = tuple(f"sl2_level{k}.json" for k in range(1, 11)) + (
    "ising.json", "sl4_level1.json", "sl4_level2.json", "sl8_level1.json")
BRANCHING_FILES = ("gko_ising_branching.json", "sl4level1_branching.json", "levelrank_2_4.json")


def path(name: str) -> Path:
    return DATA_DIR / name


def load(name: str) -> Bundle:
    b = load_bundle(path(name))
    if b.kind == "modular":
        require_valid(b.payload, role=name)
    return b


def category(name: str) -> ModularData:
    return load(name).payload


def categories() -> dict[str, ModularData]:
    return {n: category(n) for n in CATEGORY_FILES}


def branchings() -> dict[str, Bundle]:
    return {n: load(n) for n in BRANCHING_FILES}
