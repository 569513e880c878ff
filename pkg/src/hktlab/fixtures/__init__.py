"""Bundled example documents, addressable by name."""

from __future__ import annotations

from importlib import resources

from ..document import InputDocument, parse_text

__all__ = ["names", "text", "load"]

POSITIVE = (
    "flat-torus-n1",
    "flat-torus-n2",
    "solvmanifold",
    "nilmanifold-lw",
    "nilmanifold-lw-closed",
    "su3",
    "nil-abelian",
    "hopf",
    "hopf-product",
)
NEGATIVE = ("broken-jacobi", "nonintegrable", "degenerate-omega", "non-slnh")


def names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__package__).iterdir() if p.name.endswith(".json"))


def text(name: str) -> str:
    path = resources.files(__package__) / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"no bundled fixture named {name!r}; available: {', '.join(names())}")
    return path.read_text(encoding="utf-8")


def load(name: str) -> InputDocument:
    return parse_text(text(name))
