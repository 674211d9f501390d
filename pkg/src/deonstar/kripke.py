"""Finite Kripke models and the satisfaction relation.

Models carry two accessibility relations, one per modality.  The checker is
the semantic judge of the package: the tableau prover verifies every
countermodel against it before reporting a non-theorem, and the bounded
model search validates its findings the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .formula import (
    AWFUL,
    IDEAL,
    And,
    Atom,
    Bottom,
    Box,
    Dia,
    Formula,
    Iff,
    Implies,
    Modality,
    Not,
    Or,
    Top,
    expand_defined,
)


@dataclass(frozen=True)
class KripkeModel:
    """A pointed model: worlds, per-modality edges, valuation, root world."""

    worlds: frozenset[str]
    rel: Mapping[Modality, frozenset[tuple[str, str]]]
    valuation: Mapping[str, frozenset[str]]
    root: str

    def __post_init__(self):
        if not self.worlds:
            raise ValueError("a model needs at least one world")
        if self.root not in self.worlds:
            raise ValueError(f"root {self.root!r} is not a world")
        for mod in (IDEAL, AWFUL):
            for u, v in self.rel.get(mod, frozenset()):
                if u not in self.worlds or v not in self.worlds:
                    raise ValueError(f"edge ({u!r}, {v!r}) leaves the world set")
        for w in self.valuation:
            if w not in self.worlds:
                raise ValueError(f"valuation mentions unknown world {w!r}")

    @cached_property
    def successor_map(self) -> dict[Modality, dict[str, tuple[str, ...]]]:
        out: dict[Modality, dict[str, tuple[str, ...]]] = {}
        for mod in (IDEAL, AWFUL):
            per: dict[str, list[str]] = {w: [] for w in self.worlds}
            for u, v in sorted(self.rel.get(mod, frozenset())):
                per[u].append(v)
            out[mod] = {w: tuple(vs) for w, vs in per.items()}
        return out

    def true_atoms(self, world: str) -> frozenset[str]:
        return self.valuation.get(world, frozenset())


def validate_serial(model: KripkeModel) -> list[tuple[str, Modality]]:
    """Worlds lacking a successor, per modality.  Empty means serial."""
    succ = model.successor_map
    return [
        (w, mod)
        for mod in (IDEAL, AWFUL)
        for w in sorted(model.worlds)
        if not succ[mod][w]
    ]


def check(model: KripkeModel, world: str, f: Formula) -> bool:
    """Satisfaction at a world, after expanding defined operators."""
    if world not in model.worlds:
        raise ValueError(f"unknown world {world!r}")
    succ = model.successor_map
    g = expand_defined(f)

    def ev(w: str, h: Formula) -> bool:
        if isinstance(h, Atom):
            return h.name in model.true_atoms(w)
        if isinstance(h, Top):
            return True
        if isinstance(h, Bottom):
            return False
        if isinstance(h, Not):
            return not ev(w, h.operand)
        if isinstance(h, And):
            return ev(w, h.left) and ev(w, h.right)
        if isinstance(h, Or):
            return ev(w, h.left) or ev(w, h.right)
        if isinstance(h, Implies):
            return (not ev(w, h.left)) or ev(w, h.right)
        if isinstance(h, Iff):
            return ev(w, h.left) == ev(w, h.right)
        if isinstance(h, Box):
            return all(ev(v, h.operand) for v in succ[h.modality][w])
        if isinstance(h, Dia):
            return any(ev(v, h.operand) for v in succ[h.modality][w])
        raise TypeError(f"not a formula: {h!r}")

    return ev(world, g)


def model_to_json(model: KripkeModel) -> dict:
    return {
        "worlds": sorted(model.worlds),
        "root": model.root,
        "relations": {
            mod.value: [list(e) for e in sorted(model.rel.get(mod, frozenset()))]
            for mod in (IDEAL, AWFUL)
        },
        "valuation": {w: sorted(model.true_atoms(w)) for w in sorted(model.worlds)},
    }


def model_from_json(data: dict) -> KripkeModel:
    return KripkeModel(
        worlds=frozenset(data["worlds"]),
        rel={
            mod: frozenset((u, v) for u, v in data["relations"].get(mod.value, []))
            for mod in (IDEAL, AWFUL)
        },
        valuation={w: frozenset(atoms) for w, atoms in data["valuation"].items()},
        root=data["root"],
    )
