from __future__ import annotations

import random

from hypothesis import strategies as st

from deonstar.formula import (
    AWFUL,
    IDEAL,
    And,
    Atom,
    Bottom,
    Box,
    CondOb,
    CondPm,
    Dia,
    Iff,
    Implies,
    Not,
    Ob,
    Or,
    OughtJP,
    Pm,
    Top,
)

ATOM_NAMES = ("a", "b", "c")

atoms_st = st.sampled_from(ATOM_NAMES).map(Atom)
leaves_st = atoms_st | st.just(Top()) | st.just(Bottom())


def _compound(children):
    binary = st.tuples(children, children)
    return (
        children.map(Not)
        | binary.map(lambda p: And(*p))
        | binary.map(lambda p: Or(*p))
        | binary.map(lambda p: Implies(*p))
        | binary.map(lambda p: Iff(*p))
        | st.tuples(st.sampled_from((IDEAL, AWFUL)), children).map(lambda p: Box(*p))
        | st.tuples(st.sampled_from((IDEAL, AWFUL)), children).map(lambda p: Dia(*p))
    )


primitive_formulas = st.recursive(leaves_st, _compound, max_leaves=12)


def _surface_compound(children):
    binary = st.tuples(children, children)
    return (
        _compound(children)
        | children.map(Ob)
        | children.map(Pm)
        | children.map(OughtJP)
        | binary.map(lambda p: CondOb(*p))
        | binary.map(lambda p: CondPm(*p))
    )


surface_formulas = st.recursive(leaves_st, _surface_compound, max_leaves=10)


def random_serial_model(rng: random.Random, max_worlds: int = 4, atom_names=ATOM_NAMES):
    """A random Kripke model, serial in both relations."""
    from deonstar.kripke import KripkeModel

    n = rng.randint(1, max_worlds)
    worlds = [f"w{i}" for i in range(n)]
    rel = {}
    for mod in (IDEAL, AWFUL):
        edges = set()
        for w in worlds:
            targets = [v for v in worlds if rng.random() < 0.5]
            if not targets:
                targets = [rng.choice(worlds)]
            edges.update((w, v) for v in targets)
        rel[mod] = frozenset(edges)
    valuation = {w: frozenset(a for a in atom_names if rng.random() < 0.5) for w in worlds}
    return KripkeModel(
        worlds=frozenset(worlds), rel=rel, valuation=valuation, root="w0"
    )


def random_primitive_formula(rng: random.Random, max_connectives: int, max_modal_depth: int,
                             atom_names=ATOM_NAMES):
    """A random primitive formula with bounded size and modal nesting."""

    def go(budget: int, depth: int):
        if budget <= 0 or rng.random() < 0.2:
            r = rng.random()
            if r < 0.85:
                return Atom(rng.choice(atom_names)), 0
            return (Top() if r < 0.93 else Bottom()), 0
        kinds = ["not", "and", "or", "implies", "iff"]
        if depth < max_modal_depth:
            kinds += ["box", "dia"]
        kind = rng.choice(kinds)
        if kind == "not":
            s, used = go(budget - 1, depth)
            return Not(s), used + 1
        if kind in ("box", "dia"):
            mod = rng.choice((IDEAL, AWFUL))
            s, used = go(budget - 1, depth + 1)
            cls = Box if kind == "box" else Dia
            return cls(mod, s), used + 1
        l, lu = go((budget - 1) // 2, depth)
        r, ru = go(budget - 1 - lu, depth)
        cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
        return cls(l, r), lu + ru + 1

    f, _ = go(max_connectives, 0)
    return f
