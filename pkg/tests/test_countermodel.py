from __future__ import annotations

from deonstar.countermodel import bounded_countermodel
from deonstar.formula import (
    AWFUL,
    IDEAL,
    And,
    Atom,
    Box,
    Dia,
    Implies,
    Not,
    Ob,
    Or,
    Pm,
)
from deonstar.kripke import KripkeModel, check, validate_serial

a = Atom("a")
b = Atom("b")
p = Atom("p")
q = Atom("q")


def test_ideal_box_fails_on_one_world():
    m = bounded_countermodel(Box(IDEAL, p), max_worlds=1)
    assert m == KripkeModel(
        worlds=frozenset({"w0"}),
        rel={
            IDEAL: frozenset({("w0", "w0")}),
            AWFUL: frozenset({("w0", "w0")}),
        },
        valuation={"w0": frozenset()},
        root="w0",
    )


def test_tautology_has_no_countermodel():
    assert bounded_countermodel(Or(p, Not(p)), max_worlds=4) is None


def test_k_and_d_schemas_have_no_countermodel():
    k = Implies(Box(IDEAL, Implies(p, q)), Implies(Box(IDEAL, p), Box(IDEAL, q)))
    assert bounded_countermodel(k, max_worlds=4) is None
    for mod in (IDEAL, AWFUL):
        assert bounded_countermodel(Implies(Box(mod, p), Dia(mod, p)), max_worlds=4) is None


def test_hansson_transfer_needs_three_worlds():
    f = Implies(And(Not(a), Not(b)), Implies(Ob(a), Ob(Or(a, b))))
    m = bounded_countermodel(f, max_worlds=4)
    assert m is not None
    assert len(m.worlds) == 3
    assert validate_serial(m) == []
    assert check(m, m.root, f) is False


def test_permission_is_not_the_classical_dual():
    f = Implies(Not(Ob(Not(a))), Pm(a))
    m = bounded_countermodel(f, max_worlds=4)
    assert m is not None
    assert check(m, m.root, f) is False


def test_search_is_deterministic():
    f = Implies(And(Not(a), Not(b)), Implies(Ob(a), Ob(Or(a, b))))
    assert bounded_countermodel(f) == bounded_countermodel(f)
