from __future__ import annotations

import random

import pytest

from conftest import random_serial_model
from deonstar.formula import (
    AWFUL,
    IDEAL,
    And,
    Atom,
    Bottom,
    Box,
    Dia,
    Iff,
    Implies,
    Not,
    Ob,
    Or,
    Pm,
    Top,
)
from deonstar.kripke import (
    KripkeModel,
    check,
    model_from_json,
    model_to_json,
    validate_serial,
)

p = Atom("p")
q = Atom("q")


def one_world(val=("p",)):
    return KripkeModel(
        worlds=frozenset({"w"}),
        rel={
            IDEAL: frozenset({("w", "w")}),
            AWFUL: frozenset({("w", "w")}),
        },
        valuation={"w": frozenset(val)},
        root="w",
    )


class TestCheck:
    def test_atoms_and_connectives(self):
        m = one_world()
        assert check(m, "w", p) is True
        assert check(m, "w", q) is False
        assert check(m, "w", Not(q)) is True
        assert check(m, "w", And(p, Not(q))) is True
        assert check(m, "w", Or(q, p)) is True
        assert check(m, "w", Implies(p, q)) is False
        assert check(m, "w", Iff(q, Bottom())) is True
        assert check(m, "w", Top()) is True

    def test_modalities_on_self_loop(self):
        m = one_world()
        assert check(m, "w", Box(IDEAL, p)) is True
        assert check(m, "w", Dia(AWFUL, p)) is True
        assert check(m, "w", Box(AWFUL, q)) is False

    def test_obligation_fails_on_single_self_looped_world(self):
        # the awful conjunct needs p to fail in every awful successor, but the
        # only successor is the world itself where p holds
        m = one_world()
        assert check(m, "w", Ob(p)) is False
        assert check(m, "w", Pm(p)) is False

    def test_two_level_evaluation(self):
        m = KripkeModel(
            worlds=frozenset({"w", "u", "v"}),
            rel={
                IDEAL: frozenset({("w", "u"), ("u", "u"), ("v", "v")}),
                AWFUL: frozenset({("w", "v"), ("u", "v"), ("v", "v")}),
            },
            valuation={"w": frozenset(), "u": frozenset({"p"}), "v": frozenset()},
            root="w",
        )
        assert check(m, "w", Ob(p)) is True
        assert check(m, "w", Box(IDEAL, Box(AWFUL, Not(p)))) is True
        assert check(m, "u", Dia(IDEAL, p)) is True

    def test_unknown_world(self):
        with pytest.raises(ValueError):
            check(one_world(), "nope", p)


class TestValidation:
    def test_serial_ok(self):
        assert validate_serial(one_world()) == []

    def test_missing_successor_reported(self):
        m = KripkeModel(
            worlds=frozenset({"w", "u"}),
            rel={
                IDEAL: frozenset({("w", "u"), ("u", "u")}),
                AWFUL: frozenset({("w", "u")}),
            },
            valuation={},
            root="w",
        )
        assert validate_serial(m) == [("u", AWFUL)]

    def test_model_invariants(self):
        with pytest.raises(ValueError):
            KripkeModel(frozenset(), {}, {}, "w")
        with pytest.raises(ValueError):
            KripkeModel(frozenset({"w"}), {}, {}, "x")
        with pytest.raises(ValueError):
            KripkeModel(
                frozenset({"w"}),
                {IDEAL: frozenset({("w", "z")})},
                {},
                "w",
            )
        with pytest.raises(ValueError):
            KripkeModel(frozenset({"w"}), {}, {"z": frozenset()}, "w")


class TestJson:
    def test_round_trip(self):
        rng = random.Random(7)
        for _ in range(20):
            m = random_serial_model(rng)
            assert model_from_json(model_to_json(m)) == m

    def test_shape(self):
        d = model_to_json(one_world())
        assert d == {
            "worlds": ["w"],
            "root": "w",
            "relations": {"ideal": [["w", "w"]], "awful": [["w", "w"]]},
            "valuation": {"w": ["p"]},
        }
