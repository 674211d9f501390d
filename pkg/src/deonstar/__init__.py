"""Reasoning engine for a bimodal deontic logic over ideal and awful alternatives."""

from .formula import (
    AWFUL,
    IDEAL,
    And,
    Atom,
    Aw,
    Bottom,
    Box,
    CondOb,
    CondPm,
    Dia,
    Formula,
    Id,
    Iff,
    Implies,
    Modality,
    Not,
    Ob,
    Or,
    OughtJP,
    Pm,
    Top,
    expand_defined,
    modal_depth,
    to_nnf,
)

__version__ = "0.1.0"
