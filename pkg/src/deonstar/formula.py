"""Formula core for a bimodal deontic logic.

The logic interprets normative talk over two serial accessibility relations:
one ranging over ideal alternatives of a world, one over awful alternatives.
Primitive formulas are built from atoms, the boolean connectives, and a box
and a diamond for each modality.  On top of the primitive layer live defined
deontic operators: obligation Ob and permission Pm (each reads across both
modalities at once), a legacy single-modality obligation OughtJP kept for
comparison, and the conditional forms CondOb/CondPm that pair a detachment
implication with an ideal-level transfer clause.

``expand_defined`` eliminates the defined operators.  The prover and the
model checker expand their input eagerly, so the calculus itself only ever
sees primitive formulas.
"""

from __future__ import annotations

import re
from enum import Enum


class Modality(Enum):
    IDEAL = "ideal"
    AWFUL = "awful"


IDEAL = Modality.IDEAL
AWFUL = Modality.AWFUL

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")


class Formula:
    """Base class.  Nodes are immutable, compare structurally, cache their hash."""

    __slots__ = ("_h",)

    def __hash__(self):
        return self._h

    def __ne__(self, other):
        return not self.__eq__(other)


class Atom(Formula):
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        if not _ATOM_RE.fullmatch(name):
            raise ValueError(f"bad atom name {name!r}: expected [a-z][a-z0-9_]*")
        self.name = name
        self._h = hash(("atom", name))

    def __eq__(self, other):
        return self is other or (type(other) is Atom and other.name == self.name)

    __hash__ = Formula.__hash__

    def __repr__(self):
        return f"Atom({self.name!r})"


class Top(Formula):
    __slots__ = ()

    def __init__(self):
        self._h = hash("top")

    def __eq__(self, other):
        return type(other) is Top

    __hash__ = Formula.__hash__

    def __repr__(self):
        return "Top()"


class Bottom(Formula):
    __slots__ = ()

    def __init__(self):
        self._h = hash("bottom")

    def __eq__(self, other):
        return type(other) is Bottom

    __hash__ = Formula.__hash__

    def __repr__(self):
        return "Bottom()"


class Not(Formula):
    __slots__ = ("operand",)
    __match_args__ = ("operand",)

    def __init__(self, operand: Formula):
        self.operand = operand
        self._h = hash(("not", operand._h))

    def __eq__(self, other):
        return self is other or (
            type(other) is Not and other._h == self._h and other.operand == self.operand
        )

    __hash__ = Formula.__hash__

    def __repr__(self):
        return f"Not({self.operand!r})"


class _Binary(Formula):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")
    _tag = ""

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self._h = hash((self._tag, left._h, right._h))

    def __eq__(self, other):
        return self is other or (
            type(other) is type(self)
            and other._h == self._h
            and other.left == self.left
            and other.right == self.right
        )

    __hash__ = Formula.__hash__

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(_Binary):
    __slots__ = ()
    _tag = "and"


class Or(_Binary):
    __slots__ = ()
    _tag = "or"


class Implies(_Binary):
    __slots__ = ()
    _tag = "implies"


class Iff(_Binary):
    __slots__ = ()
    _tag = "iff"


class _Modal(Formula):
    __slots__ = ("modality", "operand")
    __match_args__ = ("modality", "operand")
    _tag = ""

    def __init__(self, modality: Modality, operand: Formula):
        self.modality = modality
        self.operand = operand
        self._h = hash((self._tag, modality, operand._h))

    def __eq__(self, other):
        return self is other or (
            type(other) is type(self)
            and other._h == self._h
            and other.modality is self.modality
            and other.operand == self.operand
        )

    __hash__ = Formula.__hash__

    def __repr__(self):
        return f"{type(self).__name__}({self.modality.name}, {self.operand!r})"


class Box(_Modal):
    """Truth in every successor of the given modality."""

    __slots__ = ()
    _tag = "box"


class Dia(_Modal):
    """Truth in some successor of the given modality."""

    __slots__ = ()
    _tag = "dia"


class _Unary(Formula):
    __slots__ = ("operand",)
    __match_args__ = ("operand",)
    _tag = ""

    def __init__(self, operand: Formula):
        self.operand = operand
        self._h = hash((self._tag, operand._h))

    def __eq__(self, other):
        return self is other or (
            type(other) is type(self) and other._h == self._h and other.operand == self.operand
        )

    __hash__ = Formula.__hash__

    def __repr__(self):
        return f"{type(self).__name__}({self.operand!r})"


class Ob(_Unary):
    """Obligation: settled in every ideal alternative, failing in every awful one."""

    __slots__ = ()
    _tag = "ob"


class Pm(_Unary):
    """Permission: open in some ideal alternative, avoidable in some awful one."""

    __slots__ = ()
    _tag = "pm"


class OughtJP(_Unary):
    """Legacy obligation variant: ideal-necessary but not awful-necessary."""

    __slots__ = ()
    _tag = "oughtjp"


class CondOb(_Binary):
    """Conditional obligation: detachment implication plus ideal-level transfer."""

    __slots__ = ()
    _tag = "condob"


class CondPm(_Binary):
    """Conditional permission, same shape as CondOb with Pm in place of Ob."""

    __slots__ = ()
    _tag = "condpm"


def Id(f: Formula) -> Formula:
    """Ideal necessity.  A direct alias for the ideal box."""
    return Box(IDEAL, f)


def Aw(f: Formula) -> Formula:
    """Awful necessity.  A direct alias for the awful box."""
    return Box(AWFUL, f)


_DEFINED = (Ob, Pm, OughtJP, CondOb, CondPm)


def is_primitive(f: Formula) -> bool:
    """True when no defined deontic operator occurs in f."""
    if isinstance(f, _DEFINED):
        return False
    if isinstance(f, (Atom, Top, Bottom)):
        return True
    if isinstance(f, Not):
        return is_primitive(f.operand)
    if isinstance(f, _Binary):
        return is_primitive(f.left) and is_primitive(f.right)
    if isinstance(f, _Modal):
        return is_primitive(f.operand)
    raise TypeError(f"not a formula: {f!r}")


def _ob(x: Formula) -> Formula:
    # x is already expanded
    return And(Box(IDEAL, x), Box(AWFUL, Not(x)))


def _pm(x: Formula) -> Formula:
    return And(Dia(IDEAL, x), Dia(AWFUL, Not(x)))


_expand_cache: dict[Formula, Formula] = {}


def expand_defined(f: Formula) -> Formula:
    """Rewrite every defined deontic operator into box/diamond form.

    Ob(A)       -> Box_ideal(A) and Box_awful(not A)
    Pm(A)       -> Dia_ideal(A) and Dia_awful(not A)
    OughtJP(A)  -> Box_ideal(A) and not Box_awful(A)
    CondOb(A,B) -> (A -> Ob(B)) and Box_ideal(Ob(A) -> Ob(B)), inner Ob expanded
    CondPm(A,B) -> same with Pm

    The result is primitive; expanding an already primitive formula returns it
    unchanged, so the operation is idempotent.
    """
    got = _expand_cache.get(f)
    if got is not None:
        return got
    if isinstance(f, (Atom, Top, Bottom)):
        r = f
    elif isinstance(f, Not):
        a = expand_defined(f.operand)
        r = f if a is f.operand else Not(a)
    elif isinstance(f, _Modal):
        a = expand_defined(f.operand)
        r = f if a is f.operand else type(f)(f.modality, a)
    elif isinstance(f, Ob):
        r = _ob(expand_defined(f.operand))
    elif isinstance(f, Pm):
        r = _pm(expand_defined(f.operand))
    elif isinstance(f, OughtJP):
        a = expand_defined(f.operand)
        r = And(Box(IDEAL, a), Not(Box(AWFUL, a)))
    elif isinstance(f, CondOb):
        a = expand_defined(f.left)
        b = expand_defined(f.right)
        r = And(Implies(a, _ob(b)), Box(IDEAL, Implies(_ob(a), _ob(b))))
    elif isinstance(f, CondPm):
        a = expand_defined(f.left)
        b = expand_defined(f.right)
        r = And(Implies(a, _pm(b)), Box(IDEAL, Implies(_pm(a), _pm(b))))
    elif isinstance(f, _Binary):
        a = expand_defined(f.left)
        b = expand_defined(f.right)
        r = f if (a is f.left and b is f.right) else type(f)(a, b)
    else:
        raise TypeError(f"not a formula: {f!r}")
    _expand_cache[f] = r
    return r


def _require_primitive(f: Formula, op: str) -> None:
    if isinstance(f, _DEFINED):
        raise ValueError(f"{op} takes a primitive formula; expand_defined first: {f!r}")


_nnf_pos: dict[Formula, Formula] = {}
_nnf_neg: dict[Formula, Formula] = {}


def to_nnf(f: Formula) -> Formula:
    """Negation normal form of a primitive formula.

    Implication and equivalence are eliminated, negation is pushed down to
    atoms, boxes and diamonds flip under negation.  Truth at any pointed model
    is preserved.
    """
    got = _nnf_pos.get(f)
    if got is not None:
        return got
    _require_primitive(f, "to_nnf")
    if isinstance(f, (Atom, Top, Bottom)):
        r = f
    elif isinstance(f, Not):
        r = _negate(f.operand)
    elif isinstance(f, And):
        r = And(to_nnf(f.left), to_nnf(f.right))
    elif isinstance(f, Or):
        r = Or(to_nnf(f.left), to_nnf(f.right))
    elif isinstance(f, Implies):
        r = Or(_negate(f.left), to_nnf(f.right))
    elif isinstance(f, Iff):
        r = Or(And(to_nnf(f.left), to_nnf(f.right)), And(_negate(f.left), _negate(f.right)))
    elif isinstance(f, _Modal):
        r = type(f)(f.modality, to_nnf(f.operand))
    else:
        raise TypeError(f"not a formula: {f!r}")
    _nnf_pos[f] = r
    return r


def _negate(f: Formula) -> Formula:
    got = _nnf_neg.get(f)
    if got is not None:
        return got
    _require_primitive(f, "to_nnf")
    if isinstance(f, Atom):
        r = Not(f)
    elif isinstance(f, Top):
        r = Bottom()
    elif isinstance(f, Bottom):
        r = Top()
    elif isinstance(f, Not):
        r = to_nnf(f.operand)
    elif isinstance(f, And):
        r = Or(_negate(f.left), _negate(f.right))
    elif isinstance(f, Or):
        r = And(_negate(f.left), _negate(f.right))
    elif isinstance(f, Implies):
        r = And(to_nnf(f.left), _negate(f.right))
    elif isinstance(f, Iff):
        r = Or(And(to_nnf(f.left), _negate(f.right)), And(_negate(f.left), to_nnf(f.right)))
    elif isinstance(f, Box):
        r = Dia(f.modality, _negate(f.operand))
    elif isinstance(f, Dia):
        r = Box(f.modality, _negate(f.operand))
    else:
        raise TypeError(f"not a formula: {f!r}")
    _nnf_neg[f] = r
    return r


def nnf_negate(f: Formula) -> Formula:
    """Complement of a formula that is already in negation normal form."""
    return _negate(f)


def modal_depth(f: Formula) -> int:
    """Maximum box/diamond nesting of a primitive formula."""
    _require_primitive(f, "modal_depth")
    if isinstance(f, (Atom, Top, Bottom)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.operand)
    if isinstance(f, _Binary):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, _Modal):
        return 1 + modal_depth(f.operand)
    raise TypeError(f"not a formula: {f!r}")


def atoms(f: Formula) -> frozenset[str]:
    """Names of the atoms occurring in f (defined operators included)."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, (Top, Bottom)):
            pass
        elif isinstance(g, (Not, _Unary)):
            stack.append(g.operand)
        elif isinstance(g, _Modal):
            stack.append(g.operand)
        elif isinstance(g, _Binary):
            stack.append(g.left)
            stack.append(g.right)
        else:
            raise TypeError(f"not a formula: {g!r}")
    return frozenset(out)


def conj(parts) -> Formula:
    """Right-associated conjunction; empty input gives Top."""
    parts = list(parts)
    if not parts:
        return Top()
    r = parts[-1]
    for p in reversed(parts[:-1]):
        r = And(p, r)
    return r


def disj(parts) -> Formula:
    """Right-associated disjunction; empty input gives Bottom."""
    parts = list(parts)
    if not parts:
        return Bottom()
    r = parts[-1]
    for p in reversed(parts[:-1]):
        r = Or(p, r)
    return r
