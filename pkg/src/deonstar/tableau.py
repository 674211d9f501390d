"""Prefixed tableau prover for the bimodal serial logic.

Validity of a formula is decided by saturating a tableau for its negation in
negation normal form.  Labeled formulas live at prefixes: a prefix names a
world by the path of modal steps that created it, so the root is the empty
path and each successor extends its parent by one (modality, index) step.

Rules:

  alpha   a conjunction at a prefix yields both conjuncts there
  beta    a disjunction branches; see the selection strategy below
  pi      a diamond spawns a fresh successor prefix holding its body
  nuK     a box propagates its body to every existing successor
  nuD     a box with no successor spawns one (seriality), once per
          prefix and modality
  close   a branch closes on Bottom or a complementary literal pair

Selection strategy, deterministic by construction: closure first, then
conjunctions, then disjunction bookkeeping (a disjunction with a disjunct
already on the branch is subsumed and never expands; disjuncts whose
complement is on the branch are dropped, and a clause left with one live
disjunct adds it without branching), then diamonds, then box propagation,
then seriality successors, and only when nothing else applies a genuine
two-way split on the leftmost still-branching disjunction.  Branching last
keeps the legal corpora tractable: their conditionals mostly resolve to
units once facts and modal context are in place, so closure usually
arrives before any split fires.

Non-theorems return a countermodel read off the first saturated open
branch, completed to a serial model with a sink world and verified against
the Kripke checker before being reported.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BudgetExceededError, InternalCheckError
from .formula import (
    AWFUL,
    IDEAL,
    And,
    Atom,
    Bottom,
    Box,
    Dia,
    Formula,
    Modality,
    Not,
    Or,
    Top,
    conj,
    disj,
    expand_defined,
    modal_depth,
    nnf_negate,
    to_nnf,
)
from .kripke import KripkeModel, check

DEFAULT_BUDGET = 10_000_000

Prefix = tuple[tuple[Modality, int], ...]

_MOD_LETTER = {IDEAL: "i", AWFUL: "a"}


def format_prefix(prefix: Prefix) -> str:
    return "w" + "".join(f".{_MOD_LETTER[m]}{n}" for m, n in prefix)


@dataclass(frozen=True)
class TraceStep:
    rule: str
    branch: int
    prefix: Prefix
    source: Optional[Formula]
    produced: tuple[tuple[Prefix, Formula], ...]
    children: Optional[tuple[int, int]] = None

    def to_json(self) -> dict:
        from .parser import render_canonical

        d = {
            "rule": self.rule,
            "branch": self.branch,
            "prefix": format_prefix(self.prefix),
            "source": None if self.source is None else render_canonical(self.source),
            "produced": [
                [format_prefix(p), render_canonical(f)] for p, f in self.produced
            ],
        }
        if self.children is not None:
            d["children"] = list(self.children)
        return d


@dataclass(frozen=True)
class ProofTrace:
    steps: tuple[TraceStep, ...]

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> dict:
        return {"step_count": len(self.steps), "steps": [s.to_json() for s in self.steps]}


@dataclass(frozen=True)
class Theorem:
    trace: ProofTrace

    @property
    def is_theorem(self) -> bool:
        return True


@dataclass(frozen=True)
class NonTheorem:
    model: KripkeModel

    @property
    def is_theorem(self) -> bool:
        return False


Verdict = Theorem | NonTheorem

_flatten_cache: dict[Formula, tuple[Formula, ...]] = {}


def _flatten_or(f: Formula) -> tuple[Formula, ...]:
    got = _flatten_cache.get(f)
    if got is not None:
        return got
    parts: list[Formula] = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Or):
            stack.append(g.right)
            stack.append(g.left)
        else:
            parts.append(g)
    r = tuple(parts)
    _flatten_cache[f] = r
    return r


class _Tableau:
    def __init__(self, goal_negation: Formula, budget: int, original: Formula):
        self.budget = budget
        self.original = original
        self.max_prefix_len = modal_depth(goal_negation) + 1
        self.entries: list[tuple[Prefix, Formula]] = []
        self.present: set[tuple[Prefix, Formula]] = set()
        self.by_prefix: dict[Prefix, set[Formula]] = {}
        self.literals: dict[Prefix, dict[str, tuple[bool, int]]] = {}
        self.boxes: dict[tuple[Prefix, Modality], list[int]] = {}
        self.succs: dict[tuple[Prefix, Modality], list[Prefix]] = {}
        self.succ_count: dict[tuple[Prefix, Modality], int] = {}
        self.alpha_q: deque[int] = deque()
        self.betas: list[int] = []
        self.beta_done: set[int] = set()
        self.pi_q: deque[int] = deque()
        self.nu_q: deque[tuple[int, Prefix]] = deque()
        self.nud_q: deque[tuple[Prefix, Modality]] = deque()
        self.nud_done: set[tuple[Prefix, Modality]] = set()
        self.node_count = 0
        self.trace: list[TraceStep] = []
        self.trail: list = []
        self.closed: Optional[tuple[int, ...]] = None
        self.next_branch = 1
        self.current_branch = 0
        self.model: Optional[KripkeModel] = None
        self.add((), goal_negation)

    # -- state mutation, every effect recorded on the trail --

    def add(self, prefix: Prefix, f: Formula) -> bool:
        """Label prefix with f.  Returns False when already present."""
        key = (prefix, f)
        if key in self.present:
            return False
        self.node_count += 1
        if self.node_count > self.budget:
            raise BudgetExceededError(
                f"node budget of {self.budget} labeled formulas exceeded"
            )
        idx = len(self.entries)
        self.entries.append(key)
        self.present.add(key)
        self.by_prefix.setdefault(prefix, set()).add(f)
        self.trail.append(("entry", key))
        if isinstance(f, Bottom):
            if self.closed is None:
                self.closed = (idx,)
                self.trail.append(("closed",))
        elif isinstance(f, (Atom, Not)):
            name = f.name if isinstance(f, Atom) else f.operand.name
            pol = isinstance(f, Atom)
            lits = self.literals.setdefault(prefix, {})
            other = lits.get(name)
            if other is None:
                lits[name] = (pol, idx)
                self.trail.append(("literal", prefix, name))
            elif other[0] != pol and self.closed is None:
                self.closed = (other[1], idx)
                self.trail.append(("closed",))
        elif isinstance(f, Top):
            pass
        elif isinstance(f, And):
            self.alpha_q.append(idx)
            self.trail.append(("alpha_push",))
        elif isinstance(f, Or):
            self.betas.append(idx)
            self.trail.append(("beta_push",))
        elif isinstance(f, Dia):
            self.pi_q.append(idx)
            self.trail.append(("pi_push",))
        elif isinstance(f, Box):
            bkey = (prefix, f.modality)
            self.boxes.setdefault(bkey, []).append(idx)
            self.trail.append(("box_reg", bkey))
            for sp in self.succs.get(bkey, ()):
                self.nu_q.append((idx, sp))
                self.trail.append(("nu_push",))
            if not self.succs.get(bkey):
                self.nud_q.append(bkey)
                self.trail.append(("nud_push",))
        else:
            raise InternalCheckError(f"non-normal formula reached the tableau: {f!r}")
        return True

    def new_successor(self, prefix: Prefix, mod: Modality) -> Prefix:
        bkey = (prefix, mod)
        n = self.succ_count.get(bkey, 0) + 1
        self.succ_count[bkey] = n
        sp = prefix + ((mod, n),)
        if len(sp) > self.max_prefix_len:
            raise InternalCheckError("prefix exceeded the analytic depth bound")
        self.succs.setdefault(bkey, []).append(sp)
        self.trail.append(("succ", bkey))
        for bi in self.boxes.get(bkey, ()):
            self.nu_q.append((bi, sp))
            self.trail.append(("nu_push",))
        return sp

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            rec = self.trail.pop()
            op = rec[0]
            if op == "entry":
                key = rec[1]
                self.entries.pop()
                self.present.discard(key)
                self.by_prefix[key[0]].discard(key[1])
            elif op == "literal":
                del self.literals[rec[1]][rec[2]]
            elif op == "closed":
                self.closed = None
            elif op == "alpha_push":
                self.alpha_q.pop()
            elif op == "beta_push":
                self.betas.pop()
            elif op == "pi_push":
                self.pi_q.pop()
            elif op == "nu_push":
                self.nu_q.pop()
            elif op == "nud_push":
                self.nud_q.pop()
            elif op == "alpha_pop":
                self.alpha_q.appendleft(rec[1])
            elif op == "pi_pop":
                self.pi_q.appendleft(rec[1])
            elif op == "nu_pop":
                self.nu_q.appendleft(rec[1])
            elif op == "nud_pop":
                self.nud_q.appendleft(rec[1])
            elif op == "beta_done":
                self.beta_done.discard(rec[1])
            elif op == "box_reg":
                self.boxes[rec[1]].pop()
            elif op == "succ":
                bkey = rec[1]
                self.succs[bkey].pop()
                self.succ_count[bkey] -= 1
            elif op == "nud_done":
                self.nud_done.discard(rec[1])
            else:  # pragma: no cover
                raise InternalCheckError(f"unknown trail record {rec!r}")

    # -- clause bookkeeping --

    def clause_state(self, idx: int):
        """(kind, payload) for a disjunction entry under the current branch.

        kind is one of "subsumed", "resolve" (payload: the single formula to
        add), or "split" (payload: the live disjuncts).
        """
        prefix, f = self.entries[idx]
        here = self.by_prefix.get(prefix, ())
        survivors = []
        dropped_literal = None
        dropped_any = None
        for c in _flatten_or(f):
            if isinstance(c, Top) or c in here:
                return ("subsumed", None)
            if isinstance(c, Bottom) or nnf_negate(c) in here:
                if dropped_any is None:
                    dropped_any = c
                if dropped_literal is None and isinstance(c, (Atom, Not, Bottom)):
                    dropped_literal = c
                continue
            survivors.append(c)
        if not survivors:
            # every disjunct is contradicted; adding one makes the clash
            # concrete so closure stays a literal-level fact
            pick = dropped_literal if dropped_literal is not None else dropped_any
            return ("resolve", pick)
        if len(survivors) == 1:
            return ("resolve", survivors[0])
        return ("split", survivors)

    # -- main loop --

    def run(self) -> Verdict:
        if self.saturate():
            return Theorem(ProofTrace(tuple(self.trace)))
        if self.model is None:  # pragma: no cover
            raise InternalCheckError("open tableau without a countermodel")
        return NonTheorem(self.model)

    def emit(self, rule, prefix, source, produced, children=None):
        self.trace.append(
            TraceStep(
                rule=rule,
                branch=self.current_branch,
                prefix=prefix,
                source=source,
                produced=tuple(produced),
                children=children,
            )
        )

    def saturate(self) -> bool:
        """Develop the current branch; True when it closes."""
        while True:
            if self.closed is not None:
                self.emit_close()
                return True
            if self.alpha_q:
                idx = self.alpha_q.popleft()
                self.trail.append(("alpha_pop", idx))
                prefix, f = self.entries[idx]
                fresh = [
                    (prefix, g)
                    for g in (f.left, f.right)
                    if self.add(prefix, g)
                ]
                if fresh:
                    self.emit("alpha", prefix, f, fresh)
                continue
            resolved = self.resolve_betas()
            if resolved:
                continue
            if self.pi_q:
                idx = self.pi_q.popleft()
                self.trail.append(("pi_pop", idx))
                prefix, f = self.entries[idx]
                sp = self.new_successor(prefix, f.modality)
                self.add(sp, f.operand)
                self.emit("pi", prefix, f, [(sp, f.operand)])
                continue
            if self.nu_q:
                bi, sp = self.nu_q.popleft()
                self.trail.append(("nu_pop", (bi, sp)))
                prefix, f = self.entries[bi]
                if self.add(sp, f.operand):
                    self.emit("nuK", prefix, f, [(sp, f.operand)])
                continue
            if self.nud_q:
                bkey = self.nud_q.popleft()
                self.trail.append(("nud_pop", bkey))
                if bkey in self.nud_done or self.succs.get(bkey):
                    continue
                prefix, mod = bkey
                self.nud_done.add(bkey)
                self.trail.append(("nud_done", bkey))
                bi = self.boxes[bkey][0]
                _, f = self.entries[bi]
                sp = self.new_successor(prefix, mod)
                self.add(sp, f.operand)
                self.emit("nuD", prefix, f, [(sp, f.operand)])
                continue
            split = self.first_split()
            if split is None:
                self.capture_model()
                return False
            idx, survivors = split
            if not self.split_beta(idx, survivors):
                return False
            return True

    def resolve_betas(self) -> bool:
        for idx in self.betas:
            if idx in self.beta_done:
                continue
            kind, payload = self.clause_state(idx)
            if kind == "split":
                continue
            self.beta_done.add(idx)
            self.trail.append(("beta_done", idx))
            if kind == "subsumed":
                continue
            prefix, f = self.entries[idx]
            if self.add(prefix, payload):
                self.emit("beta", prefix, f, [(prefix, payload)])
            return True
        return False

    def first_split(self):
        for idx in self.betas:
            if idx in self.beta_done:
                continue
            kind, payload = self.clause_state(idx)
            if kind == "split":
                return idx, payload
        return None

    def split_beta(self, idx: int, survivors: list[Formula]) -> bool:
        prefix, f = self.entries[idx]
        self.beta_done.add(idx)
        self.trail.append(("beta_done", idx))
        left = survivors[0]
        right = disj(survivors[1:])
        b_left, b_right = self.next_branch, self.next_branch + 1
        self.next_branch += 2
        self.emit(
            "beta",
            prefix,
            f,
            [(prefix, left), (prefix, right)],
            children=(b_left, b_right),
        )
        parent = self.current_branch
        mark = len(self.trail)
        self.current_branch = b_left
        self.add(prefix, left)
        left_closed = self.saturate()
        self.undo(mark)
        if not left_closed:
            self.current_branch = parent
            return False
        self.current_branch = b_right
        self.add(prefix, right)
        right_closed = self.saturate()
        self.undo(mark)
        self.current_branch = parent
        return right_closed

    def emit_close(self):
        ids = self.closed
        prefix, f = self.entries[ids[0]]
        produced = []
        if len(ids) == 2:
            produced = [self.entries[ids[1]]]
        self.emit("close", prefix, f, produced)

    # -- countermodel extraction --

    def capture_model(self) -> None:
        prefixes: list[Prefix] = []
        seen = set()
        for prefix, _ in self.entries:
            if prefix not in seen:
                seen.add(prefix)
                prefixes.append(prefix)
        for targets in self.succs.values():
            for sp in targets:
                if sp not in seen:  # pragma: no cover
                    seen.add(sp)
                    prefixes.append(sp)
        names = {p: format_prefix(p) for p in prefixes}
        rel = {IDEAL: set(), AWFUL: set()}
        for (prefix, mod), targets in self.succs.items():
            for sp in targets:
                rel[mod].add((names[prefix], names[sp]))
        valuation = {}
        for prefix in prefixes:
            pos = frozenset(
                name
                for name, (pol, _) in self.literals.get(prefix, {}).items()
                if pol
            )
            valuation[names[prefix]] = pos
        worlds = set(names.values())
        deficient = [
            (names[p], mod)
            for p in prefixes
            for mod in (IDEAL, AWFUL)
            if not self.succs.get((p, mod))
        ]
        if deficient:
            worlds.add("sink")
            valuation["sink"] = frozenset()
            for w, mod in deficient:
                rel[mod].add((w, "sink"))
            rel[IDEAL].add(("sink", "sink"))
            rel[AWFUL].add(("sink", "sink"))
        model = KripkeModel(
            worlds=frozenset(worlds),
            rel={m: frozenset(es) for m, es in rel.items()},
            valuation=valuation,
            root=format_prefix(()),
        )
        if check(model, model.root, self.original):
            raise InternalCheckError("extracted countermodel failed verification")
        self.model = model


def prove(f: Formula, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Decide validity of f.  Theorem carries a trace, NonTheorem a model."""
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    negated = nnf_negate(to_nnf(expand_defined(f)))
    return _Tableau(negated, budget, f).run()


def entails(assumptions: Iterable[Formula], goal: Formula,
            budget: int = DEFAULT_BUDGET) -> Verdict:
    """Decide whether the assumptions entail the goal."""
    assumptions = list(assumptions)
    if not assumptions:
        return prove(goal, budget)
    from .formula import Implies

    return prove(Implies(conj(assumptions), goal), budget)


def consistent(formulas: Iterable[Formula], budget: int = DEFAULT_BUDGET) -> bool:
    """True when the set has a model, decided by refuting its negation."""
    return not prove(Not(conj(formulas)), budget).is_theorem


def independent(formulas: Iterable[Formula], budget: int = DEFAULT_BUDGET) -> list[bool]:
    """For each member, whether the others fail to entail it."""
    formulas = list(formulas)
    if len(formulas) < 2:
        raise ValueError("independence needs at least two formulas")
    out = []
    for i, f in enumerate(formulas):
        rest = formulas[:i] + formulas[i + 1 :]
        out.append(not entails(rest, f, budget).is_theorem)
    return out
