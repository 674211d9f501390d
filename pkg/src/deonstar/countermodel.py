"""Bounded countermodel search, independent of the tableau prover.

Satisfiability of the negated input over serial models with a fixed number
of worlds is encoded into CNF (valuation bits, edge bits, and one truth
variable per subformula and world) and handed to a small DPLL solver with
two watched literals per clause.  World counts are tried in increasing
order, so the first hit is a smallest-width model under this encoding.
Every found model is validated against the Kripke checker before being
returned; a validation failure is an internal bug, never a result.
"""

from __future__ import annotations

from .errors import InternalCheckError
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
    Not,
    Or,
    Top,
    atoms,
    expand_defined,
)
from .kripke import KripkeModel, check, validate_serial

_UNSAT = object()


class _Solver:
    """DPLL with two watched literals, chronological backtracking."""

    def __init__(self):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        self.units: list[int] = []
        self.empty = False

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def add(self, lits) -> None:
        seen: dict[int, None] = {}
        for l in lits:
            if -l in seen:
                return  # tautology
            seen[l] = None
        cl = list(seen)
        if not cl:
            self.empty = True
            return
        if len(cl) == 1:
            self.units.append(cl[0])
            return
        idx = len(self.clauses)
        self.clauses.append(cl)
        self.watches.setdefault(cl[0], []).append(idx)
        self.watches.setdefault(cl[1], []).append(idx)

    def solve(self):
        """An assignment dict var -> bool, or None when unsatisfiable."""
        if self.empty:
            return None
        assign: list = [None] * (self.nvars + 1)
        trail: list[int] = []

        def set_lit(lit: int) -> bool:
            var, val = abs(lit), lit > 0
            cur = assign[var]
            if cur is not None:
                return cur == val
            assign[var] = val
            trail.append(var)
            return True

        def propagate(start: int) -> bool:
            i = start
            while i < len(trail):
                var = trail[i]
                i += 1
                false_lit = -var if assign[var] else var
                watching = self.watches.get(false_lit)
                if not watching:
                    continue
                keep = []
                for ci in watching:
                    cl = self.clauses[ci]
                    if cl[0] == false_lit:
                        cl[0], cl[1] = cl[1], cl[0]
                    other = cl[0]
                    ov = assign[abs(other)]
                    if ov is not None and ov == (other > 0):
                        keep.append(ci)
                        continue
                    moved = False
                    for k in range(2, len(cl)):
                        lk = cl[k]
                        vk = assign[abs(lk)]
                        if vk is None or vk == (lk > 0):
                            cl[1], cl[k] = cl[k], cl[1]
                            self.watches.setdefault(lk, []).append(ci)
                            moved = True
                            break
                    if moved:
                        continue
                    keep.append(ci)
                    if ov is None:
                        if not set_lit(other):
                            self.watches[false_lit] = keep + watching[
                                watching.index(ci) + 1 :
                            ]
                            return False
                    else:
                        self.watches[false_lit] = keep + watching[
                            watching.index(ci) + 1 :
                        ]
                        return False
                self.watches[false_lit] = keep
            return True

        for u in self.units:
            if not set_lit(u):
                return None
        if not propagate(0):
            return None

        decisions: list[tuple[int, bool, int, int]] = []
        next_var = 1
        while True:
            while next_var <= self.nvars and assign[next_var] is not None:
                next_var += 1
            if next_var > self.nvars:
                return {v: assign[v] for v in range(1, self.nvars + 1)}
            var = next_var
            mark = len(trail)
            set_lit(-var)
            decisions.append((var, False, mark, next_var))
            while not propagate(mark):
                while decisions and decisions[-1][1]:
                    var, _, mark, saved_next = decisions.pop()
                    for v in trail[mark:]:
                        assign[v] = None
                    del trail[mark:]
                    next_var = saved_next
                if not decisions:
                    return None
                var, _, mark, saved_next = decisions.pop()
                for v in trail[mark:]:
                    assign[v] = None
                del trail[mark:]
                set_lit(var)
                decisions.append((var, True, mark, saved_next))
                next_var = saved_next


class _Encoding:
    def __init__(self, f: Formula, n: int):
        self.n = n
        self.solver = _Solver()
        self.names = sorted(atoms(f))
        self.true_var = self.solver.new_var()
        self.solver.add([self.true_var])
        self.val = {
            (w, a): self.solver.new_var() for w in range(n) for a in self.names
        }
        self.edge = {
            (m, w, v): self.solver.new_var()
            for m in (IDEAL, AWFUL)
            for w in range(n)
            for v in range(n)
        }
        for m in (IDEAL, AWFUL):
            for w in range(n):
                self.solver.add([self.edge[(m, w, v)] for v in range(n)])
        self.tv: dict[tuple[Formula, int], int] = {}
        self.solver.add([-self.lit(f, 0)])

    def lit(self, g: Formula, w: int) -> int:
        if isinstance(g, Not):
            return -self.lit(g.operand, w)
        if isinstance(g, Atom):
            return self.val[(w, g.name)]
        if isinstance(g, Top):
            return self.true_var
        if isinstance(g, Bottom):
            return -self.true_var
        key = (g, w)
        got = self.tv.get(key)
        if got is not None:
            return got
        v = self.solver.new_var()
        self.tv[key] = v
        add = self.solver.add
        if isinstance(g, And):
            a, b = self.lit(g.left, w), self.lit(g.right, w)
            add([-v, a])
            add([-v, b])
            add([v, -a, -b])
        elif isinstance(g, Or):
            a, b = self.lit(g.left, w), self.lit(g.right, w)
            add([-v, a, b])
            add([v, -a])
            add([v, -b])
        elif isinstance(g, Implies):
            a, b = self.lit(g.left, w), self.lit(g.right, w)
            add([-v, -a, b])
            add([v, a])
            add([v, -b])
        elif isinstance(g, Iff):
            a, b = self.lit(g.left, w), self.lit(g.right, w)
            add([-v, -a, b])
            add([-v, a, -b])
            add([v, -a, -b])
            add([v, a, b])
        elif isinstance(g, Box):
            witnesses = []
            for u in range(self.n):
                e = self.edge[(g.modality, w, u)]
                gu = self.lit(g.operand, u)
                add([-v, -e, gu])
                s = self.solver.new_var()
                add([-s, e])
                add([-s, -gu])
                witnesses.append(s)
            add([v] + witnesses)
        elif isinstance(g, Dia):
            witnesses = []
            for u in range(self.n):
                e = self.edge[(g.modality, w, u)]
                gu = self.lit(g.operand, u)
                add([v, -e, -gu])
                t = self.solver.new_var()
                add([-t, e])
                add([-t, gu])
                witnesses.append(t)
            add([-v] + witnesses)
        else:
            raise TypeError(f"not a primitive formula: {g!r}")
        return v

    def decode(self, assign: dict[int, bool]) -> KripkeModel:
        worlds = [f"w{i}" for i in range(self.n)]
        rel = {
            m: frozenset(
                (worlds[w], worlds[v])
                for w in range(self.n)
                for v in range(self.n)
                if assign[self.edge[(m, w, v)]]
            )
            for m in (IDEAL, AWFUL)
        }
        valuation = {
            worlds[w]: frozenset(a for a in self.names if assign[self.val[(w, a)]])
            for w in range(self.n)
        }
        return KripkeModel(
            worlds=frozenset(worlds), rel=rel, valuation=valuation, root="w0"
        )


def bounded_countermodel(f: Formula, max_worlds: int = 4) -> KripkeModel | None:
    """A serial model of at most max_worlds worlds falsifying f at its root.

    Returns None when no such model exists within the bound.  The result is
    validated with the Kripke checker; defined operators are expanded first.
    """
    g = expand_defined(f)
    for n in range(1, max_worlds + 1):
        enc = _Encoding(g, n)
        assign = enc.solver.solve()
        if assign is None:
            continue
        model = enc.decode(assign)
        if validate_serial(model):
            raise InternalCheckError("bounded search produced a non-serial model")
        if check(model, model.root, f):
            raise InternalCheckError("bounded search produced a bad countermodel")
        return model
    return None
