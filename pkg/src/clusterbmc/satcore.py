"""Incremental CDCL SAT solver with assumptions and conflict accounting.

First-UIP clause learning, two-watched literals, VSIDS-style activities,
Luby restarts, phase saving.  No preprocessing and no clause deletion:
learned clauses persist for the lifetime of the session, which is exactly
the effect shared-session multi-property BMC relies on.

Literals are nonzero signed ints in the DIMACS convention.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

SAT = "satisfiable"
UNSAT = "unsatisfiable"
UNKNOWN = "budget-exhausted"

_UNASSIGNED = -1

# Hard cap on the clause database (original + learned).  Exceeding it makes
# solve() report budget exhaustion instead of thrashing.
CLAUSE_CAP = 400_000


@dataclass
class SolveResult:
    status: str
    model: list | None  # model[v] is the bool value of variable v (1-based)
    conflicts_this_call: int
    propagations_this_call: int


def _luby(i: int) -> int:
    """i-th element (1-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    while True:
        k = i.bit_length()
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i = i - (1 << (k - 1)) + 1


class SolverSession:
    """One incremental solving session; single-threaded, not shareable."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = random.Random(seed)
        self.num_vars = 0
        self.clauses: list[list[int]] = []   # original clauses, as added
        self._db: list[list[int]] = []       # original + learned
        self._watches: dict[int, list[int]] = {}
        self._assign: list[int] = [_UNASSIGNED]  # index 0 unused
        self._level: list[int] = [0]
        self._reason: list[int] = [-1]
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._activity: list[float] = [0.0]
        self._phase: list[bool] = [False]
        self._act_inc = 1.0
        self._act_decay = 0.95
        self._conflict_total = 0
        self._restart_base = 64
        self._has_empty_clause = False
        self._propagated = 0
        self._qhead = 0

    # -- public interface ---------------------------------------------------

    def add_var(self) -> int:
        self.num_vars += 1
        v = self.num_vars
        self._assign.append(_UNASSIGNED)
        self._level.append(0)
        self._reason.append(-1)
        # Tiny seeded jitter decorrelates tie-breaks between seeds while
        # keeping each seed fully deterministic.
        self._activity.append(self._rng.random() * 1e-6)
        self._phase.append(False)
        self._watches[v] = []
        self._watches[-v] = []
        return v

    def ensure_var(self, v: int):
        while self.num_vars < v:
            self.add_var()

    def add_clause(self, lits) -> None:
        lits = list(lits)
        for lit in lits:
            self.ensure_var(abs(lit))
        self.clauses.append(list(lits))
        self._backtrack(0)
        # dedup literals, drop tautologies, strip level-0-false literals
        seen = set()
        out = []
        for lit in lits:
            if -lit in seen:
                return
            if lit in seen:
                continue
            seen.add(lit)
            val = self._value(lit)
            if val == 1:
                return  # satisfied at level 0 for good
            if val == 0:
                continue
            out.append(lit)
        if not out:
            self._has_empty_clause = True
            return
        self._attach(out)

    def solve(
        self,
        assumptions=(),
        conflict_budget: int | None = None,
        deadline: float | None = None,
    ) -> SolveResult:
        """Solve the current clause set under the given assumptions.

        `conflict_budget` bounds the number of conflicts this call may spend;
        `deadline` is an absolute time.perf_counter() value.  Exhaustion is
        reported as status, never raised.
        """
        assumptions = list(assumptions)
        for lit in assumptions:
            self.ensure_var(abs(lit))
        conflicts = 0
        prop_start = self._propagated
        if self._has_empty_clause:
            return SolveResult(UNSAT, None, 0, 0)

        self._backtrack(0)
        confl = self._propagate()
        if confl is not None:
            return SolveResult(UNSAT, None, 0, self._propagated - prop_start)

        next_restart = self._restart_base * _luby(1)
        restart_count = 1
        while True:
            confl = self._propagate()
            propagations = self._propagated - prop_start
            if confl is not None:
                conflicts += 1
                self._conflict_total += 1
                if self._decision_level() <= len(assumptions):
                    # conflict implied by the assumptions alone
                    self._backtrack(0)
                    return SolveResult(UNSAT, None, conflicts, propagations)
                learned, bt_level = self._analyze(confl)
                self._backtrack(bt_level)
                if len(self._db) >= CLAUSE_CAP:
                    self._backtrack(0)
                    return SolveResult(UNKNOWN, None, conflicts, propagations)
                self._learn(learned)
                self._decay_activities()
                if conflict_budget is not None and conflicts >= conflict_budget:
                    self._backtrack(0)
                    return SolveResult(UNKNOWN, None, conflicts, propagations)
                if conflicts >= next_restart:
                    restart_count += 1
                    next_restart = conflicts + self._restart_base * _luby(restart_count)
                    self._backtrack(0)
                continue

            if deadline is not None and time.perf_counter() > deadline:
                self._backtrack(0)
                return SolveResult(UNKNOWN, None, conflicts, propagations)

            # place pending assumptions first, one decision level each
            if self._decision_level() < len(assumptions):
                lit = assumptions[self._decision_level()]
                val = self._value(lit)
                if val == 1:
                    self._trail_lim.append(len(self._trail))  # dummy level
                    continue
                if val == 0:
                    self._backtrack(0)
                    return SolveResult(UNSAT, None, conflicts, propagations)
                self._trail_lim.append(len(self._trail))
                self._enqueue(lit, -1)
                continue

            branch = self._pick_branch()
            if branch is None:
                model = [None] + [self._assign[v] == 1 for v in range(1, self.num_vars + 1)]
                self._backtrack(0)
                return SolveResult(SAT, model, conflicts, propagations)
            self._trail_lim.append(len(self._trail))
            self._enqueue(branch, -1)

    @property
    def conflict_total(self) -> int:
        return self._conflict_total

    def to_dimacs(self) -> str:
        """DIMACS CNF export of the original clause set (diagnostic only)."""
        out = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        out.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(out) + "\n"

    # -- internals ----------------------------------------------------------

    def _decision_level(self) -> int:
        return len(self._trail_lim)

    def _value(self, lit: int) -> int:
        v = self._assign[abs(lit)]
        if v == _UNASSIGNED:
            return _UNASSIGNED
        return v if lit > 0 else 1 - v

    def _attach(self, lits: list[int]):
        idx = len(self._db)
        self._db.append(lits)
        if len(lits) == 1:
            if self._value(lits[0]) == 0:
                self._has_empty_clause = True
            elif self._value(lits[0]) == _UNASSIGNED:
                self._enqueue(lits[0], idx)
        else:
            self._watches[lits[0]].append(idx)
            self._watches[lits[1]].append(idx)

    def _learn(self, lits: list[int]):
        idx = len(self._db)
        self._db.append(lits)
        if len(lits) == 1:
            self._enqueue(lits[0], idx)
        else:
            self._watches[lits[0]].append(idx)
            self._watches[lits[1]].append(idx)
            self._enqueue(lits[0], idx)

    def _enqueue(self, lit: int, reason: int):
        v = abs(lit)
        self._assign[v] = 1 if lit > 0 else 0
        self._level[v] = self._decision_level()
        self._reason[v] = reason
        self._phase[v] = lit > 0
        self._trail.append(lit)

    def _propagate(self):
        """Unit propagation; returns a conflicting clause index or None."""
        head = self._qhead
        db = self._db
        watches = self._watches
        while head < len(self._trail):
            lit = self._trail[head]
            head += 1
            self._propagated += 1
            false_lit = -lit
            watch_list = watches[false_lit]
            i = 0
            while i < len(watch_list):
                ci = watch_list[i]
                clause = db[ci]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                if self._value(clause[0]) == 1:
                    i += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if self._value(clause[k]) != 0:
                        clause[1], clause[k] = clause[k], clause[1]
                        watches[clause[1]].append(ci)
                        watch_list[i] = watch_list[-1]
                        watch_list.pop()
                        moved = True
                        break
                if moved:
                    continue
                if self._value(clause[0]) == 0:
                    self._qhead = head
                    return ci
                self._enqueue(clause[0], ci)
                i += 1
        self._qhead = head
        return None

    def _analyze(self, confl: int):
        """First-UIP conflict analysis; returns (learned_clause, bt_level)."""
        learned = [0]  # slot for the asserting literal
        seen = [False] * (self.num_vars + 1)
        counter = 0
        lit = None
        level = self._decision_level()
        idx = len(self._trail) - 1
        reason_idx = confl
        while True:
            clause = self._db[reason_idx]
            # the reason clause stores its propagated literal at position 0
            for q in (clause if lit is None else clause[1:]):
                v = abs(q)
                if not seen[v] and self._level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self._level[v] >= level:
                        counter += 1
                    else:
                        learned.append(q)
            while True:
                p = self._trail[idx]
                idx -= 1
                if seen[abs(p)]:
                    break
            lit = p
            seen[abs(p)] = False
            counter -= 1
            if counter == 0:
                break
            reason_idx = self._reason[abs(p)]
        learned[0] = -lit
        if len(learned) == 1:
            bt = 0
        else:
            # second-highest decision level in the learned clause
            max_i = 1
            for i in range(2, len(learned)):
                if self._level[abs(learned[i])] > self._level[abs(learned[max_i])]:
                    max_i = i
            learned[1], learned[max_i] = learned[max_i], learned[1]
            bt = self._level[abs(learned[1])]
        return learned, bt

    def _bump(self, v: int):
        self._activity[v] += self._act_inc
        if self._activity[v] > 1e100:
            for u in range(1, self.num_vars + 1):
                self._activity[u] *= 1e-100
            self._act_inc *= 1e-100

    def _decay_activities(self):
        self._act_inc /= self._act_decay

    def _pick_branch(self):
        best = None
        best_act = -1.0
        for v in range(1, self.num_vars + 1):
            if self._assign[v] == _UNASSIGNED and self._activity[v] > best_act:
                best = v
                best_act = self._activity[v]
        if best is None:
            return None
        return best if self._phase[best] else -best

    def _backtrack(self, level: int):
        if self._decision_level() <= level:
            return
        target = self._trail_lim[level]
        for lit in self._trail[target:]:
            self._assign[abs(lit)] = _UNASSIGNED
        del self._trail[target:]
        del self._trail_lim[level:]
        self._qhead = min(self._qhead, len(self._trail))


def new_solver(seed: int = 0) -> SolverSession:
    return SolverSession(seed)
