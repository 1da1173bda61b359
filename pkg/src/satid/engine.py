"""CDCL search over rule completions plus unfounded-set propagation.

The solver works on the combined definition (the original rules and their
justification copy): unit propagation runs on the completion clauses with two
watched literals, unfounded-set propagation falsifies defined atoms that lost
external support, and conflicts are analyzed to the first unique implication
point.  Justification atoms are never decided, so their values are produced
by propagation alone and track justified status exactly.  With the relevance
filter on, decisions are restricted to atoms that are relevant in at least
one polarity, and search can stop as soon as the theory atom's justification
atom becomes true.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .core import (DefnfTheory, PartialInterpretation, TruthValue,
                   completion_clauses)
from .justifier import JustifiedTheory, build_justification_maps
from .relevance import RelevanceTracker

VSIDS_DECAY = 0.95
LUBY_UNIT = 64


@dataclass
class SolverConfig:
    relevance_filter: bool = True
    stop_on_justified: bool = True
    empty_relevant_policy: str = "backtrack"  # "backtrack" | "fallback"
    seed: int = 0
    max_conflicts: int | None = None
    time_limit: float | None = None
    decision_listener: Callable[[int, PartialInterpretation], None] | None = None
    debug: bool = False

    def __post_init__(self) -> None:
        if self.empty_relevant_policy not in ("backtrack", "fallback"):
            raise ValueError(f"unknown policy {self.empty_relevant_policy!r}")
        if self.max_conflicts is not None and self.max_conflicts < 0:
            raise ValueError("max_conflicts must be nonnegative")
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time_limit must be nonnegative")


@dataclass
class SolveStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    unfounded_sets: int = 0
    restarts: int = 0
    relevance_queries: int = 0
    stopped_early: bool = False
    models_represented: int | None = None
    wall_ms: int = 0


@dataclass
class SolveResult:
    status: str  # "sat" | "unsat"
    witness: PartialInterpretation | None
    stats: SolveStats

    def witness_restricted(self, theory: DefnfTheory) -> PartialInterpretation | None:
        if self.witness is None:
            return None
        return self.witness.restrict(theory.atoms.atoms())


class BudgetExhausted(RuntimeError):
    """Conflict or time budget ran out before an answer."""

    def __init__(self, message: str, stats: SolveStats) -> None:
        super().__init__(message)
        self.stats = stats


class Solver:
    """Single-use CDCL solver instance for one theory."""

    def __init__(self, theory: DefnfTheory, config: SolverConfig | None = None,
                 setup: JustifiedTheory | None = None,
                 assert_constraint: bool = True) -> None:
        self.theory = theory
        self.cfg = config or SolverConfig()
        self.setup = setup or build_justification_maps(theory)
        extended = self.setup.extended
        self.n_atoms = extended.n_atoms
        self.values = [0] * (self.n_atoms + 1)  # 0 unknown, 1 true, -1 false
        self.levels = [0] * (self.n_atoms + 1)
        self.reasons: list[int | None] = [None] * (self.n_atoms + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.flipped: list[bool] = []
        self.qhead = 0
        self.clauses: list[list[int]] = []
        self.n_problem_clauses = 0
        self.watches: dict[int, list[int]] = {}
        self.activity = [0.0] * (self.n_atoms + 1)
        self.var_inc = 1.0
        self.phase = [False] * (self.n_atoms + 1)
        self.stats = SolveStats()
        self.j_theory_atom = self.setup.just_theory_atom
        self._just_atoms = self.setup.maps.just_atoms
        self._plain_atoms = [a for a in range(1, self.n_atoms + 1)
                             if a not in self._just_atoms]
        self._open_atoms = sorted(theory.opens)
        self._rules_by_head = {rule.head: rule for rule in extended.definition}
        self._defined_ext = frozenset(extended.definition.defined_atoms)
        self.tracker = (RelevanceTracker.for_theory(theory, self.setup,
                                                    debug=self.cfg.debug)
                        if self.cfg.relevance_filter else None)
        self._root_units: list[tuple[int, int]] = []
        for clause in completion_clauses(extended.definition):
            self._add_problem_clause(list(clause))
        if assert_constraint:
            self._add_problem_clause([theory.theory_atom])

    # -- assignment primitives ----------------------------------------------

    def lit_value(self, lit: int) -> int:
        value = self.values[abs(lit)]
        return value if lit > 0 else -value

    def interpretation(self, original_only: bool = False) -> PartialInterpretation:
        limit = self.theory.n_atoms if original_only else self.n_atoms
        return PartialInterpretation.from_literals(
            (atom if self.values[atom] > 0 else -atom)
            for atom in range(1, limit + 1) if self.values[atom] != 0)

    @property
    def level(self) -> int:
        return len(self.trail_lim)

    def _enqueue(self, lit: int, reason: int | None) -> bool:
        value = self.lit_value(lit)
        if value == 1:
            return True
        if value == -1:
            return False
        atom = abs(lit)
        self.values[atom] = 1 if lit > 0 else -1
        self.levels[atom] = self.level
        self.reasons[atom] = reason
        self.trail.append(lit)
        if reason is not None:
            self.stats.propagations += 1
        if self.tracker is not None:
            self.tracker.notify_becomes_true(lit)
        return True

    def _backtrack(self, target_level: int) -> None:
        while len(self.trail_lim) > target_level:
            start = self.trail_lim.pop()
            self.flipped.pop()
            while len(self.trail) > start:
                lit = self.trail.pop()
                atom = abs(lit)
                self.phase[atom] = self.values[atom] > 0
                self.values[atom] = 0
                self.reasons[atom] = None
                if self.tracker is not None:
                    self.tracker.notify_becomes_unknown(lit)
        self.qhead = len(self.trail)

    # -- clause database ------------------------------------------------------

    def _add_problem_clause(self, lits: list[int]) -> None:
        clause = []
        for lit in lits:
            if -lit in clause:
                return  # tautology
            if lit not in clause:
                clause.append(lit)
        index = len(self.clauses)
        self.clauses.append(clause)
        self.n_problem_clauses += 1
        if len(clause) == 1:
            self._root_units.append((clause[0], index))
        else:
            self.watches.setdefault(clause[0], []).append(index)
            self.watches.setdefault(clause[1], []).append(index)

    def _add_learned_clause(self, clause: list[int]) -> int:
        index = len(self.clauses)
        self.clauses.append(clause)
        if len(clause) >= 2:
            self.watches.setdefault(clause[0], []).append(index)
            self.watches.setdefault(clause[1], []).append(index)
        return index

    # -- propagation ----------------------------------------------------------

    def propagate_unit(self) -> list[int] | None:
        """Unit propagation to fixpoint; returns the conflicting clause if any."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            falsified = -lit
            watchlist = self.watches.get(falsified)
            if not watchlist:
                continue
            kept: list[int] = []
            i = 0
            while i < len(watchlist):
                ci = watchlist[i]
                i += 1
                clause = self.clauses[ci]
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self.lit_value(first) == 1:
                    kept.append(ci)
                    continue
                for k in range(2, len(clause)):
                    if self.lit_value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches.setdefault(clause[1], []).append(ci)
                        break
                else:
                    kept.append(ci)
                    if not self._enqueue(first, ci):
                        kept.extend(watchlist[i:])
                        self.watches[falsified] = kept
                        return clause
            self.watches[falsified] = kept
        return None

    def propagate_unfounded(self) -> list[int] | None:
        """Falsify one maximal unfounded set, with external-bodies reasons.

        A non-false defined atom is founded when some rule can still support
        it from outside the unfounded candidates: a conjunctive body with no
        false literal and every positive defined atom itself founded, or some
        such disjunct.  Everything left over is propagated false together.
        """
        defined = self._defined_ext
        candidates = [a for a in defined if self.values[a] != -1]
        founded: set[int] = set()

        def supported(rule) -> bool:
            if rule.conjunctive:
                return all(self.lit_value(lit) != -1
                           and (lit < 0 or lit not in defined or lit in founded)
                           for lit in rule.body)
            return any(self.lit_value(lit) != -1
                       and (lit < 0 or lit not in defined or lit in founded)
                       for lit in rule.body)

        changed = True
        while changed:
            changed = False
            for atom in candidates:
                if atom not in founded and supported(self._rules_by_head[atom]):
                    founded.add(atom)
                    changed = True
        unfounded = [a for a in candidates if a not in founded]
        if not unfounded:
            return None
        self.stats.unfounded_sets += 1

        unfounded_set = set(unfounded)
        blockers: list[int] = []
        for atom in unfounded:
            rule = self._rules_by_head[atom]
            if rule.conjunctive:
                for lit in rule.body:
                    if self.lit_value(lit) == -1:
                        if lit not in blockers:
                            blockers.append(lit)
                        break
            else:
                for lit in rule.body:
                    if self.lit_value(lit) == -1:
                        if lit not in blockers:
                            blockers.append(lit)

        for atom in unfounded:
            clause = [-atom] + [b for b in blockers if b != -atom]
            index = self._add_learned_clause(clause)
            if not self._enqueue(-atom, index):
                return self.clauses[index]
        return None

    def propagate(self) -> list[int] | None:
        """Interleave unit and unfounded-set propagation to a joint fixpoint."""
        while True:
            conflict = self.propagate_unit()
            if conflict is not None:
                return conflict
            before = len(self.trail)
            conflict = self.propagate_unfounded()
            if conflict is not None:
                return conflict
            if len(self.trail) == before:
                return None

    # -- conflict analysis ------------------------------------------------------

    def _bump(self, atom: int) -> None:
        self.activity[atom] += self.var_inc
        if self.activity[atom] > 1e100:
            for a in range(1, self.n_atoms + 1):
                self.activity[a] *= 1e-100
            self.var_inc *= 1e-100

    def analyze_conflict(self, conflict: list[int]) -> tuple[list[int], int]:
        """First-UIP learned clause and the level to backjump to."""
        current = self.level
        learned: list[int] = []
        seen: set[int] = set()
        counter = 0
        p: int | None = None
        reason = conflict
        index = len(self.trail) - 1
        while True:
            for lit in reason:
                if p is not None and lit == p:
                    continue
                atom = abs(lit)
                if atom not in seen and self.levels[atom] > 0:
                    seen.add(atom)
                    self._bump(atom)
                    if self.levels[atom] == current:
                        counter += 1
                    else:
                        learned.append(lit)
            while abs(self.trail[index]) not in seen:
                index -= 1
            p = self.trail[index]
            index -= 1
            seen.remove(abs(p))
            counter -= 1
            if counter == 0:
                break
            reason_index = self.reasons[abs(p)]
            assert reason_index is not None, "non-UIP literal without a reason"
            reason = self.clauses[reason_index]
        learned.insert(0, -p)
        if len(learned) == 1:
            return learned, 0
        best = max(range(1, len(learned)), key=lambda i: self.levels[abs(learned[i])])
        learned[1], learned[best] = learned[best], learned[1]
        return learned, self.levels[abs(learned[1])]

    # -- decisions ----------------------------------------------------------------

    def _pick_atom(self, restrict_relevant: bool) -> tuple[int, bool, bool] | None:
        """Best unassigned decidable atom by activity (ties: lowest id).

        Returns (atom, positive_relevant, negative_relevant); None when no
        atom qualifies.
        """
        tracker = self.tracker
        best: tuple[float, int] | None = None
        best_atom = None
        best_flags = (False, False)
        for atom in self._plain_atoms:
            if self.values[atom] != 0:
                continue
            if restrict_relevant:
                assert tracker is not None
                pos = tracker.is_relevant(atom)
                neg = tracker.is_relevant(-atom)
                if not (pos or neg):
                    continue
                flags = (pos, neg)
            else:
                flags = (False, False)
            key = (self.activity[atom], -atom)
            if best is None or key > best:
                best = key
                best_atom = atom
                best_flags = flags
        if best_atom is None:
            return None
        return best_atom, best_flags[0], best_flags[1]

    def _decision_literal(self, atom: int, pos_relevant: bool, neg_relevant: bool) -> int:
        if pos_relevant != neg_relevant:
            return atom if pos_relevant else -atom
        return atom if self.phase[atom] else -atom

    def _decide(self, lit: int, flipped: bool = False, heuristic: bool = True) -> None:
        assert abs(lit) not in self._just_atoms, "justification atoms are never decided"
        if heuristic and self.cfg.decision_listener is not None:
            self.cfg.decision_listener(lit, self.interpretation(original_only=True))
        self.trail_lim.append(len(self.trail))
        self.flipped.append(flipped)
        self.stats.decisions += 1
        self._enqueue(lit, None)

    def _flip_most_recent_decision(self) -> bool:
        """Chronological step of the `backtrack` policy: revisit the deepest
        not-yet-flipped decision with its other polarity (no learned clause)."""
        for index in range(len(self.trail_lim) - 1, -1, -1):
            if not self.flipped[index]:
                decision = self.trail[self.trail_lim[index]]
                self._backtrack(index)
                self._decide(-decision, flipped=True, heuristic=False)
                return True
        return False

    def report_justified_count(self) -> int:
        """2^n models represented by the current justifying assignment, with
        n the number of unassigned open atoms."""
        if self.lit_value(self.j_theory_atom) != 1:
            raise ValueError("theory atom is not justified in the current state")
        unassigned = sum(1 for atom in self._open_atoms if self.values[atom] == 0)
        return 2 ** unassigned

    # -- main loop ------------------------------------------------------------------

    def solve(self) -> SolveResult:
        start = time.monotonic()
        try:
            status, witness = self._search(start)
        finally:
            self.stats.wall_ms = int((time.monotonic() - start) * 1000)
            if self.tracker is not None:
                self.stats.relevance_queries = self.tracker.query_count
        return SolveResult(status, witness, self.stats)

    def _search(self, start: float) -> tuple[str, PartialInterpretation | None]:
        cfg = self.cfg
        for lit, index in self._root_units:
            if not self._enqueue(lit, index):
                return "unsat", None
        luby_index = 1
        restart_limit = LUBY_UNIT * _luby(luby_index)
        conflicts_here = 0
        while True:
            conflict = self.propagate()
            if conflict is not None:
                self.stats.conflicts += 1
                conflicts_here += 1
                if self.level == 0:
                    return "unsat", None
                if (cfg.max_conflicts is not None
                        and self.stats.conflicts > cfg.max_conflicts):
                    raise BudgetExhausted("conflict budget exhausted", self.stats)
                learned, backjump_level = self.analyze_conflict(conflict)
                self._backtrack(backjump_level)
                index = self._add_learned_clause(learned)
                self._enqueue(learned[0], index)
                self.var_inc /= VSIDS_DECAY
                if conflicts_here >= restart_limit:
                    luby_index += 1
                    restart_limit = LUBY_UNIT * _luby(luby_index)
                    conflicts_here = 0
                    if self.level > 0:
                        self.stats.restarts += 1
                        self._backtrack(0)
                continue
            if (cfg.time_limit is not None
                    and time.monotonic() - start > cfg.time_limit):
                raise BudgetExhausted("time budget exhausted", self.stats)
            if cfg.stop_on_justified and self.lit_value(self.j_theory_atom) == 1:
                self.stats.stopped_early = True
                self.stats.models_represented = self.report_justified_count()
                return "sat", self.interpretation()
            justified_already = self.lit_value(self.j_theory_atom) == 1
            use_filter = cfg.relevance_filter and not justified_already
            picked = self._pick_atom(restrict_relevant=use_filter)
            if picked is not None:
                atom, pos, neg = picked
                self._decide(self._decision_literal(atom, pos, neg),
                             heuristic=use_filter or not cfg.relevance_filter)
                continue
            if all(self.values[a] != 0 for a in self._plain_atoms):
                return "sat", self.interpretation()
            # relevance filter left nothing decidable while atoms remain and
            # the theory atom is not justified
            if cfg.empty_relevant_policy == "fallback":
                fallback = self._pick_atom(restrict_relevant=False)
                assert fallback is not None
                atom, _, _ = fallback
                self._decide(atom if self.phase[atom] else -atom, heuristic=False)
                continue
            if not self._flip_most_recent_decision():
                return "unsat", None


def _luby(i: int) -> int:
    """Luby restart sequence 1 1 2 1 1 2 4 ..."""
    k = 1
    while (1 << (k + 1)) - 1 <= i:
        k += 1
    while (1 << k) - 1 != i:
        i -= (1 << k) - 1  # drop the completed block
        k = 1
        while (1 << (k + 1)) - 1 <= i:
            k += 1
    return 1 << (k - 1)


def solve(theory: DefnfTheory, config: SolverConfig | None = None) -> SolveResult:
    """Solve a theory with a fresh solver instance."""
    return Solver(theory, config).solve()


def defined_fixpoint(theory: DefnfTheory,
                     open_literals: list[int]) -> dict[int, TruthValue]:
    """Values of the original defined atoms at the propagation fixpoint when
    only the given open literals are set (no constraint asserted, nothing
    decided).  This is the propagation side of the propagation/justifiedness
    correspondence."""
    solver = Solver(theory,
                    SolverConfig(relevance_filter=False, stop_on_justified=False),
                    assert_constraint=False)
    for lit, index in solver._root_units:
        if not solver._enqueue(lit, index):
            raise ValueError("definition is contradictory at the root")
    for lit in open_literals:
        if abs(lit) not in theory.opens:
            raise ValueError(f"literal {lit} is not over an open atom")
        if not solver._enqueue(lit, None):
            raise ValueError(f"contradictory open literal {lit}")
    conflict = solver.propagate()
    if conflict is not None:
        raise ValueError("propagation conflict from open literals alone")
    return {atom: TruthValue(solver.values[atom]) for atom in sorted(theory.defined)}
