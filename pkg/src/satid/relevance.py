"""Incremental relevance tracking over the dependency graph.

A literal is relevant when it is not justified and can still contribute to
justifying the theory atom: the theory atom itself while unjustified, plus
unjustified literals reachable from a relevant literal.  Instead of storing
the full set of candidate parents per literal, the tracker keeps one watched
parent; a literal is relevant exactly when it has a watch (or is the
unjustified theory atom, whose relevance is a stored base case, never a
watch).

Watch chains always terminate at the theory atom, so the watch graph stays
acyclic.  When a watch is removed, a replacement is searched among the
literal's other parents; a candidate is rejected when following watch
pointers from it leads back to the literal being repaired (which would close
a self-supporting loop, the relevance analogue of an unfounded set).  Loops
that lose outside support are dismantled by the resulting cascade, literal by
literal.

All notifications run through a FIFO work queue drained before the external
call returns, so observers only ever see quiescent states.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import DefnfTheory, Rule, atom_of
from .justifier import JustifiedTheory, build_justification_maps

_JUSTIFIED = 0
_UNJUSTIFIED = 1
_RELEVANT = 2
_IRRELEVANT = 3
_ADD = 4
_REMOVE = 5


@dataclass(frozen=True)
class RelevanceSnapshot:
    """Quiescent view of the tracker for rendering and inspection."""

    relevant: frozenset[int]
    justified: frozenset[int]
    edges: tuple[tuple[int, int], ...]


class RelevanceTracker:
    """Watched-parent relevance tracker for one static theory."""

    def __init__(self, theory_atom: int, *, just_atoms: frozenset[int] = frozenset(),
                 to_nonjust: dict[int, int] | None = None,
                 open_atoms: frozenset[int] = frozenset(),
                 debug: bool = False) -> None:
        self._pt = theory_atom
        self._just_atoms = just_atoms
        self._to_nonjust = to_nonjust or {}
        self._opens = open_atoms
        self._debug = debug
        self._children: dict[int, list[int]] = {}
        self._parents: dict[int, dict[int, None]] = {}
        self._watched: dict[int, int] = {}
        self._justified: set[int] = set()
        self._queue: deque = deque()
        self._sealed = False
        self.query_count = 0

    @classmethod
    def for_theory(cls, theory: DefnfTheory, setup: JustifiedTheory | None = None,
                   debug: bool = False) -> "RelevanceTracker":
        if setup is None:
            setup = build_justification_maps(theory)
        tracker = cls(theory.theory_atom,
                      just_atoms=setup.maps.just_atoms,
                      to_nonjust=setup.maps.to_nonjust,
                      open_atoms=theory.opens,
                      debug=debug)
        for rule in theory.definition:
            tracker.notify_new_rule(rule)
        tracker.finish_initialization()
        return tracker

    # -- initialization ----------------------------------------------------

    def notify_new_rule(self, rule: Rule) -> None:
        """Record the dependency edges of one rule (both polarities)."""
        if self._sealed:
            raise RuntimeError("tracker already initialized; the theory is static")
        for head, sign in ((rule.head, 1), (-rule.head, -1)):
            kids = self._children.setdefault(head, [])
            for lit in rule.body:
                child = sign * lit
                parents = self._parents.setdefault(child, {})
                if head not in parents:
                    parents[head] = None
                    kids.append(child)

    def finish_initialization(self) -> None:
        """Seal the graph and assign initial watches breadth-first from the
        theory atom; first-visited parent wins, which keeps chains acyclic."""
        if self._sealed:
            raise RuntimeError("tracker already initialized")
        self._sealed = True
        visited = {self._pt}
        queue = deque((self._pt,))
        while queue:
            lit = queue.popleft()
            for child in self._children.get(lit, ()):
                if child not in visited:
                    visited.add(child)
                    self._watched[child] = lit
                    queue.append(child)
        if self._debug:
            self.validate()

    # -- queries -----------------------------------------------------------

    def is_relevant(self, lit: int) -> bool:
        self.query_count += 1
        return self._relevant(lit)

    def is_justified(self, lit: int) -> bool:
        return lit in self._justified

    def watched_parent(self, lit: int) -> int | None:
        return self._watched.get(lit)

    def relevant_literals(self) -> set[int]:
        result = set(self._watched)
        if self._pt not in self._justified:
            result.add(self._pt)
        return result

    def justified_literals(self) -> set[int]:
        return set(self._justified)

    def snapshot(self) -> RelevanceSnapshot:
        edges = tuple((parent, child)
                      for parent, kids in self._children.items() for child in kids)
        return RelevanceSnapshot(frozenset(self.relevant_literals()),
                                 frozenset(self._justified), edges)

    def _relevant(self, lit: int) -> bool:
        if lit == self._pt:
            return lit not in self._justified
        return lit in self._watched

    # -- external notifications --------------------------------------------

    def notify_becomes_true(self, lit: int) -> None:
        """A literal became true in the solver.  Justification literals and
        open literals carry justification information; assignments to original
        defined atoms are ignored."""
        atom = atom_of(lit)
        if atom in self._just_atoms:
            self._run(_JUSTIFIED, self._to_nonjust[lit], 0)
        elif atom in self._opens:
            self._run(_JUSTIFIED, lit, 0)

    def notify_becomes_unknown(self, lit: int) -> None:
        """The mirror of notify_becomes_true for backtracked literals."""
        atom = atom_of(lit)
        if atom in self._just_atoms:
            self._run(_UNJUSTIFIED, self._to_nonjust[lit], 0)
        elif atom in self._opens:
            self._run(_UNJUSTIFIED, lit, 0)

    def notify_becomes_justified(self, lit: int) -> None:
        self._run(_JUSTIFIED, lit, 0)

    def notify_becomes_unjustified(self, lit: int) -> None:
        self._run(_UNJUSTIFIED, lit, 0)

    def notify_becomes_relevant(self, lit: int) -> None:
        """Offer `lit` as a candidate parent to all its children.  Only valid
        right after `lit` gained relevance (a watch, or the base case)."""
        self._run(_RELEVANT, lit, 0)

    def notify_becomes_irrelevant(self, lit: int) -> None:
        """Withdraw `lit` as a candidate parent from all its children.  Only
        valid right after `lit` lost relevance."""
        self._run(_IRRELEVANT, lit, 0)

    def notify_add_candidate_parent(self, lit: int, parent: int) -> None:
        self._run(_ADD, lit, parent)

    def notify_remove_candidate_parent(self, lit: int, parent: int) -> None:
        self._run(_REMOVE, lit, parent)

    # -- internals ----------------------------------------------------------

    def _run(self, tag: int, a: int, b: int) -> None:
        if not self._sealed:
            raise RuntimeError("tracker not initialized")
        self._queue.append((tag, a, b))
        self._drain()
        if self._debug:
            self.validate()

    def _drain(self) -> None:
        queue = self._queue
        watched = self._watched
        justified = self._justified
        children = self._children
        parents = self._parents
        pt = self._pt
        while queue:
            tag, lit, other = queue.popleft()
            if tag == _ADD:
                # all four criteria must hold; failure is a silent no-op
                if (lit != pt and lit not in watched and lit not in justified
                        and (other == pt and pt not in justified or other in watched)
                        and other in parents.get(lit, ())):
                    watched[lit] = other
                    queue.append((_RELEVANT, lit, 0))
            elif tag == _REMOVE:
                if watched.get(lit) == other:
                    del watched[lit]
                    replacement = self.find_noncyclic_watch(lit, other)
                    if replacement is not None:
                        watched[lit] = replacement
                    else:
                        queue.append((_IRRELEVANT, lit, 0))
            elif tag == _RELEVANT:
                for child in children.get(lit, ()):
                    queue.append((_ADD, child, lit))
            elif tag == _IRRELEVANT:
                for child in children.get(lit, ()):
                    queue.append((_REMOVE, child, lit))
            elif tag == _JUSTIFIED:
                if lit in justified:
                    raise ValueError(f"literal {lit} is already justified")
                was_relevant = self._relevant(lit)
                justified.add(lit)
                watched.pop(lit, None)
                if was_relevant:
                    queue.append((_IRRELEVANT, lit, 0))
            else:  # _UNJUSTIFIED
                if lit not in justified:
                    raise ValueError(f"literal {lit} is not justified")
                justified.remove(lit)
                if lit == pt:
                    queue.append((_RELEVANT, pt, 0))
                else:
                    for parent in parents.get(lit, ()):
                        queue.append((_ADD, lit, parent))

    def find_noncyclic_watch(self, lit: int, excluded: int) -> int | None:
        """A replacement watched parent for `lit`: another relevant parent
        whose watch chain does not lead back to `lit`.  None when every
        candidate fails, which makes `lit` irrelevant."""
        if lit in self._justified:
            return None
        watched = self._watched
        for candidate in self._parents.get(lit, ()):
            if candidate == excluded or not self._relevant(candidate):
                continue
            # walk the candidate's watch chain; hitting `lit` (or an already
            # visited literal) would close a cycle
            node = candidate
            seen = set()
            while node != lit and node not in seen:
                seen.add(node)
                nxt = watched.get(node)
                if nxt is None:
                    return candidate
                node = nxt
            if node != lit:
                return candidate
        return None

    # -- debug invariants ----------------------------------------------------

    def validate(self) -> None:
        """Full-scan structural invariants; raises AssertionError on breakage."""
        watched = self._watched
        if self._pt in watched:
            raise AssertionError("the theory atom must never have a watch")
        for lit, parent in watched.items():
            if lit in self._justified:
                raise AssertionError(f"justified literal {lit} has a watch")
            if not self._relevant(parent):
                raise AssertionError(f"watch {lit} -> {parent} has an irrelevant parent")
            if parent not in self._parents.get(lit, ()):
                raise AssertionError(f"watch {lit} -> {parent} is not a dependency edge")
        resolved: set[int] = set()
        for lit in watched:
            path = []
            node = lit
            on_path = set()
            while node in watched and node not in resolved:
                if node in on_path:
                    raise AssertionError(f"watch cycle through {node}")
                on_path.add(node)
                path.append(node)
                node = watched[node]
            if node not in resolved and node != self._pt:
                raise AssertionError(f"watch chain from {lit} ends at {node}, "
                                     "not at the theory atom")
            resolved.update(path)
        for lit in self._justified:
            if -lit in self._justified:
                raise AssertionError(f"both {lit} and {-lit} justified")
