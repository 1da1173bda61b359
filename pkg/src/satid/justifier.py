"""Justification atoms: a duplicated definition over fresh atoms whose truth
values are produced purely by propagation, so that j(p) being true/false in
the solver encodes that p / ~p is justified.

The copy replaces every defined atom (head or body) by its justification
atom and leaves open atoms untouched.  The solver must never decide on a
justification atom; their values then coincide with justified status at every
propagation fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (FALSE, TRUE, UNKNOWN, DefnfTheory, Definition,
                   PartialInterpretation, Rule, TruthValue, atom_of)


@dataclass(frozen=True)
class JustificationMaps:
    """Literal translation between the original and the justification copy."""

    to_just: dict[int, int]
    to_nonjust: dict[int, int]
    just_atoms: frozenset[int]
    definition: Definition

    def to_just_lit(self, lit: int) -> int:
        return self.to_just[lit]

    def to_nonjust_lit(self, lit: int) -> int:
        return self.to_nonjust[lit]

    def is_just_atom(self, atom: int) -> bool:
        return atom in self.just_atoms


@dataclass(frozen=True)
class JustifiedTheory:
    """A theory together with its justification copy and combined solver view."""

    base: DefnfTheory
    maps: JustificationMaps
    extended: DefnfTheory

    @property
    def just_theory_atom(self) -> int:
        return self.maps.to_just[self.base.theory_atom]


def build_justification_maps(theory: DefnfTheory) -> JustifiedTheory:
    """Create the justification copy of a theory's definition.

    Fresh atoms are appended after the existing table in ascending order of
    the defined atom they copy, which makes their ids reproducible.
    """
    atoms = theory.atoms.copy()
    defined = sorted(theory.definition.defined_atoms)

    j_of: dict[int, int] = {}
    for atom in defined:
        name: str | None = f"j({theory.atoms.name_of(atom)})"
        if name in atoms:
            name = None
        j_of[atom] = atoms.fresh(name)

    to_just: dict[int, int] = {}
    to_nonjust: dict[int, int] = {}
    for atom, j_atom in j_of.items():
        to_just[atom] = j_atom
        to_just[-atom] = -j_atom
        to_nonjust[j_atom] = atom
        to_nonjust[-j_atom] = -atom

    def translate(lit: int) -> int:
        atom = atom_of(lit)
        if atom in j_of:
            return j_of[atom] if lit > 0 else -j_of[atom]
        return lit

    j_rules = [
        Rule(j_of[rule.head], rule.conjunctive, tuple(translate(l) for l in rule.body))
        for rule in theory.definition
    ]
    maps = JustificationMaps(to_just, to_nonjust, frozenset(j_of.values()),
                             Definition(j_rules))
    combined = Definition(theory.definition.rules + maps.definition.rules)
    extended = DefnfTheory(atoms, theory.theory_atom, combined)
    return JustifiedTheory(theory, maps, extended)


def justification_status(setup: JustifiedTheory, lit: int,
                         interp: PartialInterpretation) -> TruthValue:
    """Justified status of a literal read off the solver interpretation:
    true when the literal is justified, false when its negation is.

    Defined literals defer to their justification atom; open literals are
    their own one-node justifications, so their status is their value.
    """
    atom = atom_of(lit)
    if atom in setup.base.defined:
        value = interp.literal_value(setup.maps.to_just[lit])
    else:
        value = interp.literal_value(lit)
    if value is TRUE:
        return TRUE
    if value is FALSE:
        return FALSE
    return UNKNOWN


def status_change_for_event(setup: JustifiedTheory, lit: int) -> int | None:
    """The literal whose justified status flips when `lit` becomes true (or,
    symmetrically, becomes unknown again); None when nothing changes.

    Justification literals report their original literal; open literals
    report themselves; assignments to original defined atoms carry no
    justification information.
    """
    atom = atom_of(lit)
    if setup.maps.is_just_atom(atom):
        return setup.maps.to_nonjust[lit]
    if atom in setup.base.opens:
        return lit
    return None
