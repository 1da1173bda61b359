"""Theories, three-valued semantics, and the brute-force oracle.

A normal-form theory is one distinguished atom plus an inductive definition
with flat conjunctive/disjunctive rule bodies.  This script builds the running
cyclic example, inspects its well-founded models, and enumerates its models.
"""

from satid import PartialInterpretation, parse_cid
from satid import oracle

# theory atom 1 holds when open atom 2 does, or when the 3/4 loop does:
#   x1 <- x2 | x3 ;  x3 <- x4 ;  x4 <- x3
text = """\
p cid 4
t 1
r 1 d 2 3 0
r 3 d 4 0
r 4 d 3 0
"""
theory = parse_cid(text)
print("theory:", theory)
print("opens:", sorted(theory.opens), "defined:", sorted(theory.defined))

# The loop 3/4 has no outside support: under the well-founded semantics both
# atoms come out false in every context.
for a2 in (2, -2):
    context = PartialInterpretation.from_literals([a2])
    wfm = oracle.well_founded_model(theory.definition, context)
    print(f"context x2={'t' if a2 > 0 else 'f'} ->",
          {theory.name_of(a): wfm.value(a).symbol for a in theory.atoms.atoms()})

# Every open context yields a two-valued model, so the definition is total.
print("total:", oracle.is_total(theory.definition, theory.atoms.atoms()))

# Only the context with x2 true satisfies the theory atom: exactly one model.
models = oracle.enumerate_models(theory)
print("models:", [m.true_literals() for m in models])

# A symmetric negative loop is the classic non-total definition: its
# well-founded model leaves both atoms unknown.
negative_loop = parse_cid("p cid 2\nt 1\nr 1 d -2 0\nr 2 d -1 0\n")
wfm = oracle.well_founded_model(negative_loop.definition, PartialInterpretation())
print("negative loop values:",
      [wfm.value(a).symbol for a in negative_loop.atoms.atoms()])
print("negative loop total:",
      oracle.is_total(negative_loop.definition, negative_loop.atoms.atoms()))

# General theories with nested formulas are flattened into normal form:
# fresh atoms stand for connective subformulas, constraints conjoin into the
# theory atom, and models restricted to the original atoms are preserved.
from pathlib import Path
from satid import normalize_to_defnf, parse_pcid, write_cid

ast = parse_pcid(Path(__file__).with_name("data").joinpath("nested.pcid").read_text())
flat, names = normalize_to_defnf(ast)
print("\nnormalized nested theory:")
print(write_cid(flat), end="")
print("name map:", names)
originals = list(ast.atoms.atoms())
flat_models = {frozenset(a for a in originals if m.value(a) is oracle.TRUE)
               for m in oracle.enumerate_models(flat)}
print("models preserved:", sorted(map(sorted, flat_models)) ==
      list(map(sorted, oracle.pcid_models(ast))))
