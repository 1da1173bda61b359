"""The incremental relevance tracker, step by step.

Relevance is tracked with one watched parent per literal: a literal is
relevant exactly when it has a watch (or is the unjustified theory atom).
When support arrives, watches cascade away; loops that lose their connection
to the theory atom are detected by walking watch chains and collapse.
"""

from pathlib import Path

from satid import (RelevanceTracker, build_justification_maps, parse_cid,
                   parse_trace, to_dot)
from satid.replay import TraceReplayer

theory = parse_cid(Path(__file__).with_name("data").joinpath("loop.cid").read_text())
setup = build_justification_maps(theory)
tracker = RelevanceTracker.for_theory(theory, setup)

p_T, a, p, q = 1, 2, 3, 4
print("dependency parents of p:", sorted(tracker._parents[p]))
print("initial watches: p ->", tracker.watched_parent(p),
      " q ->", tracker.watched_parent(q))
print("initially relevant:", sorted(tracker.relevant_literals(), key=abs))

# open atom a becomes true; propagation would then derive j(p_T) and falsify
# the unfounded loop copies, so those notifications follow
tracker.notify_becomes_true(a)
tracker.notify_becomes_true(setup.maps.to_just[p_T])
print("\nafter a is true and the theory atom is justified:")
print("relevant:", sorted(tracker.relevant_literals(), key=abs))
print("p's replacement watch search finds:",
      tracker.find_noncyclic_watch(p, excluded=p_T))

# undo in reverse order: the initial state comes back
tracker.notify_becomes_unknown(setup.maps.to_just[p_T])
tracker.notify_becomes_unknown(a)
print("\nafter backtracking:", sorted(tracker.relevant_literals(), key=abs))

# the same interaction as a replayable trace file with expectations
trace = parse_trace(Path(__file__).with_name("data").joinpath("loop.trc").read_text())
replayer = TraceReplayer(theory, setup=setup, check_oracle=True)
report = replayer.run(trace)
print(f"\ntrace replay: {report.events} events, "
      f"{report.oracle_checks} oracle checks, ok={report.ok}")

print("\nfinal relevance graph as DOT:")
print(to_dot(replayer.tracker.snapshot(), theory.name_of))
