import random

import pytest

from satid import build_justification_maps, parse_trace
from satid.replay import ReplayOrderError, TraceReplayer

import theory_gen


def test_loop_trace_expectations(loop):
    setup = build_justification_maps(loop)
    j_pt = setup.maps.to_just[1]
    trace = parse_trace(f"+ 2\n+ {j_pt}\n# expect 3 0\n# expect 4 0\n# expect 1 0\n")
    report = TraceReplayer(loop, setup=setup).run(trace)
    assert report.ok
    assert report.events == 5


def test_expect_mismatch_is_reported(loop):
    report = TraceReplayer(loop).run(parse_trace("# expect 3 0\n"))
    assert not report.ok
    assert report.mismatches[0].kind == "expect"
    assert "isRelevant(3) = 1" in report.mismatches[0].message


def test_query_output_format(loop):
    replayer = TraceReplayer(loop)
    report = replayer.run(parse_trace("? 3\n? -3\n"))
    assert report.outputs == ["3 1", "-3 0"]


def test_intro_trace_prunes_negated_literal(intro):
    setup = build_justification_maps(intro)
    d = intro.atoms.id_of("d")
    e = intro.atoms.id_of("e")
    j_a = setup.maps.to_just[intro.atoms.id_of("a")]
    trace = parse_trace(f"+ {d}\n+ {j_a}\n# expect -{e} 0\n? -{e}\n")
    report = TraceReplayer(intro, setup=setup).run(trace)
    assert report.ok
    assert report.outputs == [f"-{e} 0"]


def test_retracting_unassigned_literal_is_an_ordering_error(loop):
    replayer = TraceReplayer(loop)
    with pytest.raises(ReplayOrderError, match="not currently true"):
        replayer.run(parse_trace("- 2\n"))


def test_retracting_wrong_polarity_is_an_ordering_error(loop):
    replayer = TraceReplayer(loop)
    with pytest.raises(ReplayOrderError, match="not currently true"):
        replayer.run(parse_trace("+ 2\n- -2\n"))


def test_double_assignment_is_an_ordering_error(loop):
    replayer = TraceReplayer(loop)
    with pytest.raises(ReplayOrderError, match="already assigned"):
        replayer.run(parse_trace("+ 2\n+ -2\n"))


def test_literal_outside_table_rejected(loop):
    replayer = TraceReplayer(loop)
    with pytest.raises(ReplayOrderError, match="outside"):
        replayer.run(parse_trace("+ 99\n"))


def test_oracle_checking_counts_quiescent_states():
    rng = random.Random(40)
    theory = theory_gen.random_total_theory(rng, max_atoms=5)
    setup = build_justification_maps(theory)
    events, _ = theory_gen.random_trace(rng, theory, setup, min_events=40)
    replayer = TraceReplayer(theory, setup=setup, check_oracle=True)
    report = replayer.run(events)
    assert report.ok
    assert report.oracle_checks > 0
