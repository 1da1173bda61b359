import json

import jsonschema
import pytest

from satid import build_justification_maps, parse_cid
from satid.cli import STATS_SCHEMA, main

LOOP_CID = "p cid 4\nt 1\nr 1 d 2 3 0\nr 3 d 4 0\nr 4 d 3 0\n"
UNSAT_CID = "p cid 2\nt 1\nr 1 c 2 -2 0\n"


@pytest.fixture
def loop_path(tmp_path):
    path = tmp_path / "loop.cid"
    path.write_text(LOOP_CID)
    return str(path)


def test_solve_sat_exit_code_and_witness(loop_path, capsys):
    assert main(["solve", loop_path]) == 10
    out = capsys.readouterr().out
    assert "SATISFIABLE" in out
    v_line = next(l for l in out.splitlines() if l.startswith("v"))
    assert " 2 " in v_line and v_line.endswith(" 0")
    assert "models_represented: 1" in out


def test_solve_unsat_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.cid"
    path.write_text(UNSAT_CID)
    assert main(["solve", str(path)]) == 20
    assert "UNSATISFIABLE" in capsys.readouterr().out


def test_solve_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.cid"
    path.write_text("p cid 2\nt 1\nr 1 q 2 0\n")
    assert main(["solve", str(path)]) == 2
    assert "error" in capsys.readouterr().err


def test_stats_json_schema(loop_path, tmp_path, capsys):
    stats_path = tmp_path / "stats.json"
    assert main(["solve", loop_path, "--stats-json", str(stats_path)]) == 10
    payload = json.loads(stats_path.read_text())
    jsonschema.validate(payload, STATS_SCHEMA)
    assert payload["result"] == "sat"
    assert payload["stopped_early"] is True
    assert payload["models_represented"] == 1
    capsys.readouterr()


def test_stats_deterministic_across_runs(loop_path, tmp_path, capsys):
    payloads = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        main(["solve", loop_path, "--seed", "7", "--stats-json", str(path)])
        payload = json.loads(path.read_text())
        payload.pop("wall_ms")
        payloads.append(payload)
    assert payloads[0] == payloads[1]
    capsys.readouterr()


def test_solve_flags_accepted(loop_path, capsys):
    assert main(["solve", loop_path, "--relevance=off", "--stop-on-justified=off",
                 "--on-empty-relevant=fallback", "--max-conflicts=100"]) == 10
    capsys.readouterr()


def test_solve_dot_output(loop_path, tmp_path, capsys):
    dot_path = tmp_path / "deps.dot"
    main(["solve", loop_path, "--dot", str(dot_path)])
    assert dot_path.read_text().startswith("digraph")
    capsys.readouterr()


def test_replay_pass_and_mismatch(loop_path, tmp_path, capsys):
    theory = parse_cid(LOOP_CID)
    j_pt = build_justification_maps(theory).maps.to_just[1]
    good = tmp_path / "good.trc"
    good.write_text(f"+ 2\n+ {j_pt}\n# expect 3 0\n? 1\n")
    assert main(["replay", loop_path, str(good)]) == 0
    out = capsys.readouterr().out
    assert "1 0" in out and "OK" in out

    bad = tmp_path / "bad.trc"
    bad.write_text(f"+ 2\n+ {j_pt}\n# expect 3 1\n")
    assert main(["replay", loop_path, str(bad)]) == 1
    assert "MISMATCH" in capsys.readouterr().err


def test_replay_ordering_error(loop_path, tmp_path, capsys):
    trace = tmp_path / "order.trc"
    trace.write_text("- 2\n")
    assert main(["replay", loop_path, str(trace)]) == 2
    assert "not currently true" in capsys.readouterr().err


def test_replay_check_oracle(loop_path, tmp_path, capsys):
    theory = parse_cid(LOOP_CID)
    j_pt = build_justification_maps(theory).maps.to_just[1]
    trace = tmp_path / "checked.trc"
    trace.write_text(f"+ 2\n+ {j_pt}\n- {j_pt}\n- 2\n")
    assert main(["replay", loop_path, str(trace), "--check-oracle"]) == 0
    assert "oracle checks" in capsys.readouterr().out


def test_replay_dot_snapshot(loop_path, tmp_path, capsys):
    trace = tmp_path / "t.trc"
    trace.write_text("+ 2\n")
    dot_path = tmp_path / "relevance.dot"
    assert main(["replay", loop_path, str(trace), "--dot", str(dot_path)]) == 0
    assert dot_path.read_text().startswith("digraph relevance")
    capsys.readouterr()


def test_oracle_total(loop_path, tmp_path, capsys):
    assert main(["oracle", "total", loop_path]) == 0
    assert capsys.readouterr().out.strip() == "total"
    negloop = tmp_path / "neg.cid"
    negloop.write_text("p cid 2\nt 1\nr 1 d -2 0\nr 2 d -1 0\n")
    main(["oracle", "total", str(negloop)])
    assert capsys.readouterr().out.strip() == "not total"


def test_oracle_models(loop_path, capsys):
    assert main(["oracle", "models", loop_path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "1"
    assert lines[1] == "1 2 -3 -4"


def test_oracle_relevant(loop_path, capsys):
    assert main(["oracle", "relevant", loop_path]) == 0
    assert capsys.readouterr().out.split() == ["x1", "x2", "x3", "x4"]
    assert main(["oracle", "relevant", loop_path, "--assign", "2"]) == 0
    assert capsys.readouterr().out.strip() == ""


def test_oracle_justified_and_count(loop_path, capsys):
    assert main(["oracle", "justified", loop_path, "--assign", "2", "--atom", "1"]) == 0
    assert capsys.readouterr().out.strip() == "x1 true"
    assert main(["oracle", "count", loop_path, "--assign", "2"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_oracle_wfm(loop_path, capsys):
    assert main(["oracle", "wfm", loop_path, "--context", "-2"]) == 0
    out = dict(line.split() for line in capsys.readouterr().out.splitlines())
    assert out == {"x1": "f", "x2": "f", "x3": "f", "x4": "f"}


def test_oracle_guard_refusal(tmp_path, capsys):
    rules = "\n".join(f"r {a} d {a + 1} 0" for a in range(1, 15))
    path = tmp_path / "big.cid"
    path.write_text(f"p cid 15\nt 1\n{rules}\n")
    assert main(["oracle", "relevant", str(path)]) == 3
    assert "refused" in capsys.readouterr().err


def test_normalize_writes_cid_and_name_map(tmp_path, capsys):
    source = tmp_path / "input.pcid"
    source.write_text("(theory (constraint (or a (and b c))))")
    out = tmp_path / "out.cid"
    names = tmp_path / "names.json"
    assert main(["normalize", str(source), "-o", str(out),
                 "--name-map", str(names)]) == 0
    theory = parse_cid(out.read_text())
    assert theory.theory_atom == json.loads(names.read_text())["_pT"]
    capsys.readouterr()


def test_solve_accepts_pcid(tmp_path, capsys):
    source = tmp_path / "input.pcid"
    source.write_text("(theory (constraint p_T) (define (rule p_T (or a p)) "
                      "(rule p q) (rule q p)))")
    assert main(["solve", str(source)]) == 10
    capsys.readouterr()


def test_compare_agreement(loop_path, capsys):
    assert main(["compare", loop_path]) == 0
    out = capsys.readouterr().out
    assert "relevance=on" in out and "relevance=off" in out
    assert "status agreement: yes" in out


def test_missing_file_is_reported(capsys):
    assert main(["solve", "/nonexistent/file.cid"]) == 2
    assert "error" in capsys.readouterr().err
