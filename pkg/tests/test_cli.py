import hashlib
import json

import pytest

from coxhecke.cli import CACHE_ENV, load_matrix, main
from coxhecke.errors import MatrixError

A2 = "triangle:3,3,3"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def jsonl(text):
    lines = [json.loads(line) for line in text.splitlines()]
    return lines[0]["header"], lines[1:]


def test_profile_affine(capsys):
    code, out, _ = run(capsys, "profile", A2, "--radius", "4")
    assert code == 0
    _, (rec,) = jsonl(out)
    assert rec["a0"] == 3 and len(rec["Lambda_pairs"]) == 3
    assert rec["O_classes"] == [3] and rec["crystallographic"]


def test_check_bound_affine(capsys):
    code, out, _ = run(capsys, "check", A2, "--radius", "12", "--suite", "BOUND_THM_2_1")
    assert code == 0
    _, (rep,) = jsonl(out)
    assert rep["observations"]["max_degree"] == 3 and rep["violations"] == 0


def test_kl_text(capsys):
    code, out, _ = run(capsys, "kl", A2, "-L", "6", "--y", "e", "--w", "s.t.s", "--format", "text")
    assert code == 0
    assert out.splitlines()[-1].endswith("P = 1, mu = 0")


def test_header_echoes_config(capsys):
    _, out, _ = run(capsys, "ball", A2, "-L", "3", "--margin", "2", "--pair-budget", "2", "--threads", "4")
    head, _ = jsonl(out)
    assert head["radius"] == 3 and head["margin"] == 2 and head["pair_budget"] == 2
    assert head["threads"] == 4 and head["deterministic"] is False


def test_ball_round_trip_hash(capsys):
    _, out, _ = run(capsys, "ball", "triangle:3,4,6", "-L", "5")
    head, recs = jsonl(out)
    assert head["elements"] == len(recs)
    h = hashlib.sha256()
    h.update(load_matrix("triangle:3,4,6").content_hash.encode())
    h.update(str(head["radius"]).encode())
    for rec in recs:
        h.update(rec["word"].encode() + b"\n")
    assert h.hexdigest()[:16] == head["ball_hash"]
    assert recs[0] == {"id": 0, "word": "e", "length": 0, "left_descents": [], "right_descents": []}


def test_matrix_document_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"gens": ["a", "b"], "m": [[1, 0], [0, 1]]}))
    code, out, _ = run(capsys, "ball", str(path), "-L", "2", "--format", "text")
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()[1:]] == ["e", "a", "b", "a.b", "b.a"]


def test_bad_matrix_rejected():
    with pytest.raises(MatrixError):
        load_matrix("triangle:3,1,3")


@pytest.mark.parametrize(
    "argv",
    [
        ["profile", A2],
        ["kl", A2, "-L", "3"],
        ["kl", A2, "-L", "3", "--y", "q", "--w", "s"],
        ["check", A2, "-L", "3", "--suite", "NOPE"],
        ["ball", "triangle:3,1,3", "-L", "2"],
        ["ball", A2, "-L", "2", "--format", "dot"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_computation_error_exit_3(capsys):
    code, _, err = run(capsys, "hecke", A2, "-L", "4", "--x", "s.t.r", "--y", "s.t.r")
    assert code == 3
    assert err.startswith("BallExceeded:")
    code, _, err = run(capsys, "lowest", "triangle:3,4,6", "-L", "4")
    assert code == 3 and err.startswith("EmptyLambda:")


def test_check_missing_prerequisite_exit_3(capsys):
    code, _, err = run(capsys, "check", "type_a:3", "-L", "4", "--suite", "BOUND_THM_2_1")
    assert code == 3 and err.startswith("MissingPrerequisite:")


def test_check_all_marks_not_applicable(capsys):
    code, out, _ = run(capsys, "check", "type_a:3", "-L", "4", "--deterministic")
    _, recs = jsonl(out)
    na = {r["suite"] for r in recs if "not_applicable" in r}
    ran = {r["suite"] for r in recs if "checked" in r}
    assert "BOUND_THM_2_1" in na and "WORD_LEMMA_2_2" in ran
    assert code == 0


def test_deterministic_output_is_byte_identical(capsys):
    argv = ["check", A2, "-L", "8", "--deterministic", "--suite", "LOWEST_THM_1_5", "--suite", "PROP_3_1_SUITE"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    head, recs = jsonl(first)
    assert head["threads"] == 1 and all(r["ms"] is None for r in recs)


def test_threads_do_not_change_results(capsys):
    argv = ["check", A2, "-L", "6", "--suite", "COR_2_6", "--suite", "WORD_LEMMA_2_2"]
    _, one, _ = run(capsys, *argv)
    _, many, _ = run(capsys, *argv, "--threads", "3")
    strip = lambda text: [{k: v for k, v in r.items() if k != "ms"} for r in jsonl(text)[1]]
    assert strip(one) == strip(many)


def test_warm_cache_matches_cold(tmp_path, capsys):
    argv = ["kl", A2, "-L", "7", "--all", "--deterministic", "--cache", str(tmp_path)]
    _, cold, _ = run(capsys, *argv)
    assert len(list(tmp_path.glob("kl-*.jsonl"))) == 1
    _, warm, _ = run(capsys, *argv)
    assert cold == warm


def test_cache_env_inspect_and_clear(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    run(capsys, "kl", A2, "-L", "5", "--all")
    run(capsys, "kl", "triangle:3,4,6", "-L", "4", "--all")
    code, out, _ = run(capsys, "cache", "inspect")
    _, recs = jsonl(out)
    assert code == 0 and len(recs) == 2 and all(r["records"] > 0 for r in recs)
    _, out, _ = run(capsys, "cache", "clear", A2)
    _, recs = jsonl(out)
    assert len(recs) == 1 and recs[0]["removed"]
    assert len(list(tmp_path.glob("kl-*.jsonl"))) == 1


def test_cache_without_directory(capsys, monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)
    assert run(capsys, "cache", "inspect")[0] == 2


def test_cells_dot_and_text(capsys):
    code, out, _ = run(capsys, "cells", A2, "-L", "8", "--margin", "4", "--format", "dot")
    assert code == 0 and out.startswith("// ") and "digraph" in out
    _, out, _ = run(capsys, "cells", A2, "-L", "8", "--format", "dot", "--graph")
    assert ':1"' in out


@pytest.mark.parametrize("command", [["afun"], ["lowest"], ["jtable", "--set", "omega"], ["jtable"], ["cells"]])
def test_other_commands_run(capsys, command):
    code, out, _ = run(capsys, command[0], A2, "-L", "7", *command[1:])
    assert code == 0
    head, recs = jsonl(out)
    assert head["command"] == command[0] and recs


def test_hecke_product(capsys):
    code, out, _ = run(capsys, "hecke", A2, "-L", "6", "--x", "s", "--y", "s")
    assert code == 0
    _, recs = jsonl(out)
    assert {r["z"] for r in recs} == {"e", "s"}


def test_suite_failure_exit_1(capsys):
    # margin 5 at radius 6 certifies only lengths <= 1, so the third block is never seen
    code, out, _ = run(capsys, "check", A2, "-L", "6", "--margin", "5", "--suite", "CELL_COUNT_4_1")
    assert code == 1
    _, (rep,) = jsonl(out)
    assert rep["violations"] == 1 and rep["witnesses"][0]["case"] == "two_sided_count"


def test_probe_radii_option(capsys):
    code, out, _ = run(capsys, "check", A2, "-L", "9", "--suite", "PROP_3_2_PROBE", "--radii", "7,9")
    assert code == 0
    assert jsonl(out)[1][0]["params"]["radii"] == [7, 9]
