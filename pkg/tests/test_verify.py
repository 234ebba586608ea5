import json

import pytest

from coxhecke import CoxeterMatrix
from coxhecke.errors import MissingPrerequisite, UnknownSuite
from coxhecke.verify import SUITES, SuiteReport, Workspace, _record, replay, run_suite, suite_ids


def test_mixed_descent_words_affine(workspace):
    rep = run_suite("WORD_LEMMA_2_2", workspace("A2~", 10))
    assert rep.checked > 0 and rep.violations == 0 and rep.passed


def test_bound_all_infinite(workspace):
    rep = run_suite("BOUND_THM_2_1", workspace("inf3", 8, margin=2))
    assert rep.violations == 0
    assert rep.observations["max_degree"] == 1 == rep.observations["a0"]


def test_cell_count_affine(workspace):
    rep = run_suite("CELL_COUNT_4_1", workspace("A2~", 12, margin=4))
    assert rep.passed
    assert rep.observations["certified_blocks"] == 3


def test_bound_with_radius_budget_skips_nothing(workspace):
    ws = workspace("A2~", 10, pair_budget=10)
    rep = run_suite("BOUND_THM_2_1", ws)
    assert rep.skipped == 0 and rep.checked > 0


def test_smaller_budget_means_fewer_checks(workspace):
    full = run_suite("BOUND_THM_2_1", workspace("A2~", 8))
    small = run_suite("BOUND_THM_2_1", workspace("A2~", 8, pair_budget=6))
    assert small.checked < full.checked


def _canonical(rep):
    return json.dumps(rep.to_dict(), sort_keys=True)


@pytest.mark.parametrize("suite", ["F_IDENTITIES", "LOWEST_THM_1_5", "PROP_3_1_SUITE", "GAMMA_FACTS"])
def test_suites_are_deterministic(suite):
    m = CoxeterMatrix.triangle(3, 3, 3)
    one = run_suite(suite, Workspace(m, 8), deterministic=True)
    two = run_suite(suite, Workspace(m, 8), deterministic=True)
    assert _canonical(one) == _canonical(two)
    assert one.ms is None


def test_wall_time_recorded_outside_deterministic_mode(workspace):
    assert run_suite("WORD_LEMMA_2_2", workspace("A2~", 6)).ms is not None


def test_replay_reproduces_violation_detail(workspace):
    ws = workspace("A2~", 8)
    b = ws.ball
    rep = SuiteReport("demo", "THEOREM", {})
    _record(rep, ws, "mu_equals_one", (0, b.parse_word("s.t.s")))
    assert rep.violations == 1
    witness = json.loads(json.dumps(rep.witnesses[0]))
    assert witness["args"] == ["e", "s.t.s"]
    assert replay(ws, witness) == rep.witnesses[0]["detail"] == {"mu": 0}


def test_replay_of_true_statement_returns_none(workspace):
    ws = workspace("A2~", 8)
    assert replay(ws, {"case": "mu_equals_one", "args": ["s", "s.t"]}) is None
    assert replay(ws, {"case": "no_mixed_descents", "args": ["s.t", {"gen": "r"}, {"gen": "s"}, {"gen": "t"}]}) is None
    with pytest.raises(UnknownSuite):
        replay(ws, {"case": "nope", "args": []})


def test_unknown_suite(workspace):
    with pytest.raises(UnknownSuite):
        run_suite("NO_SUCH_SUITE", workspace("A2~", 4))


def test_non_complete_graph_needs_prerequisite():
    ws = Workspace(CoxeterMatrix.type_a(3), 6)
    with pytest.raises(MissingPrerequisite):
        run_suite("BOUND_THM_2_1", ws)
    assert run_suite("WORD_LEMMA_2_2", ws).passed


def test_probe_kind_reports(workspace):
    rep = run_suite("PROP_3_2_PROBE", workspace("A2~", 9), radii=(7, 9))
    assert rep.kind == "PROBE" and rep.passed
    assert rep.params["radii"] == [7, 9]


def test_catalog_complete():
    expected = {
        "F_IDENTITIES", "DESCENT_PARABOLIC", "WORD_LEMMA_2_2", "WORD_LEMMA_2_3", "WORD_LEMMA_2_4",
        "LENGTH_LEMMA_2_5", "COR_2_6", "DEG_LEMMA_2_7", "DEG_LEMMA_2_8", "BOUND_THM_2_1",
        "LOWEST_THM_1_5", "COR_1_6", "PROP_3_1_SUITE", "PROP_3_2_PROBE", "CELL_COUNT_4_1",
        "CELL_COUNT_4_5", "MU_LEMMA_4_3", "COR_4_4", "SECTION_5_PROBES",
    }
    assert expected <= set(suite_ids())
    assert {k for k, v in SUITES.items() if v.kind == "PROBE"} == {"PROP_3_2_PROBE", "SECTION_5_PROBES"}


def test_rank2_confinement_negative_control(workspace):
    rep = run_suite("WORD_LEMMA_2_3", workspace("A2~", 8))
    assert rep.passed
    assert rep.observations["a3_control_counterexamples"] > 0
    assert rep.observations["a3_control_example"]


def test_parabolic_extension_reports_hypothesis_count(workspace):
    rep = run_suite("WORD_LEMMA_2_4", workspace("334", 8))
    assert rep.passed and "hypothesis_instances" in rep.observations


def test_summary_line_shape(workspace):
    line = run_suite("COR_2_6", workspace("A2~", 6)).summary_line()
    assert line.startswith("PASS COR_2_6 [THEOREM] checked=")
