import os
from pathlib import Path

import pytest

import fmdiag

DATA = Path(os.environ.get("FMDIAG_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def load_survey():
    model = fmdiag.parse_model((DATA / "survey.fm").read_text())
    positives, negatives = fmdiag.parse_test_suite((DATA / "paper.tc").read_text(), model)
    return model, positives, negatives


def test_survey_diagnosis():
    session, result = fmdiag.diagnose_files(DATA / "survey.fm", DATA / "paper.tc")
    assert session.filtered == ["t4"]
    assert session.background == ["c0"]
    assert result.gamma == ["c2", "c3", "c4", "c5", "c6"]
    assert result.delta == ["c1", "c7", "c8"]
    assert result.nodes == 11
    assert result.solver_calls == 21


def test_trace_matches_golden():
    model, positives, negatives = load_survey()
    session = fmdiag.preprocess(fmdiag.encode(model), positives, negatives)
    result = fmdiag.diagnose(session, trace=True)
    assert len(result.trace) == 11
    assert fmdiag.format_report(session, result) == (DATA / "golden" / "survey_trace.txt").read_text()


def test_oracle_and_minimality():
    model, positives, _ = load_survey()
    session = fmdiag.preprocess(fmdiag.encode(model), positives)
    assert fmdiag.oracle_all_minimal_diagnoses(session) == [["c1", "c2"], ["c1", "c7", "c8"]]
    assert fmdiag.verify_minimal(["c1", "c2"], session)
    assert not fmdiag.verify_minimal(["c1", "c2", "c7"], session)


def test_consideration_set():
    model, positives, _ = load_survey()
    session = fmdiag.preprocess(fmdiag.encode(model), positives, consider=["c7", "c1", "c8"])
    assert fmdiag.diagnose(session).delta == ["c7", "c1", "c8"]
    with pytest.raises(fmdiag.InvalidConsiderationSet):
        fmdiag.preprocess(fmdiag.encode(model), positives, consider=["c0"])


def test_no_diagnosis_possible_is_fmdiag_error():
    model, _, _ = load_survey()
    positives, _ = fmdiag.parse_test_suite("positive survey=f\n", model)
    with pytest.raises(fmdiag.NoDiagnosisPossible):
        fmdiag.preprocess(fmdiag.encode(model), positives)
    assert issubclass(fmdiag.NoDiagnosisPossible, fmdiag.FmdiagError)


def test_parse_error():
    with pytest.raises(fmdiag.ParseError):
        fmdiag.parse_model("feature a root\nmandatory a b\n")


def test_analysis():
    model, _, _ = load_survey()
    cs = fmdiag.encode(model)
    report = fmdiag.analyze(cs, model)
    assert not report.void
    assert report.dead_features == ["nolicense"]
    assert "statistics" in report.false_optionals
    repaired = fmdiag.analyze(cs.without(["c1", "c7", "c8"]), model)
    assert repaired.dead_features == []
    assert repaired.false_optionals == []


def test_encoding_and_solver():
    model, _, _ = load_survey()
    cs = fmdiag.encode(model)
    assert len(cs) == 9
    assert cs.labels[0] == "c0"
    assert fmdiag.write_dimacs(cs).startswith("p cnf 9 17\n")
    assert fmdiag.solve(2, [[1], [-1, 2]]) == [True, True]
    assert fmdiag.solve(1, [[1], [-1]]) is None


def test_synth_round_trip():
    model, tests = fmdiag.synth(10, seed=1, num_tests=10)
    assert model.features == ["f1", "f2", "f3", "f4", "f5"]
    assert len(model.relationships) + len(model.cross_tree) == 10
    assert fmdiag.parse_model(fmdiag.write_model(model)) == model
    session = fmdiag.preprocess(fmdiag.encode(model), tests)
    assert len(session.active) == 3


def test_generated_tests():
    model, _, _ = load_survey()
    tests = fmdiag.generate_dead_feature_tests(model)
    assert [t.label for t in tests][:2] == ["gen_dead_payment", "gen_dead_license"]
    session = fmdiag.preprocess(fmdiag.encode(model), tests)
    assert session.active == ["gen_dead_nolicense"]


def test_cli_in_process():
    code, out, err = fmdiag.cli(["diagnose", "--model", str(DATA / "survey.fm"), "--tests", str(DATA / "paper.tc")])
    assert code == 0, err
    assert "delta: c1 c7 c8\n" in out
    code, _, err = fmdiag.cli(["diagnose"])
    assert code == 2
    assert err
