"""Tests for the operation dispatcher over shipped corpus documents."""

from pathlib import Path

import pytest

from src.inputs import InputError, build, load_input
from src.pipeline import OPS, Settings, run_pipeline, run_step
from src.report import EXIT_NEGATIVE, EXIT_OK

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(scope="module")
def counterexample():
    return build(load_input(CORPUS / "counterexample.alg"))


@pytest.fixture(scope="module")
def kronecker_homs():
    return build(load_input(CORPUS / "kronecker.hom"))


@pytest.fixture
def settings():
    return Settings()


def test_every_input_op_has_a_handler():
    from src.inputs import PIPELINE_OPS

    assert set(PIPELINE_OPS) == set(OPS)


def test_settings_from_config():
    cfg = {
        "compute": {"field": "fp:5", "cutoff": 4, "seed": 9, "max_paths": 10},
        "iso": {"trials": 3},
        "report": {"timing": True},
    }
    s = Settings.from_config(cfg)
    assert (s.field, s.cutoff, s.seed, s.trials, s.max_paths, s.timing) == ("fp:5", 4, 9, 3, 10, True)
    assert "timing" not in s.to_dict()


def test_alg_info(counterexample, settings):
    out = run_step(counterexample, {"op": "alg-info", "algebra": "A"}, settings)
    assert out["verdict"] == "info"
    assert out["dim"] == 9
    assert out["dim rad"] == 6
    assert out["gldim"] == 4
    assert out["cartan"][0][0] == 1
    assert out["simples pd"] == {"S1": 2, "S2": 3, "S3": 4}


def test_alg_info_with_small_cutoff_is_inconclusive(counterexample):
    out = run_step(counterexample, {"op": "alg-info", "algebra": "A"}, Settings(cutoff=2))
    assert out["verdict"] == "inconclusive"
    assert str(out["gldim"]).startswith(">=")


def test_resolve_rows(counterexample, settings):
    out = run_step(counterexample, {"op": "resolve", "module": "S1"}, settings)
    assert out["pd"] == 2
    assert [row["summands"] for row in out["terms"]] == ["P1", "P3", "P2"]


def test_ext_up_to_pd(counterexample, settings):
    out = run_step(counterexample, {"op": "ext", "module": "S1", "other": "S2"}, settings)
    assert out["dims"] == {"0": 0, "1": 0, "2": 1}
    out = run_step(counterexample, {"op": "ext", "module": "S1", "other": "S3", "degree": 1}, settings)
    assert out["dims"] == {"1": 1}


def test_ext_rejects_negative_degree(counterexample, settings):
    with pytest.raises(InputError, match="degree"):
        run_step(counterexample, {"op": "ext", "module": "S1", "other": "S2", "degree": -1}, settings)


def test_tor_along_quotient(kronecker_homs, settings):
    step = {"op": "tor", "module": "P1", "hom": "q", "degree": 0}
    out = run_step(kronecker_homs, step, settings)
    assert out["verdict"] == "info"
    assert "Q via q" in out["subject"]


def test_check_ideal_step(counterexample, settings):
    step = {"op": "check-ideal", "algebra": "A", "e": "e2 + e3", "corner_model": "K"}
    out = run_step(counterexample, step, settings)
    assert out["verdict"] == "positive"
    assert out["witnesses"]["corner matches"] == "K"
    assert out["witnesses"]["A/AeA exceptional"] is True
    assert out["witnesses"]["gldim A"] == 4


def test_check_ideal_precondition_is_input_error(counterexample, settings):
    with pytest.raises(InputError, match="not idempotent"):
        run_step(counterexample, {"op": "check-ideal", "algebra": "A", "e": "alpha"}, settings)


def test_check_ideal_unreadable_element(counterexample, settings):
    with pytest.raises(InputError, match="cannot read"):
        run_step(counterexample, {"op": "check-ideal", "algebra": "A", "e": "omega"}, settings)


def test_failed_hypothesis_is_negative_result(kronecker_homs, settings):
    out = run_step(kronecker_homs, {"op": "construct-two", "hom": "id"}, settings)
    assert out["verdict"] == "negative"
    assert out["error"] == "DegenerateConeError"
    assert out["subject"] == "id"


def test_check_surjective_reports_kernel(kronecker_homs, settings):
    out = run_step(kronecker_homs, {"op": "check-surjective", "hom": "q"}, settings)
    assert out["verdict"] == "negative"
    assert out["flags"]["is_surjective"] is True
    assert out["flags"]["kernel_idempotent"] is False
    assert out["witnesses"]["dim Tor_1(B,B)"] == 1


def test_check_surjective_finds_generator(settings):
    ws = build(load_input(CORPUS / "m2xm3.hom"))
    out = run_step(ws, {"op": "check-surjective", "hom": "proj"}, settings)
    assert out["verdict"] == "positive"
    assert out["idempotent_generator"] == "E11|2 + E22|2 + E33|2"
    assert out["flags"]["kernel_stratifying"] is True


def test_check_epi_on_diagonal(settings):
    ws = build(load_input(CORPUS / "diag.hom"))
    out = run_step(ws, {"op": "check-epi", "hom": "diag"}, settings)
    assert out["verdict"] == "negative"
    assert out["witnesses"]["dim Coker(f) (x)_A B"] == 2


def test_check_tilting_step(settings):
    ws = build(load_input(CORPUS / "kronecker.alg"))
    out = run_step(ws, {"op": "check-tilting", "module": "P1", "other": "P2"}, settings)
    assert out["verdict"] == "positive"
    assert out["T0 multiplicities"] == [3, 0]
    assert out["T1 multiplicities"] == [0, 1]


def test_regular_kronecker_module_has_self_extensions(settings):
    ws = build(load_input(CORPUS / "kronecker.alg"))
    out = run_step(ws, {"op": "ext", "module": "R", "other": "R"}, settings)
    assert out["dims"]["0"] == 1
    assert out["dims"]["1"] == 1


def test_derived_hom_of_cone(kronecker_homs, settings):
    out = run_step(kronecker_homs, {"op": "derived-hom", "hom": "lam1", "degree": 0}, settings)
    assert out["verdict"] == "info"
    assert out["dims"]["0"] >= 1


def test_derived_exceptional_step(counterexample, settings):
    out = run_step(counterexample, {"op": "derived-exceptional", "module": "S1"}, settings)
    assert out["verdict"] == "positive"
    assert out["offending"] == []


def test_iso_step(settings):
    ws = build(load_input(CORPUS / "ex43.hom"))
    out = run_step(ws, {"op": "iso", "module": "BA", "other": "PP"}, settings)
    assert out["verdict"] == "positive"


def test_missing_argument(counterexample, settings):
    with pytest.raises(InputError, match="needs 'module'"):
        run_step(counterexample, {"op": "resolve"}, settings)


def test_unknown_op(counterexample, settings):
    with pytest.raises(InputError, match="unknown op"):
        run_step(counterexample, {"op": "dance"}, settings)


def test_empty_pipeline(counterexample, settings):
    with pytest.raises(InputError, match="empty"):
        run_pipeline(counterexample, [], settings)


def test_run_pipeline_keeps_step_order(counterexample):
    steps = [
        {"op": "resolve", "module": "S1"},
        {"op": "resolve", "module": "S2"},
        {"op": "ext", "module": "S1", "other": "S3", "degree": 1},
    ]
    report = run_pipeline(counterexample, steps, Settings(timing=True), command=["run"], workers=2)
    assert [r["subject"] for r in report.results] == ["S1", "S2", "Ext(S1, S3)"]
    assert report.exit_code() == EXIT_OK
    assert set(report.timing_ms) == {"1. resolve", "2. resolve", "3. ext"}


def test_run_pipeline_negative_exit(kronecker_homs, settings):
    report = run_pipeline(kronecker_homs, [{"op": "construct-two", "hom": "id"}], settings)
    assert report.exit_code() == EXIT_NEGATIVE
    assert report.timing_ms is None
