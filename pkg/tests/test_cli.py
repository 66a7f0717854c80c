"""Tests for the command-line entry point."""

import json
from pathlib import Path

import pytest
import yaml

from src.cli import build_parser, main
from src.config import ENV_COLOR, ENV_CUTOFF, ENV_FIELD, ENV_SEED
from src.report import EXIT_INPUT, EXIT_INTERNAL, EXIT_NEGATIVE, EXIT_OK
from src.strat import ConsistencyError

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for key in (ENV_CUTOFF, ENV_FIELD, ENV_SEED, ENV_COLOR):
        monkeypatch.delenv(key, raising=False)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_check_ideal_requires_e():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["strat", "check-ideal", "x.alg"])


def test_run_file_pipeline_json(capsys):
    code = main(["run", str(CORPUS / "diag.hom"), "--format", "json"])
    data = _json(capsys)
    assert code == EXIT_NEGATIVE
    assert data["exit_code"] == EXIT_NEGATIVE
    assert data["results"][0]["op"] == "check-epi"
    assert data["command"][0] == "run"


def test_single_hom_is_picked_up(capsys):
    code = main(["hom", "check-homepi", str(CORPUS / "ex43.hom"), "--format", "json"])
    data = _json(capsys)
    assert code == EXIT_OK
    assert data["results"][0]["subject"] == "lam"
    assert data["results"][0]["flags"]["is_homological_epi"] is True


def test_ext_single_degree(capsys):
    argv = ["mod", "ext", str(CORPUS / "counterexample.alg"), "--module", "S1", "--other", "S2",
            "--degree", "2", "--format", "json"]
    assert main(argv) == EXIT_OK
    assert _json(capsys)["results"][0]["dims"] == {"2": 1}


def test_check_strat_markdown(capsys):
    argv = ["check-strat", str(CORPUS / "counterexample.alg"), "--algebra", "A", "--e", "e2 + e3",
            "--corner-model", "K"]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out
    assert "# strathom report" in out
    assert "verdict: **positive**" in out


def test_field_flag_overrides_document(capsys):
    argv = ["alg", "info", str(CORPUS / "counterexample.alg"), "--algebra", "A", "--field", "fp:5",
            "--format", "json"]
    assert main(argv) == EXIT_OK
    data = _json(capsys)
    assert data["settings"]["field"] == "fp:5"
    assert data["results"][0]["field"] == "fp:5"


def test_field_from_env(capsys, monkeypatch):
    monkeypatch.setenv(ENV_FIELD, "fp:7")
    argv = ["alg", "info", str(CORPUS / "counterexample.alg"), "--algebra", "A", "--format", "json"]
    assert main(argv) == EXIT_OK
    assert _json(capsys)["settings"]["field"] == "fp:7"


def test_timing_flag(capsys):
    argv = ["mod", "resolve", str(CORPUS / "counterexample.alg"), "--module", "S1", "--timing",
            "--format", "json"]
    assert main(argv) == EXIT_OK
    assert "1. resolve" in _json(capsys)["timing_ms"]


def test_missing_input_file():
    assert main(["run", "no/such/file.alg"]) == EXIT_INPUT


def test_bad_cutoff():
    assert main(["run", str(CORPUS / "diag.hom"), "--cutoff", "0"]) == EXIT_INPUT


def test_ambiguous_hom_is_input_error():
    assert main(["hom", "check-epi", str(CORPUS / "kronecker.hom")]) == EXIT_INPUT


def test_precondition_is_input_error():
    argv = ["strat", "check-ideal", str(CORPUS / "counterexample.alg"), "--algebra", "A", "--e", "alpha"]
    assert main(argv) == EXIT_INPUT


def test_failed_construction_exit_code(capsys):
    argv = ["construct-two", str(CORPUS / "kronecker.hom"), "--hom", "id", "--format", "json"]
    assert main(argv) == EXIT_NEGATIVE
    assert _json(capsys)["results"][0]["error"] == "DegenerateConeError"


def test_corpus_run_named_entry(capsys):
    argv = ["corpus", "run", "diagonal", "--instances", "0", "--format", "json"]
    assert main(argv) == EXIT_OK
    data = _json(capsys)
    assert [r["subject"] for r in data["results"]] == ["diagonal"]


def test_corpus_unknown_entry():
    assert main(["corpus", "run", "nope"]) == EXIT_INPUT


def test_json_report_is_reproducible(capsys):
    argv = ["run", str(CORPUS / "counterexample.alg"), "--format", "json"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    assert "timing_ms" not in json.loads(first)


def test_internal_error_has_its_own_exit_code(monkeypatch):
    import src.pipeline

    def broken(*args, **kwargs):
        raise ConsistencyError("Ker(mu) and Hom(B,A) disagree")

    monkeypatch.setattr(src.pipeline, "run_pipeline", broken)
    assert main(["run", str(CORPUS / "diag.hom")]) == EXIT_INTERNAL


def test_pipeline_workers_from_config(tmp_path, capsys, monkeypatch):
    import src.pipeline

    seen = []
    original = src.pipeline.run_pipeline

    def spy(*args, **kwargs):
        seen.append(kwargs.get("workers"))
        return original(*args, **kwargs)

    monkeypatch.setattr(src.pipeline, "run_pipeline", spy)
    cfg = tmp_path / "config.yaml"
    cfg.write_text(yaml.safe_dump({"compute": {"workers": 3}}), encoding="utf-8")
    argv = ["run", str(CORPUS / "counterexample.alg"), "--format", "json"]
    assert main(argv + ["--config", str(cfg)]) == EXIT_OK
    parallel = _json(capsys)["results"]
    assert main(argv) == EXIT_OK
    sequential = _json(capsys)["results"]
    assert seen == [3, 1]
    assert parallel == sequential
