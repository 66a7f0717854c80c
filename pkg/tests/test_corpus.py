"""Tests for the example corpus: manifest loading, lookups and full runs."""

import copy
import random
from pathlib import Path

import pytest
import yaml

from src.config import DEFAULTS
from src.corpus import (
    GENERATORS,
    CorpusEntry,
    load_manifest,
    lookup,
    random_acyclic_quiver,
    random_monomial_relations,
    run_corpus,
    run_entry,
)
from src.inputs import InputError
from src.linalg import parse_field
from src.pipeline import Settings

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def _config(instances: int = 3, workers: int = 2) -> dict:
    c = copy.deepcopy(DEFAULTS)
    c["corpus"]["dir"] = str(CORPUS)
    c["corpus"]["random_instances"] = instances
    c["corpus"]["workers"] = workers
    return c


def _manifest(tmp_path, data) -> Path:
    path = tmp_path / "expected.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


def test_shipped_manifest_loads():
    entries = load_manifest(CORPUS / "expected.yaml")
    names = [e.name for e in entries]
    assert "counterexample-algebra" in names
    assert len(names) == len(set(names))
    for e in entries:
        assert (e.input is None) != (e.generator is None)
        if e.input:
            assert (CORPUS / e.input).exists()


def test_manifest_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_manifest(tmp_path / "nope.yaml")


@pytest.mark.parametrize(
    "data, match",
    [
        ({"entries": "x"}, "list under 'entries'"),
        ({"entries": [{"input": "a.alg"}]}, "needs a name"),
        ({"entries": [{"name": "a", "input": "a.alg"}, {"name": "a", "input": "b.alg"}]}, "duplicate"),
        ({"entries": [{"name": "a"}]}, "exactly one"),
        ({"entries": [{"name": "a", "input": "a.alg", "generator": "ext-arrows"}]}, "exactly one"),
        ({"entries": [{"name": "a", "generator": "nonsense"}]}, "unknown generator"),
    ],
)
def test_manifest_errors(tmp_path, data, match):
    with pytest.raises(ValueError, match=match):
        load_manifest(_manifest(tmp_path, data))


def test_lookup_follows_dicts_and_lists():
    result = {"witnesses": {"dim AeA": 8}, "terms": [{"summands": "P1"}]}
    assert lookup(result, "witnesses.dim AeA") == 8
    assert lookup(result, "terms.0.summands") == "P1"
    with pytest.raises(KeyError):
        lookup(result, "flags.is_ring_epi")


def test_entry_reports_failed_expectation(tmp_path):
    src = (CORPUS / "diag.hom").read_text(encoding="utf-8")
    (tmp_path / "diag.hom").write_text(src, encoding="utf-8")
    entry = CorpusEntry(
        "diag-wrong",
        input="diag.hom",
        steps=[{"op": "check-epi", "hom": "diag", "expect": {"verdict": "positive", "witnesses.nothing": 1}}],
    )
    out = run_entry(entry, tmp_path, Settings(), 0)
    assert out["verdict"] == "negative"
    assert out["failed"] == 2
    assert out["checks"][1]["got"] == "<missing>"


def test_entry_with_missing_file_is_negative(tmp_path):
    out = run_entry(CorpusEntry("gone", input="gone.alg"), tmp_path, Settings(), 0)
    assert out["verdict"] == "negative"
    assert "not found" in out["error"]


def test_file_entry_uses_settings_field():
    entry = CorpusEntry(
        "over-f5",
        input="counterexample.alg",
        steps=[{"op": "alg-info", "algebra": "A", "expect": {"field": "fp:5", "dim": 9}}],
    )
    out = run_entry(entry, CORPUS, Settings(field="fp:5"), 0)
    assert out["verdict"] == "positive", out["checks"]


def test_file_entry_uses_settings_max_paths():
    entry = CorpusEntry("capped", input="counterexample.alg", steps=[{"op": "alg-info", "algebra": "A"}])
    out = run_entry(entry, CORPUS, Settings(max_paths=3), 0)
    assert out["verdict"] == "negative"
    assert "more than 3 nonzero paths" in out["error"]


def test_random_quivers_are_acyclic():
    rng = random.Random(7)
    for _ in range(20):
        q = random_monomial_relations(rng, random_acyclic_quiver(rng))
        assert 2 <= len(q.vertices) <= 4
        for a in q.arrows:
            assert a.source != a.target
        for b, a in q.relations:
            assert q.arrow(a).target == q.arrow(b).source


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_generators_find_no_failures(name):
    F = parse_field("q")
    for k in range(5):
        assert GENERATORS[name](random.Random(f"{name}:{k}"), F, 16) == []


def test_run_named_entries():
    report = run_corpus(_config(), Settings(), names=["diagonal", "product-projection"])
    assert [r["subject"] for r in report.results] == ["diagonal", "product-projection"]
    assert all(r["verdict"] == "positive" for r in report.results)
    assert report.exit_code() == 0


def test_unknown_entry_name():
    with pytest.raises(InputError, match="unknown corpus entries"):
        run_corpus(_config(), Settings(), names=["nope"])


def test_relative_corpus_dir_uses_root():
    c = _config()
    c["corpus"]["dir"] = "corpus"
    report = run_corpus(c, Settings(), names=["diagonal"], root=CORPUS.parent)
    assert report.results[0]["verdict"] == "positive"


@pytest.mark.slow
def test_full_corpus_passes():
    report = run_corpus(_config(instances=3), Settings())
    failed = {r["subject"]: r for r in report.results if r["verdict"] != "positive"}
    assert not failed, failed
    assert report.settings["random_instances"] == 3
