"""Tests for config loading and validation."""

import copy
import os
import tempfile

import pytest
import yaml

from src.config import (
    DEFAULT_CONFIG_PATH,
    DEFAULTS,
    ENV_COLOR,
    ENV_CUTOFF,
    ENV_FIELD,
    ENV_SEED,
    color_enabled,
    default_config,
    load_config,
    validate_config,
)


def _write_yaml(data) -> str:
    fd, path = tempfile.mkstemp(suffix=".yaml")
    with os.fdopen(fd, "w") as f:
        yaml.safe_dump(data, f, default_flow_style=False)
    return path


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for key in (ENV_CUTOFF, ENV_FIELD, ENV_SEED, ENV_COLOR):
        monkeypatch.delenv(key, raising=False)


def test_validate_config_defaults():
    c = copy.deepcopy(DEFAULTS)
    validate_config(c)
    assert c["compute"]["cutoff"] == 16


def test_shipped_config_is_valid():
    cfg = load_config(DEFAULT_CONFIG_PATH)
    assert cfg["compute"]["field"] == "q"
    assert cfg["report"]["timing"] is False


def test_validate_config_bad_field():
    c = copy.deepcopy(DEFAULTS)
    c["compute"]["field"] = "fp:9"
    with pytest.raises(ValueError, match="q or fp:P"):
        validate_config(c)


@pytest.mark.parametrize(
    "section, key, value, match",
    [
        ("compute", "cutoff", 0, "cutoff"),
        ("compute", "seed", "x", "seed"),
        ("compute", "max_paths", True, "max_paths"),
        ("compute", "workers", 0, "compute.workers"),
        ("iso", "trials", 0, "trials"),
        ("corpus", "workers", 0, "workers"),
        ("corpus", "random_instances", -1, "random_instances"),
        ("corpus", "dir", "", "corpus.dir"),
        ("report", "format", "html", "json"),
        ("report", "timing", "yes", "timing"),
    ],
)
def test_validate_config_rejects(section, key, value, match):
    c = copy.deepcopy(DEFAULTS)
    c[section][key] = value
    with pytest.raises(ValueError, match=match):
        validate_config(c)


def test_validate_config_missing_section():
    c = copy.deepcopy(DEFAULTS)
    del c["iso"]
    with pytest.raises(ValueError, match="iso"):
        validate_config(c)


def test_load_config_missing_file():
    with pytest.raises(FileNotFoundError):
        load_config("/nonexistent/config.yaml")


def test_load_config_fills_defaults():
    path = _write_yaml({"compute": {"cutoff": 8}})
    try:
        cfg = load_config(path)
        assert cfg["compute"]["cutoff"] == 8
        assert cfg["compute"]["field"] == "q"
        assert cfg["iso"]["trials"] == 32
    finally:
        os.unlink(path)


def test_load_config_unknown_section():
    path = _write_yaml({"plots": {"width": 80}})
    try:
        with pytest.raises(ValueError, match="unknown section"):
            load_config(path)
    finally:
        os.unlink(path)


def test_load_config_empty_file():
    path = _write_yaml(None)
    try:
        with pytest.raises(ValueError, match="empty"):
            load_config(path)
    finally:
        os.unlink(path)


def test_load_config_env_override(monkeypatch):
    monkeypatch.setenv(ENV_CUTOFF, "5")
    monkeypatch.setenv(ENV_FIELD, "fp:7")
    monkeypatch.setenv(ENV_SEED, "11")
    path = _write_yaml({"compute": {"cutoff": 8, "field": "q"}})
    try:
        cfg = load_config(path)
        assert cfg["compute"]["cutoff"] == 5
        assert cfg["compute"]["field"] == "fp:7"
        assert cfg["compute"]["seed"] == 11
    finally:
        os.unlink(path)


def test_env_override_must_be_int(monkeypatch):
    monkeypatch.setenv(ENV_CUTOFF, "many")
    with pytest.raises(ValueError, match=ENV_CUTOFF):
        default_config()


def test_color_flag(monkeypatch):
    assert not color_enabled()
    monkeypatch.setenv(ENV_COLOR, "0")
    assert not color_enabled()
    monkeypatch.setenv(ENV_COLOR, "1")
    assert color_enabled()
