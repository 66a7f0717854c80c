"""
Load and validate config from YAML. Supports env overrides for the computation knobs.
"""

import copy
import os
from pathlib import Path
from typing import Any

import yaml

from .linalg import UnsupportedFieldError, parse_field

# Env keys for overrides
ENV_CUTOFF = "STRATHOM_CUTOFF"
ENV_FIELD = "STRATHOM_FIELD"
ENV_SEED = "STRATHOM_SEED"
ENV_COLOR = "STRATHOM_COLOR"

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "config.yaml"

DEFAULTS: dict[str, Any] = {
    "compute": {"field": "q", "cutoff": 16, "seed": 0, "max_paths": 5000, "workers": 1},
    "iso": {"trials": 32},
    "corpus": {"dir": "corpus", "manifest": "expected.yaml", "workers": 2, "random_instances": 25},
    "report": {"format": "md", "timing": False},
}


def default_config() -> dict[str, Any]:
    c = copy.deepcopy(DEFAULTS)
    _apply_env(c)
    validate_config(c)
    return c


def load_config(path: str | Path) -> dict[str, Any]:
    """Load config from YAML file, fill missing keys from DEFAULTS, apply env overrides."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")

    with open(path, encoding="utf-8") as f:
        raw = yaml.safe_load(f)
    if not raw:
        raise ValueError("Config file is empty")
    if not isinstance(raw, dict):
        raise ValueError("Config file must hold a mapping")

    merged = copy.deepcopy(DEFAULTS)
    for section, values in raw.items():
        if section not in merged:
            raise ValueError(f"config has unknown section: {section}")
        if not isinstance(values, dict):
            raise ValueError(f"config.{section} must be a mapping")
        merged[section].update(values)

    _apply_env(merged)
    validate_config(merged)
    return merged


def _apply_env(c: dict[str, Any]) -> None:
    for env, key in ((ENV_CUTOFF, "cutoff"), (ENV_SEED, "seed")):
        value = os.environ.get(env)
        if value:
            try:
                c["compute"][key] = int(value)
            except ValueError as e:
                raise ValueError(f"{env} must be an int, got {value!r}") from e
    if os.environ.get(ENV_FIELD):
        c["compute"]["field"] = os.environ[ENV_FIELD]


def color_enabled() -> bool:
    value = os.environ.get(ENV_COLOR, "")
    return bool(value) and value != "0"


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate_config(c: dict[str, Any]) -> None:
    """Validate sections and types. Raises ValueError on failure."""
    for key in DEFAULTS:
        if key not in c:
            raise ValueError(f"config missing required section: {key}")

    comp = c["compute"]
    try:
        parse_field(str(comp.get("field")))
    except UnsupportedFieldError as e:
        raise ValueError(f"config.compute.field must be q or fp:P ({e})") from e
    if not _is_int(comp.get("cutoff")) or comp["cutoff"] < 1:
        raise ValueError("config.compute.cutoff must be an int >= 1")
    if not _is_int(comp.get("seed")):
        raise ValueError("config.compute.seed must be an int")
    if not _is_int(comp.get("max_paths")) or comp["max_paths"] < 1:
        raise ValueError("config.compute.max_paths must be a positive int")
    if not _is_int(comp.get("workers")) or comp["workers"] < 1:
        raise ValueError("config.compute.workers must be a positive int")

    if not _is_int(c["iso"].get("trials")) or c["iso"]["trials"] < 1:
        raise ValueError("config.iso.trials must be a positive int")

    corpus = c["corpus"]
    for k in ("dir", "manifest"):
        if not corpus.get(k):
            raise ValueError(f"config.corpus.{k} is required")
    if not _is_int(corpus.get("workers")) or corpus["workers"] < 1:
        raise ValueError("config.corpus.workers must be a positive int")
    if not _is_int(corpus.get("random_instances")) or corpus["random_instances"] < 0:
        raise ValueError("config.corpus.random_instances must be an int >= 0")

    rep = c["report"]
    if rep.get("format") not in ("json", "md"):
        raise ValueError("config.report.format must be 'json' or 'md'")
    if not isinstance(rep.get("timing"), bool):
        raise ValueError("config.report.timing must be bool")
