"""
Reports: one entry per executed operation, rendered as JSON or markdown.

Both renderings are produced from the same dictionary, so they carry the
same numbers. Exit codes: 0 all positive, 1 some negative, 2 some
inconclusive, 3 input errors (raised before a report exists).
"""

import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4

_COLORS = {"positive": "\033[32m", "negative": "\033[31m", "inconclusive": "\033[33m"}
_RESET = "\033[0m"


@dataclass
class Report:
    command: list[str]
    settings: dict[str, Any]
    results: list[dict[str, Any]] = field(default_factory=list)
    timing_ms: dict[str, float] | None = None

    def add(self, result: dict[str, Any]) -> None:
        self.results.append(result)

    def exit_code(self) -> int:
        verdicts = [r.get("verdict") for r in self.results]
        if "negative" in verdicts:
            return EXIT_NEGATIVE
        if "inconclusive" in verdicts:
            return EXIT_INCONCLUSIVE
        return EXIT_OK

    def to_dict(self) -> dict[str, Any]:
        out = {
            "schema": SCHEMA_VERSION,
            "command": list(self.command),
            "settings": self.settings,
            "results": self.results,
            "exit_code": self.exit_code(),
        }
        if self.timing_ms is not None:
            out["timing_ms"] = self.timing_ms
        return out


def render_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True)


def render_markdown(report: Report, color: bool = False) -> str:
    data = report.to_dict()
    lines = ["# strathom report", ""]
    lines.append(f"- schema: {data['schema']}")
    lines.append(f"- command: `{' '.join(data['command'])}`")
    for key in sorted(data["settings"]):
        lines.append(f"- {key}: {_scalar(data['settings'][key])}")
    lines.append(f"- exit_code: {data['exit_code']}")
    for i, result in enumerate(data["results"], 1):
        lines.append("")
        lines.append(f"## {i}. {result.get('op', '?')}: {result.get('subject', '')}".rstrip())
        lines.append("")
        verdict = result.get("verdict", "info")
        shown = f"{_COLORS[verdict]}{verdict}{_RESET}" if color and verdict in _COLORS else verdict
        lines.append(f"verdict: **{shown}**")
        for key in sorted(k for k in result if k not in ("op", "subject", "verdict")):
            lines.extend(_md_entry(key, result[key], 0))
    if "timing_ms" in data:
        lines.append("")
        lines.append("## timing (ms)")
        for key in sorted(data["timing_ms"]):
            lines.append(f"- {key}: {data['timing_ms'][key]}")
    lines.append("")
    return "\n".join(lines)


def _scalar(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _md_entry(key: str, value: Any, depth: int) -> list[str]:
    pad = "  " * depth
    if isinstance(value, dict):
        if not value:
            return [f"{pad}- {key}: (none)"]
        out = [f"{pad}- {key}:"]
        for k in sorted(value, key=str):
            out.extend(_md_entry(str(k), value[k], depth + 1))
        return out
    if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        cols = sorted({k for v in value for k in v})
        out = [f"{pad}- {key}:", "", f"{pad}  | " + " | ".join(cols) + " |",
               f"{pad}  |" + "---|" * len(cols)]
        for v in value:
            out.append(f"{pad}  | " + " | ".join(_scalar(v.get(c)) for c in cols) + " |")
        out.append("")
        return out
    if isinstance(value, list):
        return [f"{pad}- {key}: " + (", ".join(_inline(v) for v in value) if value else "(none)")]
    return [f"{pad}- {key}: {_scalar(value)}"]


def _inline(value: Any) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_inline(v) for v in value) + "]"
    return _scalar(value)
