"""
Built-in example corpus: shipped input files checked against expected values.

Manifest (corpus/expected.yaml):
  entries:
    - name: ...           # unique
      input: file.alg     # relative to the corpus directory
      steps:              # pipeline steps; omitted -> the file's own [[pipeline]]
        - op: check-ideal
          e: "e2 + e3"
          expect:         # dotted paths into the step result
            verdict: positive
            witnesses.dim A/AeA: 1
    - name: ...
      generator: ext-arrows   # seeded random instances instead of a file

Entries run in a thread pool; each computation inside an entry is sequential.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import yaml

from .algebra import Algebra, Arrow, QuiverPresentation, from_quiver, ideal_generated, quotient_by_ideal
from .inputs import InputError, build, load_input, normalize_step
from .linalg import Field, parse_field
from .modules import ext_dim, simple_at
from .pipeline import Settings, run_step
from .report import Report
from .strat import ConsistencyError, check_homological_epi, check_kernel_idempotent, check_stratifying_ideal

logger = logging.getLogger(__name__)


@dataclass
class CorpusEntry:
    name: str
    input: str | None = None
    generator: str | None = None
    steps: list[dict[str, Any]] = field(default_factory=list)


def load_manifest(path: str | Path) -> list[CorpusEntry]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Corpus manifest not found: {path}")
    with open(path, encoding="utf-8") as f:
        raw = yaml.safe_load(f)
    if not raw or not isinstance(raw.get("entries"), list):
        raise ValueError(f"{path}: manifest must hold a list under 'entries'")
    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    for i, item in enumerate(raw["entries"]):
        if not isinstance(item, dict) or "name" not in item:
            raise ValueError(f"{path}: entry {i} needs a name")
        name = str(item["name"])
        if name in seen:
            raise ValueError(f"{path}: duplicate entry {name!r}")
        seen.add(name)
        if ("input" in item) == ("generator" in item):
            raise ValueError(f"{path}: entry {name!r} needs exactly one of input / generator")
        if "generator" in item and item["generator"] not in GENERATORS:
            raise ValueError(f"{path}: entry {name!r} has unknown generator {item['generator']!r}")
        entries.append(CorpusEntry(name, item.get("input"), item.get("generator"), list(item.get("steps", []))))
    return entries


# ──────────────────────────────────────────────────────────────────────────────
# File entries
# ──────────────────────────────────────────────────────────────────────────────

def lookup(result: dict[str, Any], path: str) -> Any:
    """Follow a dotted path; integer parts index lists."""
    cur: Any = result
    for part in path.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        elif isinstance(cur, dict) and part in cur:
            cur = cur[part]
        else:
            raise KeyError(path)
    return cur


def _run_file_entry(entry: CorpusEntry, corpus_dir: Path, settings: Settings) -> dict[str, Any]:
    doc = load_input(corpus_dir / entry.input)
    ws = build(doc, field_spec=settings.field, max_paths=settings.max_paths)
    raw_steps = entry.steps or [dict(s) for s in doc.pipeline]
    checks = []
    for i, raw in enumerate(raw_steps):
        raw = dict(raw)
        expect = raw.pop("expect", {}) or {}
        step = normalize_step(raw, f"{entry.name}.steps[{i}]")
        result = run_step(ws, step, settings)
        for key, want in expect.items():
            try:
                got = lookup(result, key)
            except (KeyError, IndexError, ValueError):
                got = "<missing>"
            checks.append({"step": i, "op": step["op"], "key": key, "expected": want, "got": got, "ok": got == want})
    return {"checks": checks}


# ──────────────────────────────────────────────────────────────────────────────
# Random instances
# ──────────────────────────────────────────────────────────────────────────────

def random_acyclic_quiver(rng: random.Random, max_vertices: int = 4, max_arrows: int = 5) -> QuiverPresentation:
    """Arrows only go forward in a random vertex order."""
    n = rng.randint(2, max_vertices)
    vertices = tuple(str(v) for v in range(1, n + 1))
    order = list(vertices)
    rng.shuffle(order)
    arrows = []
    for k in range(rng.randint(1, max_arrows)):
        i, j = sorted(rng.sample(range(n), 2))
        arrows.append(Arrow(f"x{k + 1}", order[i], order[j]))
    return QuiverPresentation(vertices, tuple(arrows), ())


def random_monomial_relations(rng: random.Random, q: QuiverPresentation, p: float = 0.5) -> QuiverPresentation:
    """Kill each composable pair of arrows with probability p."""
    rels = []
    for a in q.arrows:
        for b in q.arrows:
            if a.target == b.source and rng.random() < p:
                rels.append((b.name, a.name))
    return QuiverPresentation(q.vertices, q.arrows, tuple(rels))


def _random_vertex_subset(rng: random.Random, a: Algebra) -> tuple:
    idems = a.require_idempotents("random idempotent")
    k = rng.randint(1, len(idems) - 1)
    e = a.zero()
    for p in rng.sample(list(idems), k):
        e = a.add(e, p)
    return e


def check_ext_arrows(rng: random.Random, F: Field, cutoff: int) -> list[str]:
    """dim Ext^1(S_i, S_j) = number of arrows j -> i."""
    q = random_monomial_relations(rng, random_acyclic_quiver(rng))
    a = from_quiver(q, F, name="Q")
    simples = {v: simple_at(a, v) for v in q.vertices}
    failures = []
    for i in q.vertices:
        for j in q.vertices:
            arrows = sum(1 for arr in q.arrows if arr.source == j and arr.target == i)
            got = ext_dim(simples[i], simples[j], 1, cutoff)
            if got != arrows:
                failures.append(f"{q}: Ext^1(S{i}, S{j}) = {got}, arrows {j}->{i}: {arrows}")
    return failures


def check_ideal_quotient(rng: random.Random, F: Field, cutoff: int) -> list[str]:
    """Surjections A -> A/I: homological epi implies I^2 = I; I^2 != I rules it out."""
    q = random_monomial_relations(rng, random_acyclic_quiver(rng))
    a = from_quiver(q, F, name="Q")
    if rng.random() < 0.5:
        gens = [_random_vertex_subset(rng, a)]
    else:
        arrow = rng.choice(q.arrows).name
        gens = [a.basis_vector(a.index(arrow))]
    _, f = quotient_by_ideal(a, ideal_generated(a, gens), name="Q/I")
    kern = check_kernel_idempotent(f, cutoff)
    hom = check_homological_epi(f, cutoff)
    if hom.is_homological_epi and not kern.kernel_idempotent:
        return [f"{q}: homological epi with non-idempotent kernel"]
    if not kern.kernel_idempotent and hom.is_homological_epi is not False:
        return [f"{q}: kernel not idempotent but homological epi = {hom.is_homological_epi}"]
    return []


def check_hereditary_corner(rng: random.Random, F: Field, cutoff: int) -> list[str]:
    """Every idempotent ideal of a path algebra without relations is stratifying."""
    q = random_acyclic_quiver(rng)
    a = from_quiver(q, F, name="Q")
    e = _random_vertex_subset(rng, a)
    cert = check_stratifying_ideal(a, e, cutoff)
    if cert.verdict() != "positive":
        return [f"{q}: AeA for e = {a.format_element(e)} is {cert.verdict()}"]
    return []


GENERATORS: dict[str, Callable[[random.Random, Field, int], list[str]]] = {
    "ext-arrows": check_ext_arrows,
    "ideal-quotient": check_ideal_quotient,
    "hereditary-corner": check_hereditary_corner,
}


def _run_generator_entry(entry: CorpusEntry, settings: Settings, instances: int) -> dict[str, Any]:
    F = parse_field(settings.field)
    gen = GENERATORS[entry.generator]
    failures: list[str] = []
    for k in range(instances):
        rng = random.Random(f"{entry.generator}:{settings.seed}:{k}")
        try:
            failures.extend(gen(rng, F, settings.cutoff))
        except ConsistencyError as e:
            failures.append(f"instance {k}: {e}")
    checks = [{"step": 0, "op": entry.generator, "key": "failures", "expected": 0,
               "got": len(failures), "ok": not failures}]
    return {"checks": checks, "instances": instances, "failure details": failures[:10]}


# ──────────────────────────────────────────────────────────────────────────────
# Running
# ──────────────────────────────────────────────────────────────────────────────

def run_entry(entry: CorpusEntry, corpus_dir: Path, settings: Settings, instances: int) -> dict[str, Any]:
    try:
        if entry.generator:
            body = _run_generator_entry(entry, settings, instances)
        else:
            body = _run_file_entry(entry, corpus_dir, settings)
    except (ValueError, FileNotFoundError) as e:
        logger.error("corpus entry %s: %s", entry.name, e)
        return {"op": "corpus", "subject": entry.name, "verdict": "negative", "error": str(e)}
    failed = [c for c in body["checks"] if not c["ok"]]
    for c in failed:
        logger.warning("%s step %d (%s): %s expected %r, got %r",
                       entry.name, c["step"], c["op"], c["key"], c["expected"], c["got"])
    return {
        "op": "corpus",
        "subject": entry.name,
        "verdict": "negative" if failed else "positive",
        "passed": len(body["checks"]) - len(failed),
        "failed": len(failed),
        **body,
    }


def run_corpus(
    config: dict[str, Any],
    settings: Settings,
    *,
    names: list[str] | None = None,
    root: Path | None = None,
    command: list[str] | None = None,
) -> Report:
    """Run every manifest entry (or those named) and report one result per entry."""
    corpus_cfg = config["corpus"]
    corpus_dir = Path(corpus_cfg["dir"])
    if not corpus_dir.is_absolute():
        corpus_dir = (root or Path.cwd()) / corpus_dir
    entries = load_manifest(corpus_dir / corpus_cfg["manifest"])
    if names:
        unknown = sorted(set(names) - {e.name for e in entries})
        if unknown:
            raise InputError(f"unknown corpus entries {unknown}", "corpus")
        entries = [e for e in entries if e.name in names]
    instances = corpus_cfg["random_instances"]
    workers = corpus_cfg["workers"]
    logger.info("corpus: %d entries from %s with %d worker(s)", len(entries), corpus_dir, workers)

    results: dict[str, dict[str, Any]] = {}
    if workers > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(run_entry, e, corpus_dir, settings, instances): e.name for e in entries}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
    else:
        for e in entries:
            results[e.name] = run_entry(e, corpus_dir, settings, instances)

    report = Report(command or ["corpus", "run"], {**settings.to_dict(), "random_instances": instances})
    for e in entries:
        report.add(results[e.name])
        logger.info("corpus %s: %s", e.name, results[e.name]["verdict"])
    return report
