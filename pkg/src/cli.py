"""
CLI entry point: build objects from an input file, run one operation or the
file's pipeline, and print the report.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any

from .config import DEFAULT_CONFIG_PATH, ENV_FIELD, color_enabled, default_config, load_config
from .report import EXIT_INPUT, EXIT_INTERNAL, render_json, render_markdown

ROOT = Path(__file__).resolve().parent.parent

# (group, command) -> pipeline op; group None for top-level commands
COMMANDS: dict[tuple[str | None, str], str] = {
    ("alg", "info"): "alg-info",
    ("mod", "resolve"): "resolve",
    ("mod", "ext"): "ext",
    ("mod", "tor"): "tor",
    ("mod", "tilting"): "check-tilting",
    ("mod", "iso"): "iso",
    ("hom", "check-epi"): "check-epi",
    ("hom", "check-homepi"): "check-homepi",
    ("hom", "check-surjective"): "check-surjective",
    ("strat", "check-ideal"): "check-ideal",
    (None, "check-strat"): "check-ideal",
    (None, "construct-one"): "construct-one",
    (None, "construct-two"): "construct-two",
    ("derived", "hom"): "derived-hom",
    ("derived", "exceptional"): "derived-exceptional",
}

_HELP = {
    "alg-info": "Dimension, Cartan matrix, radical and global dimension",
    "resolve": "Minimal projective resolution and projective dimension",
    "ext": "dim Ext^n(M, N)",
    "tor": "dim Tor_n(M, N) or Tor_n(M, B) through a ring map",
    "check-tilting": "Classical tilting check for M + N",
    "iso": "Isomorphism test for two modules",
    "check-epi": "Ring epimorphism certificate",
    "check-homepi": "Homological epimorphism certificate",
    "check-surjective": "Surjectivity certificate with kernel checks",
    "check-ideal": "Stratifying ideal certificate for AeA",
    "construct-one": "Enlarge an injective homological epi to a surjective one",
    "construct-two": "Derived endomorphism ring of the cone K_f",
    "derived-hom": "dim Hom_D(X, Y[n])",
    "derived-exceptional": "Exceptionality of a stalk complex or of K_f",
}


def setup_logging(verbose: bool = False, stream=None) -> None:
    fmt = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format=fmt, datefmt="%Y-%m-%d %H:%M:%S",
                        stream=stream or sys.stdout, force=True)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="Path to config.yaml")
    parser.add_argument("--cutoff", type=int, default=None, help="Resolution length cutoff (default 16)")
    parser.add_argument("--field", default=None, help="q or fp:P (overrides the input file)")
    parser.add_argument("--seed", type=int, default=None, help="Seed for randomized searches")
    parser.add_argument("--format", choices=("json", "md"), default=None, help="Report format")
    parser.add_argument("--timing", action="store_true", help="Include per-step timings in the report")
    parser.add_argument("-v", "--verbose", action="store_true", help="Verbose logging")


def _operation(parser: argparse.ArgumentParser, op: str) -> None:
    _common(parser)
    parser.add_argument("input", type=Path, help="Input file (TOML)")
    if op in ("alg-info", "check-ideal"):
        parser.add_argument("--algebra", help="Algebra name when the file defines several")
    if op == "check-ideal":
        parser.add_argument("--e", required=True, help='Idempotent, e.g. "e2 + e3"')
        parser.add_argument("--corner-model", help="Quiver algebra to match eAe against")
    if op in ("resolve", "ext", "tor", "check-tilting", "iso", "derived-hom", "derived-exceptional"):
        parser.add_argument("--module", help="Module name")
    if op in ("ext", "tor", "check-tilting", "iso", "derived-hom"):
        parser.add_argument("--other", help="Second module")
    if op in ("ext", "tor", "derived-hom"):
        parser.add_argument("--degree", type=int, help="Single degree instead of the full table")
    if op in ("tor", "check-epi", "check-homepi", "check-surjective", "construct-one", "construct-two",
              "derived-hom", "derived-exceptional"):
        parser.add_argument("--hom", help="Ring map name (default: the only one in the file)")
    if op == "construct-two":
        parser.add_argument("--followups", action="store_true", help="Also check mu and its kernel")
    parser.set_defaults(op=op)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strathom",
        description="Homological invariants of finite-dimensional algebras: epimorphisms, stratifying ideals, tilting",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    groups: dict[str, Any] = {}
    for (group, name), op in COMMANDS.items():
        if group is None:
            _operation(sub.add_parser(name, help=_HELP[op]), op)
            continue
        if group not in groups:
            groups[group] = sub.add_parser(group, help=f"{group} commands").add_subparsers(
                dest="subcommand", required=True
            )
        _operation(groups[group].add_parser(name, help=_HELP[op]), op)

    run = sub.add_parser("run", help="Run the [[pipeline]] steps of an input file")
    _common(run)
    run.add_argument("input", type=Path, help="Input file (TOML)")
    run.set_defaults(op=None)

    corpus = sub.add_parser("corpus", help="Built-in example corpus").add_subparsers(dest="subcommand", required=True)
    corpus_run = corpus.add_parser("run", help="Check corpus entries against corpus/expected.yaml")
    _common(corpus_run)
    corpus_run.add_argument("entries", nargs="*", help="Entry names (default: all)")
    corpus_run.add_argument("--all", action="store_true", help="Run every entry")
    corpus_run.add_argument("--workers", type=int, default=None, help="Parallel entries")
    corpus_run.add_argument("--instances", type=int, default=None, help="Random instances per generator")
    corpus_run.set_defaults(op="corpus")
    return parser


def _load_config(args: argparse.Namespace) -> dict[str, Any]:
    if args.config is not None:
        config = load_config(args.config)
    elif DEFAULT_CONFIG_PATH.exists():
        config = load_config(DEFAULT_CONFIG_PATH)
    else:
        config = default_config()
    comp = config["compute"]
    if args.cutoff is not None:
        if args.cutoff < 1:
            raise ValueError("--cutoff must be >= 1")
        comp["cutoff"] = args.cutoff
    if args.seed is not None:
        comp["seed"] = args.seed
    if args.field is not None:
        comp["field"] = args.field
    if args.format is not None:
        config["report"]["format"] = args.format
    if args.timing:
        config["report"]["timing"] = True
    if getattr(args, "workers", None) is not None:
        config["corpus"]["workers"] = max(1, args.workers)
    if getattr(args, "instances", None) is not None:
        config["corpus"]["random_instances"] = max(0, args.instances)
    return config


def _single(names: list[str], what: str, flag: str) -> str:
    if len(names) != 1:
        raise ValueError(f"the input defines {len(names)} {what}s {names}; choose one with {flag}")
    return names[0]


def step_from_args(args: argparse.Namespace, doc) -> dict[str, Any]:
    """The pipeline step one subcommand stands for."""
    step: dict[str, Any] = {"op": args.op}
    for key in ("algebra", "module", "other", "e", "degree", "corner_model"):
        value = getattr(args, key, None)
        if value is not None:
            step[key] = value
    hom = getattr(args, "hom", None)
    if hom is not None:
        step["hom"] = hom
    elif args.op in ("check-epi", "check-homepi", "check-surjective", "construct-one", "construct-two"):
        step["hom"] = _single(list(doc.homs), "ring map", "--hom")
    elif args.op == "derived-exceptional" and "module" not in step:
        step["hom"] = _single(list(doc.homs), "ring map", "--hom")
    if getattr(args, "followups", False):
        step["followups"] = True
    return step


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = list(argv) if argv is not None else sys.argv[1:]

    stream = sys.stderr if args.format == "json" else sys.stdout
    setup_logging(verbose=args.verbose, stream=stream)
    logger = logging.getLogger(__name__)

    from .corpus import run_corpus
    from .inputs import build, load_input, normalize_step
    from .pipeline import Settings, run_pipeline

    try:
        config = _load_config(args)
        if args.format is None and config["report"]["format"] == "json":
            setup_logging(verbose=args.verbose, stream=sys.stderr)
        settings = Settings.from_config(config)
        if args.op == "corpus":
            names = [] if args.all else args.entries
            report = run_corpus(config, settings, names=names, root=ROOT, command=command)
        else:
            doc = load_input(args.input)
            field_spec = args.field or os.environ.get(ENV_FIELD) or None
            ws = build(doc, field_spec=field_spec, max_paths=settings.max_paths)
            settings.field = ws.field.name
            if args.op is None:
                steps = doc.pipeline
            else:
                steps = [normalize_step(step_from_args(args, doc), "command line")]
            report = run_pipeline(ws, steps, settings, command=command, workers=config["compute"]["workers"])
    except FileNotFoundError as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except ValueError as e:
        logger.error("Input error: %s", e)
        return EXIT_INPUT
    except Exception as e:
        logger.exception("Internal error: %s", e)
        return EXIT_INTERNAL

    if config["report"]["format"] == "json":
        print(render_json(report))
    else:
        print(render_markdown(report, color=color_enabled()))
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
