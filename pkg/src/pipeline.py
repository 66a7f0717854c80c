"""
Operation dispatcher: run a list of steps against a built workspace.

Each step names one operation and the objects it acts on:
  alg-info            algebra        dimension, Cartan matrix, radical, gldim
  resolve             module         minimal projective resolution, pd
  ext / tor           module, other  Ext^n / Tor_n dimensions (all n up to pd when degree is omitted)
  check-epi           hom            ring epimorphism, with full-embedding cross-check
  check-homepi        hom            homological epimorphism
  check-surjective    hom            surjectivity by rank and by restricted simples
  check-ideal         algebra, e     stratifying ideal AeA
  construct-one       hom            A' = End(B + B/A) and lambda': A' -> B
  construct-two       hom            mu: A -> End(K_f)
  derived-hom         module|hom     Hom_D(X, Y[n])
  derived-exceptional module|hom     Hom_D(X, X[n]) = 0 for n != 0
  check-tilting       module, other  M + N classical tilting, with its coresolution
  iso                 module, other  M ~ N

Every result is a plain dict with op, subject and a verdict (positive,
negative, inconclusive or info). Construction hypotheses that fail give a
negative result carrying the error name; malformed steps raise InputError.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Callable

from .algebra import DEFAULT_MAX_PATHS, Algebra, AlgebraError, is_basic_split, parse_element
from .derived import BoundedComplex, derived_hom_dim, hom_window, is_exceptional, proj_resolve_complex, stalk
from .inputs import InputError, Workspace
from .linalg import UnsupportedFieldError
from .modules import (
    LeftModule,
    ModuleError,
    RightModule,
    ext_dim,
    gldim,
    indec_projectives,
    is_classical_tilting,
    is_isomorphic,
    left_regular_via,
    min_proj_resolution,
    simple_modules,
    tor_dim,
)
from .report import Report
from .strat import (
    ConstructionError,
    PreconditionError,
    check_exceptional_quotient,
    check_full_embedding,
    check_homological_epi,
    check_kernel_idempotent,
    check_ring_epi,
    check_stratifying_ideal,
    check_surjectivity,
    cone_of,
    construction_one,
    construction_two,
    find_idempotent_generator,
)

logger = logging.getLogger(__name__)


@dataclass
class Settings:
    field: str = "q"
    cutoff: int = 16
    seed: int = 0
    trials: int = 32
    max_paths: int = DEFAULT_MAX_PATHS
    timing: bool = False

    @classmethod
    def from_config(cls, config: dict[str, Any]) -> "Settings":
        comp = config["compute"]
        return cls(
            field=str(comp["field"]),
            cutoff=comp["cutoff"],
            seed=comp["seed"],
            trials=config["iso"]["trials"],
            max_paths=comp["max_paths"],
            timing=config["report"]["timing"],
        )

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out.pop("timing")
        return out


# ──────────────────────────────────────────────────────────────────────────────
# Step arguments
# ──────────────────────────────────────────────────────────────────────────────

def _need(step: dict, key: str) -> str:
    if key not in step:
        raise InputError(f"{step['op']} needs '{key}'", "pipeline")
    return step[key]


def _algebra(ws: Workspace, step: dict) -> Algebra:
    if "algebra" in step:
        return ws.algebra(step["algebra"])
    if len(ws.algebras) == 1:
        return next(iter(ws.algebras.values()))
    raise InputError(f"{step['op']} needs 'algebra' when several are defined", "pipeline")


def _complex(ws: Workspace, step: dict, key: str) -> BoundedComplex:
    """The stalk of a module, or the cone K_f of a ring map."""
    name = step.get(key)
    if key == "module" and name is None and "hom" in step:
        return cone_of(ws.hom(step["hom"]))
    if name is None:
        raise InputError(f"{step['op']} needs '{key}'", "pipeline")
    return stalk(ws.module(name), 0)


def _left_dual(n: RightModule) -> LeftModule:
    """D(N) = Hom_k(N, k) with (a.phi)(x) = phi(x a)."""
    return LeftModule(n.algebra, n.dim, [r.T for r in n.action], name=f"D({n.name})", check=False)


def _resolution_row(res, n: int) -> dict[str, Any]:
    return {"degree": n, "rank": res.terms[n].rank, "summands": " + ".join(res.summands()[n]) or "0"}


def _rad_dim(a: Algebra) -> int | None:
    try:
        return a.rad.dim
    except UnsupportedFieldError:
        return None


# ──────────────────────────────────────────────────────────────────────────────
# Operations
# ──────────────────────────────────────────────────────────────────────────────

def op_alg_info(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    a = _algebra(ws, step)
    out: dict[str, Any] = {
        "op": "alg-info",
        "subject": a.name,
        "verdict": "info",
        "dim": a.dim,
        "field": a.field.name,
        "labels": list(a.labels),
    }
    idems = a.primitive_idempotents
    out["vertices"] = len(idems) if idems is not None else None
    if idems is not None:
        n = len(idems)
        cartan = [[0] * n for _ in range(n)]
        for i, j, _ in a.peirce_basis:
            cartan[i][j] += 1
        out["cartan"] = cartan
        out["projective dim vectors"] = [list(p.dim_vector) for p in indec_projectives(a)]
    try:
        out["dim rad"] = a.rad.dim
        out["basic"] = is_basic_split(a)
    except UnsupportedFieldError as e:
        out["dim rad"] = None
        out["basic"] = None
        out["note"] = str(e)
    if idems is not None and out["basic"]:
        gl = gldim(a, s.cutoff)
        out["gldim"] = gl.to_plain()
        out["simples pd"] = {
            sm.name: min_proj_resolution(sm, s.cutoff).pd().to_plain() for sm in simple_modules(a)
        }
        if not gl.exact:
            out["verdict"] = "inconclusive"
    return out


def op_resolve(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    m = ws.module(_need(step, "module"))
    res = min_proj_resolution(m, s.cutoff)
    return {
        "op": "resolve",
        "subject": m.name,
        "verdict": "info" if res.complete else "inconclusive",
        "dim": m.dim,
        "dim vector": list(m.dim_vector),
        "terms": [_resolution_row(res, n) for n in range(len(res.terms))],
        "pd": res.pd().to_plain(),
        "complete": res.complete,
    }


def _degrees(step: dict, m: RightModule, s: Settings) -> tuple[list[int], bool]:
    if "degree" in step:
        if step["degree"] < 0:
            raise InputError("degree must be >= 0", "pipeline")
        return [step["degree"]], True
    res = min_proj_resolution(m, s.cutoff)
    top = res.length if res.complete else len(res.terms) - 2
    return list(range(0, top + 1)), res.complete


def op_ext(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    m = ws.module(_need(step, "module"))
    n = ws.module(_need(step, "other"))
    degrees, complete = _degrees(step, m, s)
    table = {str(d): ext_dim(m, n, d, s.cutoff) for d in degrees}
    return {
        "op": "ext",
        "subject": f"Ext({m.name}, {n.name})",
        "verdict": "info" if complete else "inconclusive",
        "dims": table,
    }


def op_tor(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    m = ws.module(_need(step, "module"))
    if "hom" in step:
        f = ws.hom(step["hom"])
        if f.source is not m.algebra:
            raise InputError(f"{f.name} does not start at {m.algebra.name}", "pipeline")
        n = left_regular_via(f)
        label = f"{f.target.name} via {f.name}"
    else:
        other = ws.module(_need(step, "other"))
        n = _left_dual(other)
        label = n.name
    degrees, complete = _degrees(step, m, s)
    table = {str(d): tor_dim(m, n, d, s.cutoff) for d in degrees}
    return {
        "op": "tor",
        "subject": f"Tor({m.name}, {label})",
        "verdict": "info" if complete else "inconclusive",
        "dims": table,
    }


def _with_op(op: str, cert_dict: dict[str, Any]) -> dict[str, Any]:
    return {"op": op, **cert_dict}


def op_check_epi(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    f = ws.hom(_need(step, "hom"))
    cert = check_ring_epi(f)
    if cert.is_ring_epi and f.target.primitive_idempotents is not None:
        ps = indec_projectives(f.target)
        emb = check_full_embedding(f, [(p, q) for p in ps for q in ps])
        cert.witnesses["Hom over B vs over A"] = [
            {"pair": pair, "over B": hb, "over A": ha} for pair, hb, ha in emb.rows
        ]
        if not emb.holds:
            cert.complete = False
            cert.trace.append("restriction changed a Hom dimension between projective B-modules")
    return _with_op("check-epi", cert.to_dict())


def op_check_homepi(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    f = ws.hom(_need(step, "hom"))
    return _with_op("check-homepi", check_homological_epi(f, s.cutoff).to_dict())


def op_check_surjective(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    f = ws.hom(_need(step, "hom"))
    cert = check_surjectivity(f, radical_condition=True)
    if not cert.is_surjective:
        return _with_op("check-surjective", cert.to_dict())
    cert.absorb(check_kernel_idempotent(f, s.cutoff))
    if not cert.kernel_idempotent:
        cert.kernel_stratifying = False
    elif f.source.primitive_idempotents is None:
        cert.complete = False
        cert.trace.append(f"{f.source.name} has no primitive idempotents; generator search skipped")
    else:
        gen = find_idempotent_generator(f.kernel())
        if gen is None:
            cert.complete = False
            cert.trace.append("Ker(f) is idempotent but no sum of primitive idempotents generates it")
        else:
            strat = check_stratifying_ideal(f.source, gen, s.cutoff)
            cert.idempotent_generator = strat.idempotent_generator
            cert.kernel_stratifying = strat.kernel_stratifying
            cert.is_homological_epi = strat.is_homological_epi
            cert.witnesses["pd(B_A)"] = strat.witnesses.get("pd(B_A)")
            cert.complete = cert.complete and strat.complete
    return _with_op("check-surjective", cert.to_dict())


def op_check_ideal(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    a = _algebra(ws, step)
    text = _need(step, "e")
    try:
        e = parse_element(a, text)
    except (AlgebraError, ValueError) as exc:
        raise InputError(f"cannot read e = {text!r}: {exc}", "pipeline") from exc
    model = ws.algebra(step["corner_model"]) if "corner_model" in step else None
    cert = check_stratifying_ideal(a, e, s.cutoff, corner_model=model)
    if cert.kernel_stratifying:
        rep = check_exceptional_quotient(a, e, s.cutoff)
        cert.witnesses["A/AeA exceptional"] = rep.exceptional
        cert.witnesses["Hom(A/AeA, A/AeA[n])"] = {str(n): d for n, d in rep.table.items()}
        if not rep.exceptional:
            cert.complete = False
            cert.trace.append(f"A/AeA has self-extensions in degrees {rep.offending}")
    try:
        gl = gldim(a, s.cutoff)
        cert.witnesses["gldim A"] = gl.to_plain()
    except (ModuleError, AlgebraError, UnsupportedFieldError) as exc:
        cert.trace.append(f"gldim skipped: {exc}")
    return _with_op("check-ideal", cert.to_dict())


def op_construct_one(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    f = ws.hom(_need(step, "hom"))
    r = construction_one(f, s.cutoff, seed=s.seed, trials=s.trials)
    out = _with_op("construct-one", r.checks.to_dict())
    ap = r.A_prime.algebra
    out["A'"] = {
        "dim": ap.dim,
        "e": ap.format_element(r.e),
        "summands": [m.name for m in r.T.summands],
        "summand dims": [m.dim for m in r.T.summands],
    }
    out["tilting"] = {
        "is_tilting": r.tilting.is_tilting,
        "pd": r.tilting.pd_values,
        "ext1": r.tilting.ext_table,
        "T0 multiplicities": list(r.tilting.t0_multiplicities or ()),
        "T1 multiplicities": list(r.tilting.t1_multiplicities or ()),
    }
    out["lambda' rank"] = r.lambda_prime.rank
    return out


def op_construct_two(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    f = ws.hom(_need(step, "hom"))
    r = construction_two(f, s.cutoff, followups=bool(step.get("followups", False)))
    out = _with_op("construct-two", r.checks.to_dict())
    out["C"] = {"dim": r.C.dim, "dim rad": _rad_dim(r.C), "mu rank": r.mu.rank, "mu injective": r.mu.is_injective}
    out["cone homology"] = {str(n): d for n, d in r.cone.homology_dims().items()}
    return out


def op_check_tilting(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    m = ws.module(_need(step, "module"))
    n = ws.module(_need(step, "other"))
    rep = is_classical_tilting([m, n], m.algebra, cutoff=s.cutoff, seed=s.seed, trials=s.trials)
    verdict = {True: "positive", False: "negative", None: "inconclusive"}[rep.is_tilting]
    return {
        "op": "check-tilting",
        "subject": f"{m.name} + {n.name}",
        "verdict": verdict,
        "pd": rep.pd_values,
        "ext1": rep.ext_table,
        "T0 multiplicities": list(rep.t0_multiplicities or ()),
        "T1 multiplicities": list(rep.t1_multiplicities or ()),
        "Hom(T1, T0) = 0": rep.hom_t1_t0_zero,
        "notes": rep.notes,
    }


def op_iso(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    m = ws.module(_need(step, "module"))
    n = ws.module(_need(step, "other"))
    res = is_isomorphic(m, n, seed=s.seed, trials=s.trials)
    verdict = {"yes": "positive", "no": "negative"}.get(res.verdict, "inconclusive")
    return {"op": "iso", "subject": f"{m.name} ~ {n.name}", "verdict": verdict, "reason": res.reason}


def op_derived_hom(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    x = _complex(ws, step, "module")
    y = _complex(ws, step, "other") if "other" in step else x
    if "degree" in step:
        degrees = [step["degree"]]
    else:
        degrees = list(hom_window(proj_resolve_complex(x, s.cutoff), y))
    table = {str(n): derived_hom_dim(x, y, n, s.cutoff) for n in degrees}
    return {
        "op": "derived-hom",
        "subject": f"Hom_D({x.name}, {y.name}[n])",
        "verdict": "info",
        "dims": table,
    }


def op_derived_exceptional(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    x = _complex(ws, step, "module")
    rep = is_exceptional(x, s.cutoff)
    return {
        "op": "derived-exceptional",
        "subject": x.name,
        "verdict": "positive" if rep.exceptional else "negative",
        "exceptional": rep.exceptional,
        "offending": rep.offending,
        "dims": {str(n): d for n, d in rep.table.items()},
    }


OPS: dict[str, Callable[[Workspace, dict, Settings], dict[str, Any]]] = {
    "alg-info": op_alg_info,
    "resolve": op_resolve,
    "ext": op_ext,
    "tor": op_tor,
    "check-epi": op_check_epi,
    "check-homepi": op_check_homepi,
    "check-surjective": op_check_surjective,
    "check-ideal": op_check_ideal,
    "construct-one": op_construct_one,
    "construct-two": op_construct_two,
    "derived-hom": op_derived_hom,
    "derived-exceptional": op_derived_exceptional,
    "check-tilting": op_check_tilting,
    "iso": op_iso,
}


# ──────────────────────────────────────────────────────────────────────────────
# Running
# ──────────────────────────────────────────────────────────────────────────────

def run_step(ws: Workspace, step: dict, s: Settings) -> dict[str, Any]:
    op = step.get("op")
    if op not in OPS:
        raise InputError(f"unknown op {op!r}; have {sorted(OPS)}", "pipeline")
    try:
        return OPS[op](ws, step, s)
    except ConstructionError as e:
        logger.warning("%s: hypothesis failed: %s", op, e)
        return {
            "op": op,
            "subject": step.get("hom") or step.get("algebra") or step.get("module", ""),
            "verdict": "negative",
            "error": type(e).__name__,
            "message": str(e),
        }
    except PreconditionError as e:
        raise InputError(str(e), "pipeline") from e


def run_pipeline(
    ws: Workspace,
    steps: list[dict],
    settings: Settings,
    *,
    command: list[str] | None = None,
    workers: int = 1,
) -> Report:
    """Run steps (in parallel when workers > 1) and collect results in step order."""
    if not steps:
        raise InputError("nothing to run: the pipeline is empty", "pipeline")
    report = Report(command or [], settings.to_dict())
    timing: dict[str, float] = {}

    def timed(i: int, step: dict) -> dict[str, Any]:
        t0 = time.perf_counter()
        result = run_step(ws, step, settings)
        timing[f"{i + 1}. {step['op']}"] = round((time.perf_counter() - t0) * 1000, 1)
        return result

    logger.info("running %d step(s) with cutoff %d over %s", len(steps), settings.cutoff, settings.field)
    if workers > 1 and len(steps) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(timed, i, step) for i, step in enumerate(steps)]
            results = [fut.result() for fut in futures]
    else:
        results = [timed(i, step) for i, step in enumerate(steps)]
    for result in results:
        logger.info("%s %s: %s", result["op"], result.get("subject", ""), result["verdict"])
        report.add(result)
    if settings.timing:
        report.timing_ms = dict(sorted(timing.items()))
    return report
