"""
Input documents: load, validate, emit, and build algebras, modules and ring maps.

A document is TOML with sections [algebra] / [algebras.<name>],
[module.<name>], [hom.<name>] and an optional [[pipeline]] list. Scalars
are integers or strings such as "1/2"; paths are written in function order,
so "beta*alpha" is alpha followed by beta.
"""

import logging
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Any

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .algebra import (
    DEFAULT_MAX_PATHS,
    Algebra,
    AlgebraError,
    Arrow,
    QuiverPresentation,
    RingHom,
    corner,
    from_quiver,
    ideal_generated,
    matrix_algebra,
    parse_element,
    parse_path,
    product_algebra,
    quotient_by_ideal,
    triangular_algebra,
)
from .linalg import Field, Mat, UnsupportedFieldError, parse_field
from .modules import (
    ModuleError,
    RightModule,
    direct_sum,
    indec_projectives,
    kronecker_preprojective,
    regular_module,
    representation_hom,
    representation_module,
    restrict_along,
    simple_at,
)

logger = logging.getLogger(__name__)


class InputError(ValueError):
    """Malformed or inconsistent input, annotated with the offending section."""

    def __init__(self, message: str, section: str | None = None):
        self.section = section
        super().__init__(f"[{section}] {message}" if section else message)


ALGEBRA_KEYS = {
    "quiver": {"kind", "vertices", "arrows", "relations"},
    "matrix": {"kind", "n"},
    "triangular": {"kind", "n"},
    "product": {"kind", "factors"},
    "structure_constants": {"kind", "labels", "unit", "products", "idempotents"},
    "corner": {"kind", "of", "e"},
    "quotient": {"kind", "of", "ideal"},
}

MODULE_KEYS = {
    "representation": {"kind", "algebra", "dims", "maps"},
    "simple": {"kind", "algebra", "vertex"},
    "projective": {"kind", "algebra", "vertex"},
    "regular": {"kind", "algebra"},
    "preprojective": {"kind", "algebra", "index"},
    "action": {"kind", "algebra", "dim", "action"},
    "restriction": {"kind", "hom", "module"},
    "sum": {"kind", "modules"},
}

HOM_KEYS = {
    "matrix": {"kind", "source", "target", "matrix"},
    "images": {"kind", "source", "target", "images"},
    "identity": {"kind", "source", "target"},
    "inclusion": {"kind", "source", "target"},
    "projection": {"kind", "source", "target", "factor"},
    "quotient": {"kind", "source", "target"},
    "representation": {"kind", "source", "target", "module"},
}

PIPELINE_OPS = (
    "alg-info",
    "resolve",
    "ext",
    "tor",
    "check-epi",
    "check-homepi",
    "check-surjective",
    "check-ideal",
    "construct-one",
    "construct-two",
    "derived-hom",
    "derived-exceptional",
    "check-tilting",
    "iso",
)
PIPELINE_KEYS = {"op", "algebra", "module", "other", "hom", "e", "degree", "followups", "corner_model"}

TOP_LEVEL_KEYS = {"field", "algebra", "algebras", "module", "hom", "pipeline"}


@dataclass
class InputDoc:
    """Validated, normalized document; equal documents build equal objects."""

    field: str = "q"
    algebras: dict[str, dict[str, Any]] = dc_field(default_factory=dict)
    modules: dict[str, dict[str, Any]] = dc_field(default_factory=dict)
    homs: dict[str, dict[str, Any]] = dc_field(default_factory=dict)
    pipeline: list[dict[str, Any]] = dc_field(default_factory=list)


# ──────────────────────────────────────────────────────────────────────────────
# Parsing and normalization
# ──────────────────────────────────────────────────────────────────────────────

def load_input(path: str | Path) -> InputDoc:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    return parse_input(path.read_text(encoding="utf-8"), source=str(path))


def parse_input(text: str, source: str = "<input>") -> InputDoc:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise InputError(f"{source}: {e}") from e
    if not raw:
        raise InputError(f"{source}: document is empty")
    _check_keys(raw, TOP_LEVEL_KEYS, "document")

    doc = InputDoc()
    doc.field = _field_spec(raw.get("field", "q"))
    if "algebra" in raw:
        section = raw["algebra"]
        if not isinstance(section, dict):
            raise InputError("must be a table", "algebra")
        section = dict(section)
        name = str(section.pop("name", "A"))
        doc.algebras[name] = _normalize_algebra(section, "algebra")
    for name, section in _table(raw, "algebras").items():
        if name in doc.algebras:
            raise InputError(f"algebra {name!r} defined twice", f"algebras.{name}")
        doc.algebras[name] = _normalize_algebra(section, f"algebras.{name}")
    if not doc.algebras:
        raise InputError(f"{source}: no algebra defined")
    for name, section in _table(raw, "module").items():
        doc.modules[name] = _normalize_module(section, f"module.{name}", doc)
    for name, section in _table(raw, "hom").items():
        doc.homs[name] = _normalize_hom(section, f"hom.{name}", doc)
    steps = raw.get("pipeline", [])
    if not isinstance(steps, list):
        raise InputError("must be an array of tables", "pipeline")
    for i, step in enumerate(steps):
        doc.pipeline.append(normalize_step(step, f"pipeline[{i}]"))
    logger.debug("parsed %s: %d algebras, %d modules, %d homs", source,
                 len(doc.algebras), len(doc.modules), len(doc.homs))
    return doc


def emit_input(doc: InputDoc) -> str:
    data: dict[str, Any] = {"field": doc.field, "algebras": doc.algebras}
    if doc.modules:
        data["module"] = doc.modules
    if doc.homs:
        data["hom"] = doc.homs
    if doc.pipeline:
        data["pipeline"] = doc.pipeline
    return tomli_w.dumps(data)


def _table(raw: dict, key: str) -> dict[str, dict]:
    value = raw.get(key, {})
    if not isinstance(value, dict) or not all(isinstance(v, dict) for v in value.values()):
        raise InputError("must be a table of tables", key)
    return value


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise InputError(f"unknown keys {unknown}; allowed: {sorted(allowed)}", where)


def _field_spec(value: Any) -> str:
    try:
        return parse_field(str(value)).name
    except UnsupportedFieldError as e:
        raise InputError(str(e), "field") from e


def _kind(section: dict, table: dict[str, set[str]], where: str, default: str | None = None) -> str:
    kind = section.get("kind", default)
    if kind not in table:
        raise InputError(f"kind must be one of {sorted(table)}, got {kind!r}", where)
    _check_keys(section, table[kind], where)
    return kind


def _scalar(x: Any, where: str) -> str:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"expected an integer or a string like '1/2', got {x!r}", where)
    try:
        return str(Fraction(str(x).strip()))
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"not a rational number: {x!r}", where) from e


def _matrix(rows: Any, where: str) -> list[list[str]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix must be a list of rows", where)
    if len({len(r) for r in rows}) > 1:
        raise InputError("matrix rows have different lengths", where)
    return [[_scalar(x, where) for x in r] for r in rows]


def _int(section: dict, key: str, where: str, minimum: int = 0) -> int:
    value = section.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InputError(f"{key} must be an integer >= {minimum}", where)
    return value


def _str_list(section: dict, key: str, where: str) -> list[str]:
    value = section.get(key)
    if not isinstance(value, list) or not all(isinstance(v, (str, int)) for v in value):
        raise InputError(f"{key} must be a list of strings", where)
    return [str(v) for v in value]


def _normalize_algebra(section: dict, where: str) -> dict[str, Any]:
    kind = _kind(section, ALGEBRA_KEYS, where, default="quiver")
    out: dict[str, Any] = {"kind": kind}
    if kind == "quiver":
        out["vertices"] = _str_list(section, "vertices", where)
        if not out["vertices"]:
            raise InputError("vertex list is empty", where)
        arrows = section.get("arrows", [])
        if not isinstance(arrows, list) or not all(isinstance(a, list) and len(a) == 3 for a in arrows):
            raise InputError('arrows must be a list of ["name", "source", "target"]', where)
        out["arrows"] = [[str(x) for x in a] for a in arrows]
        out["relations"] = _str_list(section, "relations", where) if "relations" in section else []
        _presentation(out, where)
    elif kind in ("matrix", "triangular"):
        out["n"] = _int(section, "n", where, minimum=1)
    elif kind == "product":
        out["factors"] = _str_list(section, "factors", where)
        if len(out["factors"]) != 2:
            raise InputError("a product takes exactly two factors", where)
    elif kind == "structure_constants":
        out["labels"] = _str_list(section, "labels", where)
        out["unit"] = str(section.get("unit", ""))
        products = section.get("products", {})
        if not isinstance(products, dict):
            raise InputError('products must be a table of "x*y" = "expression"', where)
        out["products"] = {str(k): str(v) for k, v in products.items()}
        if "idempotents" in section:
            out["idempotents"] = _str_list(section, "idempotents", where)
    elif kind == "corner":
        out["of"] = str(section.get("of", ""))
        out["e"] = str(section.get("e", ""))
    else:
        out["of"] = str(section.get("of", ""))
        out["ideal"] = _str_list(section, "ideal", where)
    return out


def _presentation(section: dict, where: str) -> QuiverPresentation:
    try:
        arrows = tuple(Arrow(n, s, t) for n, s, t in section["arrows"])
        rels = tuple(parse_path(r) for r in section["relations"])
        return QuiverPresentation(tuple(section["vertices"]), arrows, rels)
    except AlgebraError as e:
        raise InputError(str(e), where) from e


def _default_algebra(section: dict, doc: InputDoc, where: str) -> str:
    if "algebra" in section:
        name = str(section["algebra"])
    elif len(doc.algebras) == 1:
        name = next(iter(doc.algebras))
    else:
        raise InputError("algebra must be named when the document defines several", where)
    if name not in doc.algebras:
        raise InputError(f"unknown algebra {name!r}", where)
    return name


def _normalize_module(section: dict, where: str, doc: InputDoc) -> dict[str, Any]:
    kind = _kind(section, MODULE_KEYS, where, default="representation")
    out: dict[str, Any] = {"kind": kind}
    if kind == "restriction":
        out["hom"] = str(section.get("hom", ""))
        out["module"] = str(section.get("module", ""))
        return out
    if kind == "sum":
        out["modules"] = _str_list(section, "modules", where)
        if not out["modules"]:
            raise InputError("a sum needs at least one module", where)
        return out
    out["algebra"] = _default_algebra(section, doc, where)
    if kind == "representation":
        dims = section.get("dims")
        if not isinstance(dims, dict):
            raise InputError("dims must be a table {vertex = n}", where)
        out["dims"] = {str(v): _int(dims, v, where) for v in dims}
        maps = section.get("maps", {})
        if not isinstance(maps, dict):
            raise InputError("maps must be a table {arrow = matrix}", where)
        out["maps"] = {str(k): _matrix(v, f"{where}.maps.{k}") for k, v in maps.items()}
    elif kind in ("simple", "projective"):
        out["vertex"] = str(section.get("vertex", ""))
    elif kind == "preprojective":
        out["index"] = _int(section, "index", where)
    elif kind == "action":
        out["dim"] = _int(section, "dim", where)
        action = section.get("action")
        if not isinstance(action, dict):
            raise InputError("action must be a table {basis label = matrix}", where)
        out["action"] = {str(k): _matrix(v, f"{where}.action.{k}") for k, v in action.items()}
    return out


def _normalize_hom(section: dict, where: str, doc: InputDoc) -> dict[str, Any]:
    kind = _kind(section, HOM_KEYS, where, default="matrix")
    out: dict[str, Any] = {"kind": kind}
    for key in ("source", "target"):
        if key in section:
            out[key] = str(section[key])
    if "source" not in out:
        raise InputError("source is required", where)
    if kind == "identity":
        out.setdefault("target", out["source"])
    elif "target" not in out:
        raise InputError("target is required", where)
    for key in ("source", "target"):
        if out[key] not in doc.algebras:
            raise InputError(f"unknown algebra {out[key]!r}", where)
    if kind == "matrix":
        out["matrix"] = _matrix(section.get("matrix"), where)
    elif kind == "images":
        images = section.get("images")
        if not isinstance(images, dict):
            raise InputError("images must be a table {basis label = element}", where)
        out["images"] = {str(k): str(v) for k, v in images.items()}
    elif kind == "projection":
        out["factor"] = _int(section, "factor", where, minimum=1)
        if out["factor"] > 2:
            raise InputError("factor must be 1 or 2", where)
    elif kind == "representation":
        out["module"] = str(section.get("module", ""))
    return out


def normalize_step(step: Any, where: str) -> dict[str, Any]:
    if not isinstance(step, dict):
        raise InputError("pipeline steps must be tables", where)
    _check_keys(step, PIPELINE_KEYS, where)
    if step.get("op") not in PIPELINE_OPS:
        raise InputError(f"op must be one of {list(PIPELINE_OPS)}", where)
    out = {}
    for key, value in step.items():
        if key == "degree":
            out[key] = _int(step, "degree", where, minimum=-10**6)
        elif key == "followups":
            if not isinstance(value, bool):
                raise InputError("followups must be true or false", where)
            out[key] = value
        else:
            out[key] = str(value)
    return out


# ──────────────────────────────────────────────────────────────────────────────
# Building objects
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class Workspace:
    """Objects built from one document over one field."""

    field: Field
    algebras: dict[str, Algebra] = dc_field(default_factory=dict)
    modules: dict[str, RightModule] = dc_field(default_factory=dict)
    homs: dict[str, RingHom] = dc_field(default_factory=dict)
    quotient_maps: dict[str, RingHom] = dc_field(default_factory=dict)

    def algebra(self, name: str) -> Algebra:
        if name not in self.algebras:
            raise InputError(f"unknown algebra {name!r}; have {sorted(self.algebras)}")
        return self.algebras[name]

    def module(self, name: str) -> RightModule:
        if name not in self.modules:
            raise InputError(f"unknown module {name!r}; have {sorted(self.modules)}")
        return self.modules[name]

    def hom(self, name: str) -> RingHom:
        if name not in self.homs:
            raise InputError(f"unknown ring map {name!r}; have {sorted(self.homs)}")
        return self.homs[name]


def build(doc: InputDoc, *, field_spec: str | None = None, max_paths: int = DEFAULT_MAX_PATHS) -> Workspace:
    """Build every object of doc; field_spec overrides the document's field."""
    F = parse_field(field_spec or doc.field)
    ws = Workspace(F)
    for name in doc.algebras:
        _build_algebra(name, doc, ws, max_paths, ())
    pending_modules = dict(doc.modules)
    pending_homs = dict(doc.homs)
    # restrictions and representation maps refer to each other; resolve until stuck
    while pending_modules or pending_homs:
        progress = False
        for name, section in list(pending_modules.items()):
            if section["kind"] == "restriction" and (
                section["hom"] not in ws.homs or section["module"] not in ws.modules
            ):
                if section["hom"] not in ws.homs and section["hom"] not in pending_homs:
                    raise InputError(f"unknown ring map {section['hom']!r}", f"module.{name}")
                if section["module"] not in ws.modules and section["module"] not in pending_modules:
                    raise InputError(f"unknown module {section['module']!r}", f"module.{name}")
                continue
            if section["kind"] == "sum" and not all(m in ws.modules for m in section["modules"]):
                missing = [m for m in section["modules"] if m not in ws.modules and m not in pending_modules]
                if missing:
                    raise InputError(f"unknown modules {missing}", f"module.{name}")
                continue
            ws.modules[name] = _build_module(name, section, ws)
            del pending_modules[name]
            progress = True
        for name, section in list(pending_homs.items()):
            if section["kind"] == "representation" and section["module"] not in ws.modules:
                if section["module"] not in pending_modules:
                    raise InputError(f"unknown module {section['module']!r}", f"hom.{name}")
                continue
            ws.homs[name] = _build_hom(name, section, ws)
            del pending_homs[name]
            progress = True
        if not progress:
            raise InputError(f"circular references among {sorted(pending_modules) + sorted(pending_homs)}")
    logger.info("built %d algebras, %d modules, %d ring maps over %s",
                len(ws.algebras), len(ws.modules), len(ws.homs), F.name)
    return ws


def _element(a: Algebra, text: str, where: str):
    try:
        return parse_element(a, text)
    except (AlgebraError, ValueError) as e:
        raise InputError(f"cannot read element {text!r}: {e}", where) from e


def _to_mat(rows: list[list[str]], F: Field, shape: tuple[int, int], where: str) -> Mat:
    got = (len(rows), len(rows[0]) if rows else shape[1])
    if got != shape:
        raise InputError(f"matrix has shape {got}, expected {shape}", where)
    try:
        return Mat.from_rows(rows, F, shape[1])
    except ValueError as e:
        raise InputError(str(e), where) from e


def _build_algebra(name: str, doc: InputDoc, ws: Workspace, max_paths: int, stack: tuple[str, ...]) -> Algebra:
    if name in ws.algebras:
        return ws.algebras[name]
    where = f"algebras.{name}"
    if name in stack:
        raise InputError(f"algebra definitions loop through {' -> '.join(stack + (name,))}", where)
    if name not in doc.algebras:
        raise InputError(f"unknown algebra {name!r}", where)
    section = doc.algebras[name]
    F = ws.field
    kind = section["kind"]

    def dep(other: str) -> Algebra:
        return _build_algebra(other, doc, ws, max_paths, stack + (name,))

    try:
        if kind == "quiver":
            alg = from_quiver(_presentation(section, where), F, name=name, max_paths=max_paths)
        elif kind == "matrix":
            alg = matrix_algebra(section["n"], F)
        elif kind == "triangular":
            alg, _ = triangular_algebra(section["n"], F)
        elif kind == "product":
            alg, _, _ = product_algebra(dep(section["factors"][0]), dep(section["factors"][1]))
        elif kind == "structure_constants":
            alg = _structure_constants(section, F, name, where)
        elif kind == "corner":
            parent = dep(section["of"])
            alg = corner(parent, _element(parent, section["e"], where)).algebra
        else:
            parent = dep(section["of"])
            gens = [_element(parent, g, where) for g in section["ideal"]]
            alg, proj = quotient_by_ideal(parent, ideal_generated(parent, gens), name=name)
            ws.quotient_maps[name] = proj
    except AlgebraError as e:
        raise InputError(str(e), where) from e
    alg.name = name
    ws.algebras[name] = alg
    return alg


def _structure_constants(section: dict, F: Field, name: str, where: str) -> Algebra:
    labels = section["labels"]
    n = len(labels)
    if any("*" in lab for lab in labels):
        raise InputError("basis labels may not contain '*'", where)
    scratch = Algebra(F, labels, [[{}] * n] * n, (F.zero,) * n, check=False)
    table: list[list[dict]] = [[{} for _ in range(n)] for _ in range(n)]
    for key, expr in section["products"].items():
        parts = key.split("*")
        if len(parts) != 2:
            raise InputError(f'product key {key!r} must read "x*y"', where)
        i, j = (_label_index(scratch, p.strip(), where) for p in parts)
        v = _element(scratch, expr, where)
        table[i][j] = {k: c for k, c in enumerate(v) if c}
    unit = _element(scratch, section["unit"], where)
    idems = None
    if "idempotents" in section:
        idems = [_element(scratch, t, where) for t in section["idempotents"]]
    return Algebra(F, labels, table, unit, primitive_idempotents=idems, name=name)


def _label_index(a: Algebra, label: str, where: str) -> int:
    try:
        return a.index(label)
    except AlgebraError as e:
        raise InputError(str(e), where) from e


def _build_module(name: str, section: dict, ws: Workspace) -> RightModule:
    where = f"module.{name}"
    kind = section["kind"]
    F = ws.field
    try:
        if kind == "restriction":
            f = ws.hom(section["hom"])
            m = ws.module(section["module"])
            return restrict_along(f, m, name=name)
        if kind == "sum":
            return direct_sum([ws.module(n) for n in section["modules"]], name=name).module
        a = ws.algebra(section["algebra"])
        if kind == "representation":
            q = a.presentation
            if q is None:
                raise InputError(f"{a.name} is not given by a quiver", where)
            dims = section["dims"]
            maps = {}
            for arrow, rows in section["maps"].items():
                arr = q.arrow(arrow)
                shape = (dims.get(arr.target, 0), dims.get(arr.source, 0))
                maps[arrow] = _to_mat(rows, F, shape, f"{where}.maps.{arrow}")
            m = representation_module(a, dims, maps, name=name)
        elif kind == "simple":
            m = simple_at(a, section["vertex"])
        elif kind == "projective":
            names = _vertex_labels(a)
            if section["vertex"] not in names:
                raise InputError(f"unknown vertex {section['vertex']!r}; have {names}", where)
            m = indec_projectives(a)[names.index(section["vertex"])]
        elif kind == "regular":
            m = regular_module(a)
        elif kind == "preprojective":
            m = kronecker_preprojective(a, section["index"])
        else:
            d = section["dim"]
            missing = [lab for lab in a.labels if lab not in section["action"]]
            if missing:
                raise InputError(f"action matrices missing for {missing}", where)
            action = [_to_mat(section["action"][lab], F, (d, d), f"{where}.action.{lab}") for lab in a.labels]
            m = RightModule(a, d, action, name=name)
    except (ModuleError, AlgebraError) as e:
        raise InputError(str(e), where) from e
    m.name = name
    return m


def _vertex_labels(a: Algebra) -> list[str]:
    if a.presentation is not None:
        return list(a.presentation.vertices)
    return [str(k + 1) for k in range(len(a.require_idempotents("projective modules")))]


def _build_hom(name: str, section: dict, ws: Workspace) -> RingHom:
    where = f"hom.{name}"
    kind = section["kind"]
    F = ws.field
    src = ws.algebra(section["source"])
    tgt = ws.algebra(section["target"])
    try:
        if kind == "matrix":
            mat = _to_mat(section["matrix"], F, (src.dim, tgt.dim), where)
        elif kind == "images":
            rows = [tgt.zero() for _ in range(src.dim)]
            for label, expr in section["images"].items():
                rows[_label_index(src, label, where)] = _element(tgt, expr, where)
            mat = Mat.from_vectors(rows, F, tgt.dim)
        elif kind == "identity":
            if src is not tgt:
                raise InputError("identity needs source = target", where)
            mat = Mat.identity(src.dim, F)
        elif kind == "inclusion":
            rows = [tgt.basis_vector(_label_index(tgt, lab, where)) for lab in src.labels]
            mat = Mat.from_vectors(rows, F, tgt.dim)
        elif kind == "projection":
            suffix = f"|{section['factor']}"
            rows = [
                tgt.basis_vector(_label_index(tgt, lab[: -len(suffix)], where)) if lab.endswith(suffix) else tgt.zero()
                for lab in src.labels
            ]
            mat = Mat.from_vectors(rows, F, tgt.dim)
        elif kind == "quotient":
            proj = ws.quotient_maps.get(section["target"])
            if proj is None or proj.source is not src:
                raise InputError(f"{section['target']} is not a quotient of {section['source']}", where)
            mat = proj.matrix
        else:
            m = ws.module(section["module"])
            if m.algebra is not src:
                raise InputError(f"module {m.name} is not over {src.name}", where)
            if tgt.dim != m.dim * m.dim or tgt.labels != matrix_algebra(m.dim, F).labels:
                raise InputError(f"target must be the matrix algebra M{m.dim}", where)
            mat = representation_hom(m).matrix
        return RingHom(src, tgt, mat, name=name)
    except (AlgebraError, ModuleError) as e:
        raise InputError(str(e), where) from e
