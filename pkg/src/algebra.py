"""
Finite-dimensional unital associative algebras.

An algebra is a basis with structure constants. Constructions: path
algebras of quivers with monomial relations, matrix and triangular algebras,
products, opposites, corners eAe, subalgebras, two-sided ideals, quotients
and the Jacobson radical. Ring homomorphisms between algebras live here too,
since products and quotients hand them back.

Path convention: "beta*alpha" is alpha then beta. An arrow alpha: i -> j is
e_j alpha e_i, so e_i A is spanned by the paths ending at i.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .linalg import (
    QQ_FIELD,
    Field,
    FieldMismatchError,
    Mat,
    Subspace,
    UnsupportedFieldError,
    Vec,
    left_kernel,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_PATHS = 5000


class AlgebraError(ValueError):
    """Structure constants or constructions that do not give a unital associative algebra."""


class RelationError(AlgebraError):
    """A quiver relation is not an admissible composable monomial."""


class InfiniteDimensionalError(AlgebraError):
    """Path enumeration found a cycle that no relation kills."""


class MissingIdempotentsError(AlgebraError):
    """The operation needs a complete set of primitive idempotents."""


class RingHomError(AlgebraError):
    """A linear map between algebras is not unital or not multiplicative."""


# ──────────────────────────────────────────────────────────────────────────────
# Quiver presentations
# ──────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


def parse_path(text: str) -> tuple[str, ...]:
    """Split "beta*alpha" into its arrows, written left to right as in the text."""
    parts = tuple(p.strip() for p in text.split("*"))
    if not parts or any(not p for p in parts):
        raise RelationError(f"malformed path {text!r}")
    return parts


@dataclass(frozen=True)
class QuiverPresentation:
    """Vertices, arrows and monomial relations; relations are written in function order."""

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self) -> None:
        if not self.vertices:
            raise RelationError("quiver needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise RelationError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise RelationError("duplicate arrow names")
        clash = set(names) & {f"e{v}" for v in self.vertices}
        if clash:
            raise RelationError(f"arrow names clash with vertex idempotents: {sorted(clash)}")
        for a in self.arrows:
            for end in (a.source, a.target):
                if end not in self.vertices:
                    raise RelationError(f"arrow {a.name} uses unknown vertex {end!r}")
        for rel in self.relations:
            self.check_composable(rel)
            if len(rel) < 2:
                raise RelationError(f"relation {'*'.join(rel)} has length < 2")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise RelationError(f"unknown arrow {name!r}")

    def check_composable(self, word: Sequence[str]) -> None:
        """word is in function order: word[k] follows word[k+1]."""
        for left, right in zip(word, word[1:]):
            if self.arrow(right).target != self.arrow(left).source:
                raise RelationError(
                    f"{left}*{right} is not composable: {right} ends at {self.arrow(right).target}, "
                    f"{left} starts at {self.arrow(left).source}"
                )


def _path_label(traversal: Sequence[str]) -> str:
    return "*".join(reversed(traversal))


# ──────────────────────────────────────────────────────────────────────────────
# Algebra
# ──────────────────────────────────────────────────────────────────────────────

Table = tuple[tuple[dict[int, Any], ...], ...]


class Algebra:
    """Basis with structure constants: table[i][j] maps k to the coefficient of b_k in b_i b_j."""

    def __init__(
        self,
        field: Field,
        labels: Sequence[str],
        table: Sequence[Sequence[Mapping[int, Any]]],
        unit: Vec,
        *,
        presentation: QuiverPresentation | None = None,
        primitive_idempotents: Sequence[Vec] | None = None,
        name: str = "",
        check: bool = True,
    ):
        n = len(labels)
        if n == 0:
            raise AlgebraError("the zero algebra is excluded (1 != 0)")
        if len(set(labels)) != n:
            raise AlgebraError("basis labels must be distinct")
        if len(table) != n or any(len(row) != n for row in table):
            raise AlgebraError(f"structure table must be {n}x{n}")
        if len(unit) != n:
            raise AlgebraError("unit has wrong length")
        self.field = field
        self.labels = tuple(labels)
        self.table: Table = tuple(
            tuple({k: c for k, c in entry.items() if c} for entry in row) for row in table
        )
        self.unit = tuple(unit)
        self.presentation = presentation
        self.primitive_idempotents = (
            tuple(tuple(e) for e in primitive_idempotents) if primitive_idempotents is not None else None
        )
        self.name = name
        if check:
            self.verify()

    # ── basics ──

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"Algebra({self.name or '?'}, dim={self.dim}, field={self.field.name})"

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise AlgebraError(f"{self.name or 'algebra'} has no basis element {label!r}") from e

    def basis_vector(self, i: int) -> Vec:
        z, o = self.field.zero, self.field.one
        return tuple(o if k == i else z for k in range(self.dim))

    def zero(self) -> Vec:
        return (self.field.zero,) * self.dim

    def element(self, coeffs: Mapping[str, Any]) -> Vec:
        v = [self.field.zero] * self.dim
        for label, c in coeffs.items():
            v[self.index(label)] += self.field.convert(c)
        return tuple(v)

    def add(self, x: Vec, y: Vec) -> Vec:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x: Vec, y: Vec) -> Vec:
        return tuple(a - b for a, b in zip(x, y))

    def scale(self, c, x: Vec) -> Vec:
        return tuple(c * a for a in x)

    def mul(self, x: Vec, y: Vec) -> Vec:
        acc = [self.field.zero] * self.dim
        ynz = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.table[i]
            for j, b in ynz:
                ab = a * b
                for k, c in row[j].items():
                    acc[k] += ab * c
        return tuple(acc)

    def is_idempotent(self, e: Vec) -> bool:
        return self.mul(e, e) == tuple(e)

    def format_element(self, x: Vec) -> str:
        terms = []
        for lab, c in zip(self.labels, x):
            if not c:
                continue
            s = self.field.format(c)
            terms.append(lab if s == "1" else f"-{lab}" if s == "-1" else f"{s}*{lab}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    # ── verification ──

    def _times_basis(self, coeffs: Mapping[int, Any], k: int, left: bool) -> dict[int, Any]:
        out: dict[int, Any] = {}
        for m, c in coeffs.items():
            prod = self.table[k][m] if left else self.table[m][k]
            for r, d in prod.items():
                out[r] = out.get(r, self.field.zero) + c * d
        return {r: v for r, v in out.items() if v}

    def verify(self) -> None:
        """Associativity on all basis triples and the unit laws; raises AlgebraError."""
        n = self.dim
        for i in range(n):
            for j in range(n):
                bij = self.table[i][j]
                for k in range(n):
                    lhs = self._times_basis(bij, k, left=False)
                    rhs = self._times_basis(self.table[j][k], i, left=True)
                    if lhs != rhs:
                        raise AlgebraError(
                            f"not associative: ({self.labels[i]}*{self.labels[j]})*{self.labels[k]} "
                            f"!= {self.labels[i]}*({self.labels[j]}*{self.labels[k]})"
                        )
        for i in range(n):
            b = self.basis_vector(i)
            if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                raise AlgebraError(f"unit law fails on {self.labels[i]}")
        if self.primitive_idempotents is not None:
            self._verify_idempotents(self.primitive_idempotents)

    def _verify_idempotents(self, idems: Sequence[Vec]) -> None:
        total = self.zero()
        for a, e in enumerate(idems):
            if not any(e):
                raise AlgebraError("primitive idempotent list contains 0")
            for b, f in enumerate(idems):
                prod = self.mul(e, f)
                expected = tuple(e) if a == b else self.zero()
                if prod != expected:
                    raise AlgebraError("primitive idempotents must be orthogonal idempotents")
            total = self.add(total, e)
        if total != self.unit:
            raise AlgebraError("primitive idempotents must sum to the unit")

    # ── regular representations ──

    @cached_property
    def right_mats(self) -> tuple[Mat, ...]:
        """R_j with (x @ R_j) = x * b_j; right regular representation on row vectors."""
        n = self.dim
        mats = []
        for j in range(n):
            rows = []
            for i in range(n):
                row = [self.field.zero] * n
                for k, c in self.table[i][j].items():
                    row[k] = c
                rows.append(tuple(row))
            mats.append(Mat.from_vectors(rows, self.field, n))
        return tuple(mats)

    def right_matrix(self, x: Vec) -> Mat:
        """Matrix of y -> y * x."""
        return Mat.from_vectors([self.mul(self.basis_vector(k), x) for k in range(self.dim)], self.field, self.dim)

    def left_matrix(self, x: Vec) -> Mat:
        """Matrix of y -> x * y."""
        return Mat.from_vectors([self.mul(x, self.basis_vector(k)) for k in range(self.dim)], self.field, self.dim)

    @cached_property
    def idempotents(self) -> tuple[Vec, ...]:
        """Primitive idempotents when known, else just the unit."""
        return self.primitive_idempotents if self.primitive_idempotents is not None else (self.unit,)

    def require_idempotents(self, what: str) -> tuple[Vec, ...]:
        if self.primitive_idempotents is None:
            raise MissingIdempotentsError(
                f"{what} needs primitive idempotents on {self.name or 'the algebra'}; supply them in the input"
            )
        return self.primitive_idempotents

    @cached_property
    def peirce_basis(self) -> tuple[tuple[int, int, Vec], ...]:
        """Basis adapted to the idempotents: (i, j, v) with v in e_i A e_j."""
        out = []
        idems = self.idempotents
        basis = [self.basis_vector(k) for k in range(self.dim)]
        for i, ei in enumerate(idems):
            left = [self.mul(ei, b) for b in basis]
            for j, ej in enumerate(idems):
                block = [self.mul(v, ej) for v in left]
                sub = Subspace.span_vectors([v for v in block if any(v)], self.field, self.dim)
                out.extend((i, j, v) for v in sub.vectors())
        if len(out) != self.dim:
            raise AlgebraError("idempotents do not decompose the algebra")
        return tuple(out)

    @cached_property
    def projective_class(self) -> tuple[int, ...]:
        """For each primitive idempotent e_i, the first j with e_j A isomorphic to e_i A.

        For local corners e_i A e_i this holds iff e_i lies in e_i A e_j A e_i.
        """
        idems = self.idempotents
        blocks: dict[tuple[int, int], list[Vec]] = {}
        for i, j, v in self.peirce_basis:
            blocks.setdefault((i, j), []).append(v)
        out: list[int] = []
        for i, ei in enumerate(idems):
            rep = i
            for j in sorted(set(out)):
                there, back = blocks.get((i, j), []), blocks.get((j, i), [])
                products = [self.mul(x, y) for x in there for y in back]
                if products and Subspace.span_vectors(products, self.field, self.dim).contains(ei):
                    rep = j
                    break
            out.append(rep)
        return tuple(out)

    @property
    def cover_vertices(self) -> tuple[int, ...]:
        """One primitive idempotent per isomorphism class of indecomposable projectives."""
        return tuple(i for i, c in enumerate(self.projective_class) if c == i)

    @cached_property
    def opposite(self) -> "Algebra":
        return opposite(self)

    @cached_property
    def rad(self) -> "IdealBasis":
        return radical(self)


def _dense_to_dict(v: Vec) -> dict[int, Any]:
    return {k: c for k, c in enumerate(v) if c}


# ──────────────────────────────────────────────────────────────────────────────
# Constructions
# ──────────────────────────────────────────────────────────────────────────────

def from_quiver(
    q: QuiverPresentation,
    field: Field = QQ_FIELD,
    *,
    name: str = "",
    max_paths: int = DEFAULT_MAX_PATHS,
) -> Algebra:
    """Path algebra modulo monomial relations; basis = nonzero paths."""
    arrows = {a.name: a for a in q.arrows}
    rels = {tuple(reversed(r)) for r in q.relations}  # as traversals
    m = max((len(r) for r in rels), default=1)
    states = len(q.vertices) * max(1, len(q.arrows)) ** max(m - 1, 0)
    length_cap = states + m

    def killed(trav: tuple[str, ...]) -> bool:
        return any(trav[len(trav) - len(r):] == r for r in rels if len(r) <= len(trav))

    # (traversal, source, target); traversal empty for vertices
    paths: list[tuple[tuple[str, ...], str, str]] = [((), v, v) for v in q.vertices]
    frontier = [((a.name,), a.source, a.target) for a in q.arrows]
    length = 1
    while frontier:
        paths.extend(frontier)
        if len(paths) > max_paths:
            raise InfiniteDimensionalError(f"more than {max_paths} nonzero paths; raise max_paths or add relations")
        if length >= length_cap:
            raise InfiniteDimensionalError(f"cycle {_surviving_cycle(frontier[0][0], arrows, m)} survives all relations")
        nxt = []
        for trav, s, t in frontier:
            for a in q.arrows:
                if a.source != t:
                    continue
                cand = trav + (a.name,)
                if not killed(cand):
                    nxt.append((cand, s, a.target))
        frontier = nxt
        length += 1

    labels = [f"e{v}" if not trav else _path_label(trav) for trav, v, _ in paths]
    index = {trav if trav else ("", s): k for k, (trav, s, _) in enumerate(paths)}
    n = len(paths)
    F = field
    table: list[list[dict[int, Any]]] = [[{} for _ in range(n)] for _ in range(n)]
    for i, (ti, si, gi) in enumerate(paths):
        for j, (tj, sj, gj) in enumerate(paths):
            # b_i * b_j: b_j first, then b_i
            if gj != si:
                continue
            if not ti:
                table[i][j] = {j: F.one}
            elif not tj:
                table[i][j] = {i: F.one}
            else:
                k = index.get(tj + ti)
                if k is not None:
                    table[i][j] = {k: F.one}
    nv = len(q.vertices)
    unit = tuple(F.one if k < nv else F.zero for k in range(n))
    idems = [tuple(F.one if k == v else F.zero for k in range(n)) for v in range(nv)]
    logger.debug("from_quiver %s: %d vertices, %d arrows, dim %d", name, nv, len(q.arrows), n)
    return Algebra(F, labels, table, unit, presentation=q, primitive_idempotents=idems, name=name)


def _surviving_cycle(trav: tuple[str, ...], arrows: Mapping[str, Arrow], m: int) -> str:
    width = max(m - 1, 1)
    seen: dict[tuple, int] = {}
    for t in range(width - 1, len(trav)):
        state = (arrows[trav[t]].target,) + trav[t - width + 1: t + 1]
        if state in seen:
            return _path_label(trav[seen[state] + 1: t + 1])
        seen[state] = t
    return _path_label(trav)


def matrix_algebra(n: int, field: Field = QQ_FIELD) -> Algebra:
    """M_n(k) on matrix units E_ij with E_ij E_kl = delta_jk E_il."""
    if n < 1:
        raise AlgebraError("matrix algebra needs n >= 1")
    lab = (lambda i, j: f"E{i + 1}{j + 1}") if n < 10 else (lambda i, j: f"E{i + 1}_{j + 1}")
    labels = [lab(i, j) for i in range(n) for j in range(n)]
    N = n * n
    table = [[{} for _ in range(N)] for _ in range(N)]
    for i in range(n):
        for j in range(n):
            for l in range(n):
                table[i * n + j][j * n + l] = {i * n + l: field.one}
    unit = tuple(field.one if (k // n) == (k % n) else field.zero for k in range(N))
    idems = [tuple(field.one if k == i * n + i else field.zero for k in range(N)) for i in range(n)]
    return Algebra(field, labels, table, unit, primitive_idempotents=idems, name=f"M{n}")


def product_algebra(a: Algebra, b: Algebra) -> tuple[Algebra, "RingHom", "RingHom"]:
    """a x b with componentwise multiplication, plus both projections."""
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field.name} vs {b.field.name}")
    F = a.field
    na, nb = a.dim, b.dim
    labels = [f"{x}|1" for x in a.labels] + [f"{x}|2" for x in b.labels]
    N = na + nb
    table = [[{} for _ in range(N)] for _ in range(N)]
    for i in range(na):
        for j in range(na):
            table[i][j] = dict(a.table[i][j])
    for i in range(nb):
        for j in range(nb):
            table[na + i][na + j] = {na + k: c for k, c in b.table[i][j].items()}
    unit = a.unit + b.unit
    idems = None
    if a.primitive_idempotents is not None and b.primitive_idempotents is not None:
        idems = [e + b.zero() for e in a.primitive_idempotents] + [a.zero() + e for e in b.primitive_idempotents]
    name = f"{a.name or 'A'}x{b.name or 'B'}"
    p = Algebra(F, labels, table, unit, primitive_idempotents=idems, name=name)
    eye_a, eye_b = Mat.identity(na, F), Mat.identity(nb, F)
    proj_a = RingHom(p, a, eye_a.vstack(Mat.zeros(nb, na, F)), name=f"{name}->{a.name}")
    proj_b = RingHom(p, b, Mat.zeros(na, nb, F).vstack(eye_b), name=f"{name}->{b.name}")
    return p, proj_a, proj_b


def opposite(a: Algebra) -> Algebra:
    n = a.dim
    table = [[dict(a.table[j][i]) for j in range(n)] for i in range(n)]
    return Algebra(
        a.field, a.labels, table, a.unit,
        primitive_idempotents=a.primitive_idempotents,
        name=f"{a.name}^op" if not a.name.endswith("^op") else a.name[:-3],
    )


def _algebra_on_subspace(
    a: Algebra, space: Subspace, unit: Vec, name: str, idems: Sequence[Vec] | None
) -> Algebra:
    """Multiplication of a restricted to a multiplication-closed subspace with the given unit."""
    vecs = space.vectors()
    k = len(vecs)
    F = a.field

    def coords(v: Vec) -> Vec:
        return tuple(v[p] for p in space.pivots)

    table = []
    for x in vecs:
        row = []
        for y in vecs:
            prod = a.mul(x, y)
            if not space.contains(prod):
                raise AlgebraError("subspace is not closed under multiplication")
            row.append(_dense_to_dict(coords(prod)))
        table.append(row)
    labels = []
    for i, v in enumerate(vecs):
        nz = [j for j, c in enumerate(v) if c]
        labels.append(a.labels[nz[0]] if len(nz) == 1 and v[nz[0]] == F.one else f"c{i + 1}")
    if len(set(labels)) != k:
        labels = [f"c{i + 1}" for i in range(k)]
    sub_idems = [coords(e) for e in idems] if idems is not None else None
    return Algebra(F, labels, table, coords(unit), primitive_idempotents=sub_idems, name=name)


@dataclass(frozen=True)
class Corner:
    """eAe with its inclusion rows (corner coordinates -> parent coordinates)."""

    algebra: Algebra
    inclusion: Mat
    idempotent: Vec
    space: Subspace

    def to_parent(self, x: Vec) -> Vec:
        return (Mat.from_vectors([x], self.algebra.field, self.algebra.dim) @ self.inclusion).row(0)

    def from_parent(self, v: Vec) -> Vec:
        return tuple(v[p] for p in self.space.pivots)


def corner(a: Algebra, e: Vec) -> Corner:
    """eAe with unit e; the basis is the echelon basis of the image of x -> exe."""
    if not a.is_idempotent(e) or not any(e):
        raise AlgebraError(f"{a.format_element(e)} is not a nonzero idempotent")
    images = [a.mul(a.mul(e, a.basis_vector(i)), e) for i in range(a.dim)]
    space = Subspace.span_vectors([v for v in images if any(v)], a.field, a.dim)
    idems = None
    if a.primitive_idempotents is not None:
        inside = [p for p in a.primitive_idempotents if a.mul(e, p) == p and a.mul(p, e) == p]
        total = a.zero()
        for p in inside:
            total = a.add(total, p)
        if total == tuple(e):
            idems = inside
    alg = _algebra_on_subspace(a, space, e, f"{a.name}[e]", idems)
    return Corner(alg, space.basis, tuple(e), space)


def subalgebra(
    a: Algebra, vectors: Sequence[Vec], *, name: str = "", primitive_idempotents: Sequence[Vec] | None = None
) -> tuple[Algebra, "RingHom"]:
    """Unital subalgebra spanned by vectors (must contain 1), with its inclusion."""
    space = Subspace.span_vectors(list(vectors), a.field, a.dim)
    if not space.contains(a.unit):
        raise AlgebraError("subalgebra span must contain the unit")
    if primitive_idempotents is not None:
        for p in primitive_idempotents:
            if not space.contains(p):
                raise AlgebraError("primitive idempotent outside the subalgebra")
    alg = _algebra_on_subspace(a, space, a.unit, name or f"sub({a.name})", primitive_idempotents)
    return alg, RingHom(alg, a, space.basis, name=f"{alg.name}->{a.name}")


def triangular_algebra(n: int, field: Field = QQ_FIELD) -> tuple[Algebra, "RingHom"]:
    """Upper-triangular n x n matrices and their inclusion into M_n(k)."""
    m = matrix_algebra(n, field)
    vecs = [m.basis_vector(i * n + j) for i in range(n) for j in range(n) if i <= j]
    idems = [m.basis_vector(i * n + i) for i in range(n)]
    return subalgebra(m, vecs, name=f"T{n}", primitive_idempotents=idems)


# ──────────────────────────────────────────────────────────────────────────────
# Ideals
# ──────────────────────────────────────────────────────────────────────────────

class IdealBasis:
    """Two-sided ideal of parent held as an echelon subspace."""

    def __init__(self, parent: Algebra, space: Subspace):
        self.parent = parent
        self.space = space

    @property
    def dim(self) -> int:
        return self.space.dim

    def vectors(self) -> list[Vec]:
        return self.space.vectors()

    def contains(self, x: Vec) -> bool:
        return self.space.contains(x)

    def is_closed(self) -> bool:
        a = self.parent
        basis = [a.basis_vector(k) for k in range(a.dim)]
        prods = [a.mul(v, b) for v in self.vectors() for b in basis] + [
            a.mul(b, v) for v in self.vectors() for b in basis
        ]
        return not prods or self.space.contains_rows(Mat.from_vectors(prods, a.field, a.dim))

    def product(self, other: "IdealBasis") -> "IdealBasis":
        a = self.parent
        prods = [a.mul(x, y) for x in self.vectors() for y in other.vectors()]
        return IdealBasis(a, Subspace.span_vectors([p for p in prods if any(p)], a.field, a.dim))

    def square(self) -> "IdealBasis":
        return self.product(self)

    def is_idempotent(self) -> bool:
        return self.square().dim == self.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IdealBasis):
            return NotImplemented
        return self.parent is other.parent and self.space == other.space

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"IdealBasis(dim={self.dim} in {self.parent!r})"


def ideal_generated(a: Algebra, generators: Iterable[Vec]) -> IdealBasis:
    """Smallest two-sided ideal containing the generators."""
    basis = [a.basis_vector(k) for k in range(a.dim)]
    vecs: list[Vec] = []
    for g in generators:
        for x in (a.mul(b, g) for b in basis):
            if any(x):
                vecs.extend(p for p in (a.mul(x, b) for b in basis) if any(p))
    space = Subspace.span_vectors(vecs, a.field, a.dim)
    while True:
        grown = space.vectors() + [a.mul(v, b) for v in space.vectors() for b in basis] + [
            a.mul(b, v) for v in space.vectors() for b in basis
        ]
        nxt = Subspace.span_vectors([v for v in grown if any(v)], a.field, a.dim)
        if nxt.dim == space.dim:
            return IdealBasis(a, space)
        space = nxt


def quotient_by_ideal(a: Algebra, ideal: IdealBasis, *, name: str = "") -> tuple[Algebra, "RingHom"]:
    """a / ideal on the complement basis, plus the projection."""
    if ideal.contains(a.unit):
        raise AlgebraError("ideal contains the unit; the quotient would be the zero ring")
    space = ideal.space
    comp = space.complement
    proj = space.projection_matrix()
    rows = proj.rows()

    def image(v: Vec) -> Vec:
        acc = [a.field.zero] * len(comp)
        for k, c in enumerate(v):
            if c:
                for t, x in enumerate(rows[k]):
                    if x:
                        acc[t] += c * x
        return tuple(acc)

    table = []
    for i in comp:
        row = []
        for j in comp:
            row.append(_dense_to_dict(image(a.mul(a.basis_vector(i), a.basis_vector(j)))))
        table.append(row)
    idems = None
    if a.primitive_idempotents is not None:
        images = [image(e) for e in a.primitive_idempotents]
        idems = [e for e in images if any(e)]
    q = Algebra(
        a.field, [a.labels[c] for c in comp], table, image(a.unit),
        primitive_idempotents=idems, name=name or f"{a.name}/I",
    )
    return q, RingHom(a, q, proj, name=f"{a.name}->{q.name}")


def radical(a: Algebra) -> IdealBasis:
    """Jacobson radical as the kernel of the trace form (x, y) -> tr(L_xy)."""
    p = a.field.characteristic
    if p and p <= a.dim:
        raise UnsupportedFieldError(f"radical via trace form needs p > dim = {a.dim}, got p = {p}")
    n = a.dim
    F = a.field
    tr = [sum((c for k in range(n) for m, c in a.table[j][k].items() if m == k), F.zero) for j in range(n)]
    form = []
    for i in range(n):
        row = []
        for j in range(n):
            t = F.zero
            for m, c in a.table[i][j].items():
                t += c * tr[m]
            row.append(t)
        form.append(tuple(row))
    kern = left_kernel(Mat.from_vectors(form, F, n))
    rad = IdealBasis(a, Subspace.span(kern) if kern.nrows else Subspace.zero(n, F))
    power = rad
    for _ in range(n + 1):
        if power.dim == 0:
            break
        power = power.product(rad)
    else:
        raise AlgebraError("trace-form kernel is not nilpotent")
    logger.debug("radical of %s: dim %d", a.name, rad.dim)
    return rad


def is_basic_split(a: Algebra) -> bool:
    """a / rad(a) is commutative."""
    q, _ = quotient_by_ideal(a, a.rad)
    n = q.dim
    return all(q.table[i][j] == q.table[j][i] for i in range(n) for j in range(i + 1, n))


def parse_element(a: Algebra, text: str) -> Vec:
    """Parse "e2+e3", "2*alpha - 1/2*beta*alpha" or "0" into coordinates."""
    text = text.strip()
    if text == "0":
        return a.zero()
    v = [a.field.zero] * a.dim
    terms = re.findall(r"([+-]?)\s*([^+\-\s][^+\-]*)", text)
    if not terms:
        raise AlgebraError(f"cannot parse element {text!r}")
    for sign, body in terms:
        body = body.strip()
        coeff = Fraction(1)
        head, _, rest = body.partition("*")
        if rest:
            try:
                coeff = Fraction(head)
                body = rest.strip()
            except ValueError:
                pass
        if sign == "-":
            coeff = -coeff
        v[a.index(body)] += a.field.convert(coeff)
    return tuple(v)


# ──────────────────────────────────────────────────────────────────────────────
# Ring homomorphisms
# ──────────────────────────────────────────────────────────────────────────────

class RingHom:
    """Unital multiplicative linear map; row i of matrix is f(b_i) in target coordinates."""

    def __init__(self, source: Algebra, target: Algebra, matrix: Mat, *, name: str = "", check: bool = True):
        if source.field != target.field:
            raise FieldMismatchError(f"{source.field.name} vs {target.field.name}")
        if matrix.shape != (source.dim, target.dim):
            raise RingHomError(f"matrix shape {matrix.shape} != ({source.dim}, {target.dim})")
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name
        if check:
            self.verify()

    def __call__(self, x: Vec) -> Vec:
        rows = self.matrix.rows()
        acc = [self.target.field.zero] * self.target.dim
        for k, c in enumerate(x):
            if c:
                for t, y in enumerate(rows[k]):
                    if y:
                        acc[t] += c * y
        return tuple(acc)

    def image_of_basis(self, i: int) -> Vec:
        return self.matrix.row(i)

    def verify(self) -> None:
        s, t = self.source, self.target
        if self(s.unit) != t.unit:
            raise RingHomError(f"{self.name or 'map'} is not unital")
        imgs = [self.image_of_basis(i) for i in range(s.dim)]
        for i in range(s.dim):
            for j in range(s.dim):
                if t.mul(imgs[i], imgs[j]) != self(s.mul(s.basis_vector(i), s.basis_vector(j))):
                    raise RingHomError(
                        f"{self.name or 'map'} is not multiplicative on {s.labels[i]}*{s.labels[j]}"
                    )

    @cached_property
    def rank(self) -> int:
        return self.matrix.rank()

    @property
    def is_injective(self) -> bool:
        return self.rank == self.source.dim

    @property
    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def kernel(self) -> IdealBasis:
        k = left_kernel(self.matrix)
        space = Subspace.span(k) if k.nrows else Subspace.zero(self.source.dim, self.source.field)
        return IdealBasis(self.source, space)

    def image(self) -> Subspace:
        return Subspace.span(self.matrix)

    def compose(self, inner: "RingHom") -> "RingHom":
        """self after inner."""
        return RingHom(inner.source, self.target, inner.matrix @ self.matrix,
                       name=f"{self.name}.{inner.name}", check=False)

    @classmethod
    def identity(cls, a: Algebra) -> "RingHom":
        return cls(a, a, Mat.identity(a.dim, a.field), name=f"id_{a.name}", check=False)

    def __repr__(self) -> str:
        return f"RingHom({self.name or '?'}: {self.source.name} -> {self.target.name})"
