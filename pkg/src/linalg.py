"""
Exact linear algebra over the rationals and prime fields.

Everything else in the package reduces its questions to the kernels here:
reduced row-echelon forms, kernels, linear solves and Kronecker products.
Matrices wrap sympy's DomainMatrix in dense format; vectors are plain tuples
of domain elements and matrices act on row vectors from the right.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Sequence

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Vec = tuple


class FieldMismatchError(ValueError):
    """Operands were built over different fields."""


class UnsupportedFieldError(ValueError):
    """Field descriptor is malformed or the characteristic is not usable."""


@lru_cache(maxsize=None)
def _prime_domain(p: int):
    return GF(p, symmetric=False)


@dataclass(frozen=True)
class Field:
    """Ground field: characteristic 0 means QQ, otherwise GF(p)."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p != 0 and (p < 2 or not isprime(p)):
            raise UnsupportedFieldError(f"fp:{p} is not a prime field")

    @property
    def domain(self):
        if self.characteristic == 0:
            return QQ
        return _prime_domain(self.characteristic)

    @property
    def name(self) -> str:
        return "q" if self.characteristic == 0 else f"fp:{self.characteristic}"

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def convert(self, x: Any):
        """Coerce ints, Fractions, strings like "1/2" and domain elements."""
        K = self.domain
        if isinstance(x, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(x, int):
            return K.convert(x)
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"not a field element: {x!r}") from e
        if isinstance(x, Fraction):
            den = K.convert(x.denominator)
            if not den:
                raise ValueError(f"denominator of {x} vanishes in {self.name}")
            return K.convert(x.numerator) / den
        if K.of_type(x):
            return x
        return K.convert(x)

    def format(self, x) -> str:
        if self.characteristic == 0:
            return str(QQ.to_sympy(x))
        return str(int(x))

    def to_plain(self, x) -> int | str:
        """JSON-friendly rendering: ints stay ints, rationals become "p/q"."""
        s = self.format(x)
        return int(s) if "/" not in s else s


QQ_FIELD = Field(0)


def parse_field(spec: str) -> Field:
    """Parse a field descriptor: "q" for the rationals, "fp:P" for GF(P)."""
    spec = spec.strip().lower()
    if spec in ("q", "qq"):
        return QQ_FIELD
    if spec.startswith("fp:"):
        try:
            p = int(spec[3:])
        except ValueError as e:
            raise UnsupportedFieldError(f"bad prime in field spec {spec!r}") from e
        return Field(p)
    raise UnsupportedFieldError(f"unknown field spec {spec!r}; use q or fp:P")


class Mat:
    """Immutable dense matrix over a Field."""

    __slots__ = ("_dm", "field", "_rows")

    def __init__(self, dm: DomainMatrix, field: Field):
        self._dm = dm.to_dense()
        self.field = field
        self._rows: list[tuple] | None = None

    # ── constructors ──

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Any]], field: Field, ncols: int | None = None) -> "Mat":
        conv = [tuple(field.convert(x) for x in r) for r in rows]
        if ncols is None:
            if not conv:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(conv[0])
        for r in conv:
            if len(r) != ncols:
                raise ValueError(f"ragged matrix: expected {ncols} columns, got {len(r)}")
        dm = DomainMatrix([list(r) for r in conv], (len(conv), ncols), field.domain)
        m = cls(dm, field)
        m._rows = conv
        return m

    @classmethod
    def from_vectors(cls, vectors: Sequence[Vec], field: Field, ncols: int) -> "Mat":
        """Rows given as tuples already in the field's domain."""
        dm = DomainMatrix([list(v) for v in vectors], (len(vectors), ncols), field.domain)
        m = cls(dm, field)
        m._rows = [tuple(v) for v in vectors]
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field) -> "Mat":
        z = field.zero
        return cls.from_vectors([(z,) * ncols for _ in range(nrows)], field, ncols)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Mat":
        z, o = field.zero, field.one
        return cls.from_vectors([tuple(o if i == j else z for j in range(n)) for i in range(n)], field, n)

    @classmethod
    def unit_rows(cls, indices: Sequence[int], n: int, field: Field) -> "Mat":
        """Rows are the standard basis vectors at the given positions."""
        z, o = field.zero, field.one
        return cls.from_vectors([tuple(o if j == i else z for j in range(n)) for i in indices], field, n)

    @classmethod
    def block_diag(cls, blocks: Sequence["Mat"], field: Field) -> "Mat":
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        z = field.zero
        rows: list[tuple] = []
        c0 = 0
        for b in blocks:
            for r in b.rows():
                rows.append((z,) * c0 + r + (z,) * (nc - c0 - b.ncols))
            c0 += b.ncols
        if not rows:
            return cls.zeros(nr, nc, field)
        return cls.from_vectors(rows, field, nc)

    # ── access ──

    @property
    def shape(self) -> tuple[int, int]:
        return self._dm.shape

    @property
    def nrows(self) -> int:
        return self._dm.shape[0]

    @property
    def ncols(self) -> int:
        return self._dm.shape[1]

    @property
    def domain_matrix(self) -> DomainMatrix:
        return self._dm

    def rows(self) -> list[tuple]:
        if self._rows is None:
            self._rows = [tuple(r) for r in self._dm.to_list()] if self.nrows else []
        return self._rows

    def row(self, i: int) -> Vec:
        return self.rows()[i]

    def column(self, j: int) -> Vec:
        return tuple(r[j] for r in self.rows())

    def entry(self, i: int, j: int):
        return self.rows()[i][j]

    def is_zero(self) -> bool:
        return all(not x for r in self.rows() for x in r)

    # ── arithmetic ──

    def _check_field(self, other: "Mat") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field.name} vs {other.field.name}")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check_field(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.ncols == 0 or self.nrows == 0 or other.ncols == 0:
            return Mat.zeros(self.nrows, other.ncols, self.field)
        return Mat(self._dm.matmul(other._dm), self.field)

    def __add__(self, other: "Mat") -> "Mat":
        self._check_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        if 0 in self.shape:
            return self
        return Mat(self._dm.add(other._dm), self.field)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        if 0 in self.shape:
            return self
        return Mat(self._dm.sub(other._dm), self.field)

    def __neg__(self) -> "Mat":
        if 0 in self.shape:
            return self
        return Mat(self._dm.neg(), self.field)

    def scale(self, c) -> "Mat":
        if 0 in self.shape:
            return self
        return Mat(self._dm.scalarmul(self.field.convert(c)), self.field)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows() == other.rows()

    __hash__ = None  # type: ignore[assignment]

    @property
    def T(self) -> "Mat":
        if 0 in self.shape:
            return Mat.zeros(self.ncols, self.nrows, self.field)
        return Mat(self._dm.transpose(), self.field)

    def extract(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        src = self.rows()
        return Mat.from_vectors([tuple(src[i][j] for j in cols) for i in rows], self.field, len(cols))

    def hstack(self, *others: "Mat") -> "Mat":
        ncols = self.ncols + sum(o.ncols for o in others)
        for o in others:
            self._check_field(o)
            if o.nrows != self.nrows:
                raise ValueError("hstack needs equal row counts")
        rows = [sum((o.row(i) for o in others), self.row(i)) for i in range(self.nrows)]
        return Mat.from_vectors(rows, self.field, ncols)

    def vstack(self, *others: "Mat") -> "Mat":
        rows = list(self.rows())
        for o in others:
            self._check_field(o)
            if o.ncols != self.ncols:
                raise ValueError("vstack needs equal column counts")
            rows.extend(o.rows())
        return Mat.from_vectors(rows, self.field, self.ncols)

    def rank(self) -> int:
        return rref(self).rank

    def trace(self):
        t = self.field.zero
        for i in range(min(self.shape)):
            t += self.entry(i, i)
        return t

    def inverse(self) -> "Mat":
        n, m = self.shape
        if n != m:
            raise ValueError("inverse of a non-square matrix")
        if n == 0:
            return self
        return Mat(self._dm.inv(), self.field)

    def flatten(self) -> Vec:
        return tuple(x for r in self.rows() for x in r)

    def to_plain(self) -> list[list]:
        return [[self.field.to_plain(x) for x in r] for r in self.rows()]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.rows())
        return f"Mat{self.shape}[{body}]"


# ──────────────────────────────────────────────────────────────────────────────
# Kernels
# ──────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RrefResult:
    reduced: Mat
    pivot_columns: tuple[int, ...]
    rank: int


def rref(m: Mat) -> RrefResult:
    """Reduced row-echelon form with leftmost-pivot elimination."""
    if m.nrows == 0 or m.ncols == 0:
        return RrefResult(m, (), 0)
    red, pivots = m.domain_matrix.rref()
    return RrefResult(Mat(red, m.field), tuple(pivots), len(pivots))


def kernel_basis(m: Mat) -> Mat:
    """Columns form a basis of {x : m @ x = 0}."""
    n = m.ncols
    res = rref(m)
    red = res.reduced.rows()
    pivots = res.pivot_columns
    F = m.field
    cols: list[tuple] = []
    for c in range(n):
        if c in pivots:
            continue
        v = [F.zero] * n
        v[c] = F.one
        for i, p in enumerate(pivots):
            v[p] = -red[i][c]
        cols.append(tuple(v))
    if not cols:
        return Mat.zeros(n, 0, F)
    return Mat.from_vectors(cols, F, n).T


def left_kernel(m: Mat) -> Mat:
    """Rows form a basis of {x : x @ m = 0}."""
    k = kernel_basis(m.T)
    if k.ncols == 0:
        return Mat.zeros(0, m.nrows, m.field)
    return k.T


def solve(m: Mat, b: Mat) -> Mat | None:
    """Some column x with m @ x = b, or None when the system is inconsistent."""
    if b.nrows != m.nrows:
        raise ValueError(f"solve: {m.nrows} rows against right-hand side of {b.nrows}")
    F = m.field
    n = m.ncols
    if m.nrows == 0:
        return Mat.zeros(n, b.ncols, F)
    res = rref(m.hstack(b))
    if any(p >= n for p in res.pivot_columns):
        return None
    red = res.reduced.rows()
    out = [[F.zero] * b.ncols for _ in range(n)]
    for i, p in enumerate(res.pivot_columns):
        for j in range(b.ncols):
            out[p][j] = red[i][n + j]
    if n == 0:
        return Mat.zeros(0, b.ncols, F)
    return Mat.from_vectors([tuple(r) for r in out], F, b.ncols)


def kron(m: Mat, n: Mat) -> Mat:
    """Kronecker product; kron(x, y) @ kron(P, Q) = kron(x @ P, y @ Q)."""
    m._check_field(n)
    rows: list[tuple] = []
    nrows = n.rows()
    for mr in m.rows():
        for nr in nrows:
            rows.append(tuple(a * b for a in mr for b in nr))
    return Mat.from_vectors(rows, m.field, m.ncols * n.ncols) if rows else Mat.zeros(
        m.nrows * n.nrows, m.ncols * n.ncols, m.field
    )


def combine(coeffs: Sequence, mats: Sequence[Mat], shape: tuple[int, int], field: Field) -> Mat:
    """Linear combination sum(c_i * M_i)."""
    acc = Mat.zeros(shape[0], shape[1], field)
    for c, mat in zip(coeffs, mats):
        if c:
            acc = acc + mat.scale(c)
    return acc


# ──────────────────────────────────────────────────────────────────────────────
# Subspaces
# ──────────────────────────────────────────────────────────────────────────────

class Subspace:
    """Row space held in reduced echelon form.

    Coordinates of a member are read off its pivot columns; reduction modulo
    the subspace zeroes the pivot columns, so quotient coordinates live on the
    non-pivot columns.
    """

    __slots__ = ("basis", "pivots", "ambient", "field")

    def __init__(self, basis: Mat, pivots: tuple[int, ...]):
        self.basis = basis
        self.pivots = pivots
        self.ambient = basis.ncols
        self.field = basis.field

    @classmethod
    def span(cls, rows: Mat) -> "Subspace":
        res = rref(rows)
        return cls(res.reduced.extract(range(res.rank), range(rows.ncols)), res.pivot_columns)

    @classmethod
    def span_vectors(cls, vectors: Sequence[Vec], field: Field, n: int) -> "Subspace":
        if not vectors:
            return cls.zero(n, field)
        return cls.span(Mat.from_vectors(list(vectors), field, n))

    @classmethod
    def zero(cls, n: int, field: Field) -> "Subspace":
        return cls(Mat.zeros(0, n, field), ())

    @classmethod
    def full(cls, n: int, field: Field) -> "Subspace":
        return cls(Mat.identity(n, field), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def complement(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(c for c in range(self.ambient) if c not in piv)

    def vectors(self) -> list[Vec]:
        return self.basis.rows()

    def reduce(self, m: Mat) -> Mat:
        if not self.pivots or m.nrows == 0:
            return m
        return m - m.extract(range(m.nrows), self.pivots) @ self.basis

    def contains_rows(self, m: Mat) -> bool:
        return self.reduce(m).is_zero()

    def contains(self, v: Vec) -> bool:
        return self.contains_rows(Mat.from_vectors([v], self.field, self.ambient))

    def coords(self, m: Mat) -> Mat:
        """Coordinates of member rows in this basis."""
        return m.extract(range(m.nrows), self.pivots)

    def quotient_coords(self, m: Mat) -> Mat:
        """Coordinates of rows modulo the subspace on the complement columns."""
        return self.reduce(m).extract(range(m.nrows), self.complement)

    def projection_matrix(self) -> Mat:
        """Matrix of x -> quotient coordinates of x."""
        return self.quotient_coords(Mat.identity(self.ambient, self.field))

    def join(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis.vstack(other.basis))

    def issubset(self, other: "Subspace") -> bool:
        return other.contains_rows(self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.pivots == other.pivots and self.basis == other.basis

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


class Coordinates:
    """Coordinates with respect to an arbitrary list of independent rows."""

    def __init__(self, rows: Mat):
        self.rows = rows
        res = rref(rows)
        if res.rank != rows.nrows:
            raise ValueError("Coordinates needs linearly independent rows")
        self.pivots = res.pivot_columns
        self._inv = rows.extract(range(rows.nrows), self.pivots).inverse() if rows.nrows else rows

    def of(self, m: Mat) -> Mat:
        if self.rows.nrows == 0:
            return Mat.zeros(m.nrows, 0, m.field)
        return m.extract(range(m.nrows), self.pivots) @ self._inv


def extend_basis(base: Subspace, candidates: Sequence[Vec]) -> list[int]:
    """Indices of candidates that extend base to span base + candidates, greedily in order."""
    chosen: list[int] = []
    current = base
    for i, v in enumerate(candidates):
        if not current.contains(v):
            chosen.append(i)
            current = current.join(Subspace.span_vectors([v], base.field, base.ambient))
    return chosen
