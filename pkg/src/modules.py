"""
Modules as explicit representations.

Right modules act on row vectors: x.a = x @ rho(a), so rho(ab) = rho(a) rho(b).
Hom spaces are solved block by block along the algebra's idempotents, minimal
projective resolutions come from projective covers of tops, and Ext/Tor are
read off Hom(P, N) = sum N e_i and P (x) N = sum e_i N.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

from .algebra import (
    Algebra,
    MissingIdempotentsError,
    RingHom,
    corner,
    ideal_generated,
    is_basic_split,
    matrix_algebra,
    quotient_by_ideal,
)
from .linalg import (
    Coordinates,
    Field,
    Mat,
    Subspace,
    Vec,
    combine,
    extend_basis,
    kernel_basis,
    kron,
    left_kernel,
)

logger = logging.getLogger(__name__)


class ModuleError(ValueError):
    """Invalid representation or mismatched modules."""


class ResolutionIncompleteError(ValueError):
    """A resolution stopped at the cutoff before the requested degree."""


@dataclass(frozen=True)
class DimBound:
    """A dimension that is exact, or only known to be at least value."""

    value: int
    exact: bool = True

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">= {self.value}"

    def to_plain(self) -> int | str:
        return self.value if self.exact else f">={self.value}"


# ──────────────────────────────────────────────────────────────────────────────
# Representations
# ──────────────────────────────────────────────────────────────────────────────

class RightModule:
    """Right module given by one action matrix per algebra basis element."""

    def __init__(self, algebra: Algebra, dim: int, action: Sequence[Mat], *, name: str = "", check: bool = True):
        if len(action) != algebra.dim:
            raise ModuleError(f"need {algebra.dim} action matrices, got {len(action)}")
        for k, mat in enumerate(action):
            if mat.shape != (dim, dim):
                raise ModuleError(f"action of {algebra.labels[k]} has shape {mat.shape}, expected ({dim}, {dim})")
            if mat.field != algebra.field:
                raise ModuleError("action matrices over the wrong field")
        self.algebra = algebra
        self.dim = dim
        self.action = tuple(action)
        self.name = name
        self._resolution: "ProjResolution | None" = None
        if check:
            self.verify()

    def __repr__(self) -> str:
        return f"RightModule({self.name or '?'}, dim={self.dim} over {self.algebra.name})"

    @property
    def field(self) -> Field:
        return self.algebra.field

    def rho(self, x: Vec) -> Mat:
        nz = [k for k, c in enumerate(x) if c]
        if len(nz) == 1 and x[nz[0]] == self.field.one:
            return self.action[nz[0]]
        return combine([x[k] for k in nz], [self.action[k] for k in nz], (self.dim, self.dim), self.field)

    def act(self, v: Vec, x: Vec) -> Vec:
        return (Mat.from_vectors([v], self.field, self.dim) @ self.rho(x)).row(0)

    def verify(self) -> None:
        _verify_action(self.algebra, self.dim, self.action, left=False, what=self.name or "module")

    @cached_property
    def peirce(self) -> tuple[Subspace, ...]:
        """M e_i for each idempotent of the algebra."""
        return tuple(Subspace.span(self.rho(e)) if self.dim else Subspace.zero(0, self.field)
                     for e in self.algebra.idempotents)

    @cached_property
    def peirce_proj(self) -> tuple[Mat, ...]:
        """x -> coordinates of x e_i in the basis of M e_i."""
        return tuple(self.rho(e).extract(range(self.dim), s.pivots) for e, s in zip(self.algebra.idempotents, self.peirce))

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.peirce)


class LeftModule:
    """Left module: a.y = y @ lam(a), so lam(ab) = lam(b) lam(a)."""

    def __init__(self, algebra: Algebra, dim: int, action: Sequence[Mat], *, name: str = "", check: bool = True):
        if len(action) != algebra.dim:
            raise ModuleError(f"need {algebra.dim} action matrices, got {len(action)}")
        self.algebra = algebra
        self.dim = dim
        self.action = tuple(action)
        self.name = name
        if check:
            _verify_action(algebra, dim, self.action, left=True, what=name or "left module")

    def __repr__(self) -> str:
        return f"LeftModule({self.name or '?'}, dim={self.dim} over {self.algebra.name})"

    @property
    def field(self) -> Field:
        return self.algebra.field

    def lam(self, x: Vec) -> Mat:
        nz = [k for k, c in enumerate(x) if c]
        return combine([x[k] for k in nz], [self.action[k] for k in nz], (self.dim, self.dim), self.field)

    @cached_property
    def peirce(self) -> tuple[Subspace, ...]:
        """e_i N for each idempotent."""
        return tuple(Subspace.span(self.lam(e)) if self.dim else Subspace.zero(0, self.field)
                     for e in self.algebra.idempotents)

    def as_right(self) -> RightModule:
        """The same space as a right module over the opposite algebra."""
        return RightModule(self.algebra.opposite, self.dim, self.action, name=self.name, check=False)


class Bimodule:
    """left_algebra-right_algebra bimodule with commuting actions."""

    def __init__(
        self,
        left_algebra: Algebra,
        right_algebra: Algebra,
        dim: int,
        left_action: Sequence[Mat],
        right_action: Sequence[Mat],
        *,
        name: str = "",
        check: bool = True,
    ):
        self.left = LeftModule(left_algebra, dim, left_action, name=name, check=check)
        self.right = RightModule(right_algebra, dim, right_action, name=name, check=check)
        self.dim = dim
        self.name = name
        if check:
            for lm in self.left.action:
                for rm in self.right.action:
                    if lm @ rm != rm @ lm:
                        raise ModuleError(f"left and right actions on {name or 'bimodule'} do not commute")

    @property
    def left_algebra(self) -> Algebra:
        return self.left.algebra

    @property
    def right_algebra(self) -> Algebra:
        return self.right.algebra


def _verify_action(a: Algebra, dim: int, action: Sequence[Mat], *, left: bool, what: str) -> None:
    F = a.field
    eye = Mat.identity(dim, F)
    unit = combine(a.unit, action, (dim, dim), F)
    if unit != eye:
        raise ModuleError(f"{what}: the unit does not act as the identity")
    for i in range(a.dim):
        for j in range(a.dim):
            prod = a.table[i][j]
            expected = combine([prod[k] for k in prod], [action[k] for k in prod], (dim, dim), F)
            got = action[j] @ action[i] if left else action[i] @ action[j]
            if got != expected:
                raise ModuleError(f"{what}: action is not multiplicative on {a.labels[i]}*{a.labels[j]}")


class ModuleMap:
    """Module homomorphism x -> x @ matrix."""

    def __init__(self, source: RightModule, target: RightModule, matrix: Mat, *, check: bool = True):
        if matrix.shape != (source.dim, target.dim):
            raise ModuleError(f"map matrix shape {matrix.shape} != ({source.dim}, {target.dim})")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            _same_algebra(source, target)
            for k in range(source.algebra.dim):
                if source.action[k] @ matrix != matrix @ target.action[k]:
                    raise ModuleError(f"map does not commute with {source.algebra.labels[k]}")

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """self after inner."""
        return ModuleMap(inner.source, self.target, inner.matrix @ self.matrix, check=False)

    @cached_property
    def rank(self) -> int:
        return self.matrix.rank()

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.rank == self.source.dim

    def __repr__(self) -> str:
        return f"ModuleMap({self.source.name} -> {self.target.name}, rank {self.rank})"


def _same_algebra(m, n) -> None:
    if m.algebra is not n.algebra:
        raise ModuleError(f"modules over different algebras: {m.algebra.name} vs {n.algebra.name}")


def zero_module(a: Algebra) -> RightModule:
    empty = Mat.zeros(0, 0, a.field)
    return RightModule(a, 0, [empty] * a.dim, name="0", check=False)


def regular_module(a: Algebra) -> RightModule:
    return RightModule(a, a.dim, a.right_mats, name=a.name or "A", check=False)


def representation_module(a: Algebra, dims: dict[str, int], maps: dict[str, Mat], *, name: str = "") -> RightModule:
    """Module over a path algebra from vertex dimensions and one matrix per arrow.

    The matrix of an arrow i -> j has shape dim_j x dim_i: right multiplication
    by the arrow sends M e_j to M e_i.
    """
    q = a.presentation
    if q is None:
        raise ModuleError("representation modules need an algebra given by a quiver")
    F = a.field
    for v in dims:
        if v not in q.vertices:
            raise ModuleError(f"unknown vertex {v!r}")
    d = {v: int(dims.get(v, 0)) for v in q.vertices}
    off, total = {}, 0
    for v in q.vertices:
        off[v] = total
        total += d[v]
    arrow_mats: dict[str, Mat] = {}
    for arr in q.arrows:
        mat = maps.get(arr.name)
        if mat is None:
            mat = Mat.zeros(d[arr.target], d[arr.source], F)
        if mat.shape != (d[arr.target], d[arr.source]):
            raise ModuleError(
                f"{name or 'module'}: arrow {arr.name} needs a {d[arr.target]}x{d[arr.source]} matrix, got {mat.shape}"
            )
        arrow_mats[arr.name] = mat
    extra = set(maps) - set(arrow_mats)
    if extra:
        raise ModuleError(f"unknown arrows {sorted(extra)}")

    def embed(block: Mat, row_v: str, col_v: str) -> Mat:
        rows = [[F.zero] * total for _ in range(total)]
        for r, row in enumerate(block.rows()):
            for c, x in enumerate(row):
                rows[off[row_v] + r][off[col_v] + c] = x
        return Mat.from_vectors([tuple(r) for r in rows], F, total)

    action = []
    nv = len(q.vertices)
    for k, label in enumerate(a.labels):
        if k < nv:
            v = q.vertices[k]
            action.append(embed(Mat.identity(d[v], F), v, v))
            continue
        traversal = tuple(reversed(label.split("*")))
        mat = Mat.identity(d[q.arrow(traversal[-1]).target], F)
        for name_ in reversed(traversal):
            mat = mat @ arrow_mats[name_]
        action.append(embed(mat, q.arrow(traversal[-1]).target, q.arrow(traversal[0]).source))
    return RightModule(a, total, action, name=name)


def simple_at(a: Algebra, vertex: str) -> RightModule:
    return representation_module(a, {vertex: 1}, {}, name=f"S{vertex}")


def kronecker_preprojective(a: Algebra, i: int) -> RightModule:
    """Preprojective Kronecker module P_i of dimension vector (i, i+1).

    The target of the two arrows carries dimension i, their source i+1; the
    arrows act as [I | 0] and [0 | I].
    """
    q = a.presentation
    if q is None or len(q.vertices) != 2 or len(q.arrows) != 2 or q.relations:
        raise ModuleError("kronecker_preprojective needs the Kronecker quiver")
    first, second = q.arrows
    if (first.source, first.target) != (second.source, second.target) or first.source == first.target:
        raise ModuleError("kronecker_preprojective needs two parallel arrows between distinct vertices")
    if i < 0:
        raise ModuleError("preprojective index must be >= 0")
    F = a.field
    z, o = F.zero, F.one
    left = Mat.from_vectors([tuple(o if c == r else z for c in range(i + 1)) for r in range(i)], F, i + 1) if i else Mat.zeros(0, 1, F)
    right = Mat.from_vectors([tuple(o if c == r + 1 else z for c in range(i + 1)) for r in range(i)], F, i + 1) if i else Mat.zeros(0, 1, F)
    return representation_module(
        a, {first.target: i, first.source: i + 1}, {first.name: left, second.name: right}, name=f"P{i}"
    )


# ──────────────────────────────────────────────────────────────────────────────
# Sub, quotient, sum
# ──────────────────────────────────────────────────────────────────────────────

def submodule(m: RightModule, space: Subspace, *, name: str = "") -> tuple[RightModule, ModuleMap]:
    """Module on an invariant subspace, with its inclusion."""
    if space.dim == 0:
        z = zero_module(m.algebra)
        return z, ModuleMap(z, m, Mat.zeros(0, m.dim, m.field), check=False)
    action = [space.coords(space.basis @ r) for r in m.action]
    sub = RightModule(m.algebra, space.dim, action, name=name, check=False)
    return sub, ModuleMap(sub, m, space.basis, check=False)


def quotient_module(m: RightModule, space: Subspace, *, name: str = "") -> tuple[RightModule, ModuleMap]:
    """m / space on the complement coordinates, with the projection."""
    comp = space.complement
    action = [space.quotient_coords(r.extract(comp, range(m.dim))) for r in m.action]
    q = RightModule(m.algebra, len(comp), action, name=name, check=False)
    return q, ModuleMap(m, q, space.projection_matrix(), check=False)


def kernel_module(f: ModuleMap) -> tuple[RightModule, ModuleMap]:
    k = left_kernel(f.matrix)
    space = Subspace.span(k) if k.nrows else Subspace.zero(f.source.dim, f.source.field)
    return submodule(f.source, space, name="ker")


def image_module(f: ModuleMap) -> tuple[RightModule, ModuleMap]:
    space = Subspace.span(f.matrix) if f.source.dim else Subspace.zero(f.target.dim, f.target.field)
    return submodule(f.target, space, name="im")


def cokernel_module(f: ModuleMap) -> tuple[RightModule, ModuleMap]:
    space = Subspace.span(f.matrix) if f.source.dim else Subspace.zero(f.target.dim, f.target.field)
    return quotient_module(f.target, space, name="coker")


@dataclass
class DirectSum:
    module: RightModule
    summands: tuple[RightModule, ...]
    inclusions: tuple[ModuleMap, ...]
    projections: tuple[ModuleMap, ...]

    @property
    def offsets(self) -> tuple[int, ...]:
        out, t = [], 0
        for s in self.summands:
            out.append(t)
            t += s.dim
        return tuple(out)


def direct_sum(ms: Sequence[RightModule], *, name: str = "") -> DirectSum:
    if not ms:
        raise ModuleError("direct_sum needs at least one module")
    a = ms[0].algebra
    for m in ms:
        _same_algebra(ms[0], m)
    F = a.field
    action = [Mat.block_diag([m.action[k] for m in ms], F) for k in range(a.dim)]
    total = sum(m.dim for m in ms)
    s = RightModule(a, total, action, name=name or "+".join(m.name or "?" for m in ms), check=False)
    incs, projs = [], []
    off = 0
    for m in ms:
        inc = Mat.zeros(0, total, F)
        if m.dim:
            inc = Mat.zeros(m.dim, off, F).hstack(Mat.identity(m.dim, F), Mat.zeros(m.dim, total - off - m.dim, F))
        incs.append(ModuleMap(m, s, inc, check=False))
        projs.append(ModuleMap(s, m, inc.T, check=False))
        off += m.dim
    return DirectSum(s, tuple(ms), tuple(incs), tuple(projs))


def power(m: RightModule, k: int) -> DirectSum:
    return direct_sum([m] * k, name=f"{m.name}^{k}")


def restrict_along(f: RingHom, m: RightModule, *, name: str = "") -> RightModule:
    """Restriction of scalars: rho'(b) = rho(f(b))."""
    if m.algebra is not f.target:
        raise ModuleError("module is not over the target of the ring map")
    action = [m.rho(f.image_of_basis(i)) for i in range(f.source.dim)]
    return RightModule(f.source, m.dim, action, name=name or m.name, check=False)


def left_regular_via(f: RingHom) -> LeftModule:
    """Target algebra as a left module over the source: a.y = f(a) y."""
    B = f.target
    action = [B.left_matrix(f.image_of_basis(i)) for i in range(f.source.dim)]
    return LeftModule(f.source, B.dim, action, name=B.name, check=False)


def target_bimodule(f: RingHom) -> Bimodule:
    """B as an A-B bimodule via f."""
    B = f.target
    left = [B.left_matrix(f.image_of_basis(i)) for i in range(f.source.dim)]
    return Bimodule(f.source, B, B.dim, left, B.right_mats, name=B.name, check=False)


def representation_hom(m: RightModule) -> RingHom:
    """The representation A -> M_d(k), d = dim m, as a ring map; E_rc sits at index r*d + c."""
    if m.dim == 0:
        raise ModuleError("the zero module gives no map into a matrix algebra")
    target = matrix_algebra(m.dim, m.field)
    mat = Mat.from_vectors([r.flatten() for r in m.action], m.field, m.dim * m.dim)
    return RingHom(m.algebra, target, mat, name=f"rep({m.name})")


# ──────────────────────────────────────────────────────────────────────────────
# Hom
# ──────────────────────────────────────────────────────────────────────────────

def hom_space(m: RightModule, n: RightModule) -> list[ModuleMap]:
    """Basis of Hom_A(m, n), solved one idempotent block f_i: M e_i -> N e_i at a time."""
    _same_algebra(m, n)
    a = m.algebra
    F = a.field
    pm, pn = m.peirce, n.peirce
    sizes = [(pm[i].dim, pn[i].dim) for i in range(len(pm))]
    offsets, total = [], 0
    for mi, ni in sizes:
        offsets.append(total)
        total += mi * ni
    if total == 0:
        return []
    rows: list[tuple] = []
    for i, j, v in a.peirce_basis:
        if i == j and v == a.idempotents[i]:
            continue
        mi, ni = sizes[i]
        mj, nj = sizes[j]
        if mi == 0 or nj == 0:
            continue
        am = (pm[j].coords(pm[i].basis @ m.rho(v))).rows() if mj else [()] * mi
        an = (pn[j].coords(pn[i].basis @ n.rho(v))).rows() if ni else []
        for r in range(mi):
            for c in range(nj):
                row = [F.zero] * total
                for s in range(mj):
                    if am[r][s]:
                        row[offsets[j] + s * nj + c] += am[r][s]
                for t in range(ni):
                    if an[t][c]:
                        row[offsets[i] + r * ni + t] -= an[t][c]
                if any(row):
                    rows.append(tuple(row))
    system = Mat.from_vectors(rows, F, total) if rows else Mat.zeros(0, total, F)
    kern = kernel_basis(system)
    maps = []
    for sol in kern.T.rows() if kern.ncols else []:
        mat = Mat.zeros(m.dim, n.dim, F)
        for i, (mi, ni) in enumerate(sizes):
            if mi == 0 or ni == 0:
                continue
            chunk = sol[offsets[i]: offsets[i] + mi * ni]
            block = Mat.from_vectors([chunk[r * ni:(r + 1) * ni] for r in range(mi)], F, ni)
            mat = mat + m.peirce_proj[i] @ block @ pn[i].basis
        maps.append(ModuleMap(m, n, mat, check=False))
    logger.debug("hom_space(%s, %s): %d unknowns, dim %d", m.name, n.name, total, len(maps))
    return maps


def hom_dim(m: RightModule, n: RightModule) -> int:
    return len(hom_space(m, n))


# ──────────────────────────────────────────────────────────────────────────────
# Projectives and simples
# ──────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Projective:
    """e_v A with its basis rows in algebra coordinates."""

    vertex: int
    module: RightModule
    rows: Mat
    generator: Vec


@lru_cache(maxsize=None)
def _projectives(a: Algebra) -> tuple[Projective, ...]:
    idems = a.require_idempotents("indecomposable projectives")
    reg = regular_module(a)
    out = []
    for v, e in enumerate(idems):
        space = Subspace.span(a.left_matrix(e))
        mod, _ = submodule(reg, space, name=f"P{_vertex_name(a, v)}")
        gen = tuple(e[p] for p in space.pivots)
        out.append(Projective(v, mod, space.basis, gen))
    return tuple(out)


def _vertex_name(a: Algebra, v: int) -> str:
    if a.presentation is not None and v < len(a.presentation.vertices):
        return a.presentation.vertices[v]
    return str(v + 1)


def vertex_names(a: Algebra) -> tuple[str, ...]:
    return tuple(_vertex_name(a, v) for v in range(len(a.idempotents)))


def indec_projectives(a: Algebra) -> list[RightModule]:
    return [p.module for p in _projectives(a)]


def radical_submodule(m: RightModule) -> Subspace:
    """M rad(A)."""
    rad = m.algebra.rad.vectors()
    if not rad or not m.dim:
        return Subspace.zero(m.dim, m.field)
    eye = Mat.identity(m.dim, m.field)
    stacked = eye @ m.rho(rad[0])
    for r in rad[1:]:
        stacked = stacked.vstack(m.rho(r))
    return Subspace.span(stacked)


def top(m: RightModule) -> RightModule:
    q, _ = quotient_module(m, radical_submodule(m), name=f"top({m.name})")
    return q


def simple_modules(a: Algebra, candidates: Sequence[RightModule] | None = None) -> list[RightModule]:
    """Tops of the indecomposable projectives, or verified user-supplied simples."""
    if candidates is not None:
        for s in candidates:
            if s.algebra is not a:
                raise ModuleError("candidate simple over a different algebra")
            if not is_absolutely_simple(s):
                raise ModuleError(f"candidate {s.name or '?'} is not absolutely simple")
        return list(candidates)
    if a.primitive_idempotents is None:
        raise MissingIdempotentsError(f"simple modules of {a.name} need primitive idempotents or supplied candidates")
    if not is_basic_split(a):
        raise ModuleError(
            f"{a.name} is not basic; supply its simple modules (checked with is_absolutely_simple)"
        )
    out = []
    for p in _projectives(a):
        s = top(p.module)
        s.name = f"S{_vertex_name(a, p.vertex)}"
        out.append(s)
    return out


def is_absolutely_simple(m: RightModule) -> bool:
    """Burnside: the image of the algebra in End_k(m) is everything."""
    if m.dim == 0:
        return False
    flat = Mat.from_vectors([r.flatten() for r in m.action], m.field, m.dim * m.dim)
    return flat.rank() == m.dim * m.dim


# ──────────────────────────────────────────────────────────────────────────────
# Free modules and resolutions
# ──────────────────────────────────────────────────────────────────────────────

class FreeModule:
    """Direct sum of indecomposable projectives e_v A, one per listed vertex."""

    def __init__(self, a: Algebra, vertices: Sequence[int]):
        self.algebra = a
        self.vertices = tuple(vertices)
        projs = _projectives(a)
        self.parts = tuple(projs[v] for v in self.vertices)
        if self.parts:
            self.module = direct_sum([p.module for p in self.parts]).module
        else:
            self.module = zero_module(a)
        offs, t = [], 0
        for p in self.parts:
            offs.append(t)
            t += p.module.dim
        self.offsets = tuple(offs)

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def generator(self, k: int) -> Vec:
        v = [self.algebra.field.zero] * self.dim
        for t, c in enumerate(self.parts[k].generator):
            v[self.offsets[k] + t] = c
        return tuple(v)

    def components(self, x: Vec) -> list[Vec]:
        """x = sum_l g_l a_l; returns the a_l in algebra coordinates."""
        F = self.algebra.field
        out = []
        for p, off in zip(self.parts, self.offsets):
            chunk = x[off: off + p.module.dim]
            out.append((Mat.from_vectors([chunk], F, len(chunk)) @ p.rows).row(0) if chunk else self.algebra.zero())
        return out

    def map_to(self, target: RightModule, images: Sequence[Vec]) -> ModuleMap:
        """The map sending generator k to images[k]; images[k] must lie in target e_{v_k}."""
        F = self.algebra.field
        rows: list[Vec] = []
        for p, y in zip(self.parts, images):
            ym = Mat.from_vectors([y], F, target.dim)
            for w in p.rows.rows():
                rows.append((ym @ target.rho(w)).row(0))
        mat = Mat.from_vectors(rows, F, target.dim) if rows else Mat.zeros(0, target.dim, F)
        return ModuleMap(self.module, target, mat, check=False)


def cover_generators(x: RightModule, u: Subspace, v: Subspace | None = None) -> list[tuple[int, Vec]]:
    """Elements of u, each in some u e_i, whose images form a basis of u / (v + u rad)."""
    a = x.algebra
    idems = a.require_idempotents("projective covers")
    F = a.field
    if u.dim == 0:
        return []
    rad = a.rad.vectors()
    pieces = [u.basis @ x.rho(r) for r in rad]
    if v is not None and v.dim:
        pieces.append(v.basis)
    pieces = [p for p in pieces if p.nrows]
    w = Subspace.span(pieces[0].vstack(*pieces[1:])) if pieces else Subspace.zero(x.dim, F)
    gens = []
    # conjugate idempotents give isomorphic e_i A; cover with one per class
    for i in a.cover_vertices:
        pe = x.rho(idems[i])
        ui = Subspace.span(u.basis @ pe)
        wi = Subspace.span(w.basis @ pe) if w.dim else Subspace.zero(x.dim, F)
        cands = ui.vectors()
        for k in extend_basis(wi, cands):
            gens.append((i, cands[k]))
    return gens


@dataclass
class ProjResolution:
    """Minimal resolution ... -> P_1 -> P_0 -> M -> 0.

    differentials[n] is d_{n+1}: P_{n+1} -> P_n; images[n][k] is d_{n+1} of
    the k-th generator of P_{n+1}, in P_n coordinates.
    """

    module: RightModule
    terms: list[FreeModule]
    augmentation: ModuleMap
    differentials: list[ModuleMap]
    images: list[list[Vec]]
    complete: bool
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def term(self, n: int) -> FreeModule:
        if 0 <= n < len(self.terms):
            return self.terms[n]
        if n >= len(self.terms) and not self.complete:
            raise ResolutionIncompleteError(f"resolution of {self.module.name} truncated at degree {self.length}")
        return FreeModule(self.module.algebra, ())

    def covers(self, n: int) -> bool:
        """Whether P_n is known (possibly as zero)."""
        return self.complete or n < len(self.terms)

    def summands(self) -> list[tuple[str, ...]]:
        names = vertex_names(self.module.algebra)
        return [tuple(f"P{names[v]}" for v in t.vertices) for t in self.terms]

    def generator_components(self, n: int) -> list[list[Vec]]:
        """For d_n: P_n -> P_{n-1}, the elements a_kl with d(g_k) = sum_l g_l a_kl."""
        if n <= 0 or n > len(self.images):
            return []
        lower = self.terms[n - 1]
        return [lower.components(y) for y in self.images[n - 1]]

    def pd(self) -> DimBound:
        if self.complete:
            return DimBound(self.length if self.module.dim else 0)
        return DimBound(len(self.terms), exact=False)


def min_proj_resolution(m: RightModule, cutoff: int = 16) -> ProjResolution:
    """Minimal projective resolution computed through P_cutoff at most."""
    cached = m._resolution
    if cached is not None and (cached.complete or len(cached.terms) > cutoff):
        return cached
    a = m.algebra
    F = a.field
    gens = cover_generators(m, Subspace.full(m.dim, F)) if m.dim else []
    p0 = FreeModule(a, [g[0] for g in gens])
    aug = p0.map_to(m, [g[1] for g in gens])
    terms, diffs, images = [p0], [], []
    kern = _left_kernel_space(aug.matrix, p0.dim, F)
    while kern.dim and len(terms) <= cutoff:
        prev = terms[-1]
        gens = cover_generators(prev.module, kern)
        nxt = FreeModule(a, [g[0] for g in gens])
        d = nxt.map_to(prev.module, [g[1] for g in gens])
        terms.append(nxt)
        diffs.append(d)
        images.append([g[1] for g in gens])
        kern = _left_kernel_space(d.matrix, nxt.dim, F)
    res = ProjResolution(m, terms, aug, diffs, images, complete=kern.dim == 0)
    logger.debug("resolution of %s: ranks %s complete=%s", m.name, [t.rank for t in terms], res.complete)
    m._resolution = res
    return res


def _left_kernel_space(mat: Mat, n: int, F: Field) -> Subspace:
    if n == 0:
        return Subspace.zero(0, F)
    k = left_kernel(mat)
    return Subspace.span(k) if k.nrows else Subspace.zero(n, F)


def pd(m: RightModule, cutoff: int = 16) -> DimBound:
    return min_proj_resolution(m, cutoff).pd()


def gldim(a: Algebra, cutoff: int = 16) -> DimBound:
    best = DimBound(0)
    for s in simple_modules(a):
        d = pd(s, cutoff)
        if not d.exact:
            return DimBound(max(d.value, best.value), exact=False)
        best = DimBound(max(best.value, d.value))
    return best


def _resolution_through(m: RightModule, deg: int, cutoff: int) -> ProjResolution:
    if deg > cutoff:
        raise ResolutionIncompleteError(f"degree {deg} exceeds cutoff {cutoff}")
    res = min_proj_resolution(m, max(deg + 1, 1))
    if not res.covers(deg + 1):
        raise ResolutionIncompleteError(f"resolution of {m.name} truncated before degree {deg + 1}")
    return res


def _hom_from_resolution_rank(res: ProjResolution, n: RightModule, deg: int) -> int:
    """Rank of Hom(P_{deg-1}, N) -> Hom(P_deg, N) induced by d_deg."""
    if deg <= 0 or deg > len(res.images):
        return 0
    upper, lower = res.terms[deg], res.terms[deg - 1]
    comps = res.generator_components(deg)
    F = n.field
    rows = []
    for l, v in enumerate(lower.vertices):
        for w in n.peirce[v].vectors():
            wm = Mat.from_vectors([w], F, n.dim)
            row: tuple = ()
            for k in range(upper.rank):
                row += (wm @ n.rho(comps[k][l])).row(0)
            rows.append(row)
    if not rows or upper.rank == 0:
        return 0
    return Mat.from_vectors(rows, F, upper.rank * n.dim).rank()


def ext_dim(m: RightModule, n: RightModule, deg: int, cutoff: int = 16) -> int:
    """dim Ext^deg(m, n) from the minimal resolution of m."""
    _same_algebra(m, n)
    res = _resolution_through(m, deg, cutoff)
    term = res.term(deg)
    hom_dim_ = sum(n.peirce[v].dim for v in term.vertices)
    return hom_dim_ - _hom_from_resolution_rank(res, n, deg + 1) - _hom_from_resolution_rank(res, n, deg)


def _tensor_rank(res: ProjResolution, n: LeftModule, deg: int) -> int:
    """Rank of d_deg (x) N: P_deg (x) N -> P_{deg-1} (x) N."""
    if deg <= 0 or deg > len(res.images):
        return 0
    upper, lower = res.terms[deg], res.terms[deg - 1]
    comps = res.generator_components(deg)
    F = n.field
    rows = []
    for k, v in enumerate(upper.vertices):
        for y in n.peirce[v].vectors():
            ym = Mat.from_vectors([y], F, n.dim)
            row: tuple = ()
            for l in range(lower.rank):
                row += (ym @ n.lam(comps[k][l])).row(0)
            rows.append(row)
    if not rows or lower.rank == 0:
        return 0
    return Mat.from_vectors(rows, F, lower.rank * n.dim).rank()


def tor_dim(m: RightModule, n: LeftModule, deg: int, cutoff: int = 16) -> int:
    """dim Tor_deg(m, n) from the minimal resolution of m."""
    if m.algebra is not n.algebra:
        raise ModuleError("Tor needs a right and a left module over the same algebra")
    res = _resolution_through(m, deg, cutoff)
    term = res.term(deg)
    chain_dim = sum(n.peirce[v].dim for v in term.vertices)
    return chain_dim - _tensor_rank(res, n, deg) - _tensor_rank(res, n, deg + 1)


# ──────────────────────────────────────────────────────────────────────────────
# Tensor products
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class TensorProduct:
    """(sum_i M e_i (x) e_i N) / relations; block i has size dim(M e_i) * dim(e_i N)."""

    dim: int
    ambient: int
    relations: Subspace
    blocks: tuple[tuple[int, int], ...]
    module: RightModule | None = None


def _tensor_relations(m: RightModule, n: LeftModule) -> tuple[Subspace, list[int], list[tuple[int, int]]]:
    a = m.algebra
    F = a.field
    pm, pn = m.peirce, n.peirce
    blocks = [(pm[i].dim, pn[i].dim) for i in range(len(pm))]
    offsets, total = [], 0
    for mi, ni in blocks:
        offsets.append(total)
        total += mi * ni
    rows = []
    for i, j, v in a.peirce_basis:
        if i == j and v == a.idempotents[i]:
            continue
        mi, ni = blocks[i]
        mj, nj = blocks[j]
        if mi == 0 or nj == 0:
            continue
        xv = pm[j].coords(pm[i].basis @ m.rho(v)).rows() if mj else [()] * mi
        vy = pn[i].coords(pn[j].basis @ n.lam(v)).rows() if ni else [()] * nj
        for r in range(mi):
            for s in range(nj):
                row = [F.zero] * total
                for t in range(mj):
                    if xv[r][t]:
                        row[offsets[j] + t * nj + s] += xv[r][t]
                for t in range(ni):
                    if vy[s][t]:
                        row[offsets[i] + r * ni + t] -= vy[s][t]
                if any(row):
                    rows.append(tuple(row))
    rel = Subspace.span_vectors(rows, F, total)
    return rel, offsets, blocks


def tensor_over(m: RightModule, n: LeftModule | Bimodule) -> TensorProduct:
    """m (x)_A n; with a bimodule the result carries the right action of its right algebra."""
    left = n.left if isinstance(n, Bimodule) else n
    if m.algebra is not left.algebra:
        raise ModuleError("tensor_over: algebra mismatch in the contracted position")
    rel, offsets, blocks = _tensor_relations(m, left)
    total = sum(mi * ni for mi, ni in blocks)
    tp = TensorProduct(total - rel.dim, total, rel, tuple(blocks))
    if isinstance(n, Bimodule):
        B = n.right_algebra
        F = B.field
        action = []
        for k in range(B.dim):
            parts = []
            for i, (mi, ni) in enumerate(blocks):
                if mi == 0 or ni == 0:
                    continue
                sp = left.peirce[i]
                restricted = sp.coords(sp.basis @ n.right.action[k])
                parts.append(kron(Mat.identity(mi, F), restricted))
            action.append(Mat.block_diag(parts, F) if parts else Mat.zeros(0, 0, F))
        ambient = RightModule(B, total, action, check=False)
        tp.module, _ = quotient_module(ambient, rel, name=f"{m.name}(x){n.name}")
    return tp


def tensor_module(m: RightModule, n: Bimodule) -> RightModule:
    tp = tensor_over(m, n)
    assert tp.module is not None
    return tp.module


# ──────────────────────────────────────────────────────────────────────────────
# Recollement functors
# ──────────────────────────────────────────────────────────────────────────────

STRAT_FUNCTORS = ("i_star", "i_shriek", "j_shriek", "j_lower", "j_star")


@dataclass
class StratData:
    """Quotient A/AeA and corner eAe for an idempotent e."""

    algebra: Algebra
    e: Vec
    quotient: Algebra | None
    projection: RingHom | None
    ideal: object
    corner: object


@lru_cache(maxsize=None)
def _strat_data_cached(a: Algebra, e: Vec) -> StratData:
    ideal = ideal_generated(a, [e])
    quot = proj = None
    if not ideal.contains(a.unit):
        quot, proj = quotient_by_ideal(a, ideal, name=f"{a.name}/AeA")
    return StratData(a, e, quot, proj, ideal, corner(a, e))


def strat_data(a: Algebra, e: Vec) -> StratData:
    return _strat_data_cached(a, tuple(e))


def _over_quotient(q: RightModule, data: StratData, name: str) -> RightModule:
    """Re-read a module annihilated by AeA as a module over A/AeA."""
    if data.quotient is None:
        raise ModuleError("AeA is the whole algebra; A/AeA is the zero ring")
    comp = data.ideal.space.complement
    action = [q.action[c] for c in comp]
    return RightModule(data.quotient, q.dim, action, name=name, check=False)


def _left_mult_on(a: Algebra, space: Subspace, u: Vec) -> Mat:
    return space.coords(Mat.from_vectors([a.mul(u, w) for w in space.vectors()], a.field, a.dim))


def _right_mult_on(a: Algebra, space: Subspace, u: Vec) -> Mat:
    return space.coords(Mat.from_vectors([a.mul(w, u) for w in space.vectors()], a.field, a.dim))


def strat_functor(a: Algebra, e: Vec, which: str, m: RightModule) -> RightModule:
    """Module-level functors of the recollement given by AeA."""
    if which not in STRAT_FUNCTORS:
        raise ModuleError(f"unknown functor {which!r}; choose from {STRAT_FUNCTORS}")
    if not a.is_idempotent(e):
        raise ModuleError("e is not idempotent")
    data = strat_data(a, e)
    C = data.corner
    F = a.field
    if which in ("i_star", "i_shriek", "j_shriek") and m.algebra is not a:
        raise ModuleError(f"{which} takes a module over {a.name}")
    if which in ("j_lower", "j_star") and m.algebra is not C.algebra:
        raise ModuleError(f"{which} takes a module over the corner eAe")

    if which == "i_star":
        ideal_vecs = data.ideal.vectors()
        pieces = [Mat.identity(m.dim, F) @ m.rho(v) for v in ideal_vecs] if m.dim else []
        sub = Subspace.span(pieces[0].vstack(*pieces[1:])) if pieces else Subspace.zero(m.dim, F)
        q, _ = quotient_module(m, sub)
        return _over_quotient(q, data, f"i*({m.name})")

    if which == "i_shriek":
        ideal_vecs = data.ideal.vectors()
        if ideal_vecs and m.dim:
            k = left_kernel(m.rho(ideal_vecs[0]).hstack(*[m.rho(v) for v in ideal_vecs[1:]]))
            space = Subspace.span(k) if k.nrows else Subspace.zero(m.dim, F)
        else:
            space = Subspace.full(m.dim, F)
        s, _ = submodule(m, space)
        return _over_quotient(s, data, f"i!({m.name})")

    if which == "j_shriek":
        space = Subspace.span(m.rho(e)) if m.dim else Subspace.zero(0, F)
        action = [space.coords(space.basis @ m.rho(u)) if space.dim else Mat.zeros(0, 0, F)
                  for u in C.inclusion.rows()]
        return RightModule(C.algebra, space.dim, action, name=f"{m.name}e", check=False)

    if which == "j_lower":
        ea = Subspace.span(a.left_matrix(e))
        left = [_left_mult_on(a, ea, u) for u in C.inclusion.rows()]
        right = [_right_mult_on(a, ea, a.basis_vector(k)) for k in range(a.dim)]
        bim = Bimodule(C.algebra, a, ea.dim, left, right, name="eA", check=False)
        out = tensor_module(m, bim)
        out.name = f"j_!({m.name})"
        return out

    # j_star: Hom_{eAe}(Ae, X) with (phi.a)(y) = phi(a y)
    ae = Subspace.span(a.right_matrix(e))
    right = [_right_mult_on(a, ae, u) for u in C.inclusion.rows()]
    ae_mod = RightModule(C.algebra, ae.dim, right, name="Ae", check=False)
    basis = hom_space(ae_mod, m)
    if not basis:
        return zero_module(a)
    flat = Coordinates(Mat.from_vectors([f.matrix.flatten() for f in basis], F, ae.dim * m.dim))
    action = []
    for k in range(a.dim):
        lm = _left_mult_on(a, ae, a.basis_vector(k))
        moved = Mat.from_vectors([(lm @ f.matrix).flatten() for f in basis], F, ae.dim * m.dim)
        action.append(flat.of(moved))
    return RightModule(a, len(basis), action, name=f"j_*({m.name})", check=False)


# ──────────────────────────────────────────────────────────────────────────────
# Isomorphism testing
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class IsoResult:
    verdict: str  # "yes" | "no" | "undetermined"
    witness: ModuleMap | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict == "yes"


def _random_coeff(rng: random.Random, F: Field, radius: int = 5):
    return F.convert(rng.randint(-radius, radius))


def is_isomorphic(
    m: RightModule,
    n: RightModule,
    seed: int = 0,
    trials: int = 32,
    *,
    grid_radius: int = 2,
    grid_max_dim: int = 4,
) -> IsoResult:
    """Randomized search for an invertible intertwiner, with sound negative answers."""
    _same_algebra(m, n)
    if m.dim != n.dim:
        return IsoResult("no", reason=f"dimensions {m.dim} != {n.dim}")
    if m.dim_vector != n.dim_vector:
        return IsoResult("no", reason=f"dimension vectors {m.dim_vector} != {n.dim_vector}")
    F = m.field
    if m.dim == 0 or all(x == y for x, y in zip(m.action, n.action)):
        return IsoResult("yes", ModuleMap(m, n, Mat.identity(m.dim, F), check=False), "identical actions")
    homs = hom_space(m, n)
    if not homs:
        return IsoResult("no", reason="Hom(m, n) = 0")
    end_dim = hom_dim(m, m)
    if end_dim != len(homs):
        return IsoResult("no", reason=f"dim Hom(m, n) = {len(homs)} != dim End(m) = {end_dim}")
    mats = [h.matrix for h in homs]
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [_random_coeff(rng, F) for _ in homs]
        cand = combine(coeffs, mats, (m.dim, n.dim), F)
        if cand.rank() == m.dim:
            return IsoResult("yes", ModuleMap(m, n, cand, check=False), "random combination")
    if len(homs) <= grid_max_dim:
        values = range(-grid_radius, grid_radius + 1)
        for coeffs in itertools.product(values, repeat=len(homs)):
            if not any(coeffs):
                continue
            cand = combine([F.convert(c) for c in coeffs], mats, (m.dim, n.dim), F)
            if cand.rank() == m.dim:
                return IsoResult("yes", ModuleMap(m, n, cand, check=False), "grid search")
        p = F.characteristic
        distinct = len(values) if p == 0 else min(len(values), p)
        covers_field = p != 0 and p <= len(values)
        if distinct > m.dim or covers_field:
            return IsoResult("no", reason="determinant vanishes identically on Hom(m, n)")
    return IsoResult("undetermined", reason=f"{trials} random trials found no isomorphism")


# ──────────────────────────────────────────────────────────────────────────────
# Endomorphism algebras
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class EndomorphismAlgebra:
    """End(m) with composition f.g = f o g on a chosen Hom basis."""

    algebra: Algebra
    module: RightModule
    maps: list[Mat]
    _coords: Coordinates = field(repr=False)

    def coords(self, mat: Mat) -> Vec:
        return self._coords.of(Mat.from_vectors([mat.flatten()], mat.field, mat.nrows * mat.ncols)).row(0)

    def matrix_of(self, x: Vec) -> Mat:
        d = self.module.dim
        return combine(x, self.maps, (d, d), self.module.field)


def is_local(m: RightModule) -> bool:
    """End(m) / rad End(m) is one-dimensional."""
    if m.dim == 0:
        return False
    end = endomorphism_algebra(m).algebra
    return end.dim == 1 or end.dim - end.rad.dim == 1


def endomorphism_algebra(m: RightModule | DirectSum) -> EndomorphismAlgebra:
    """End_A(m); for a direct sum of local summands the summand projections are its primitive idempotents."""
    ds = m if isinstance(m, DirectSum) else None
    mod = ds.module if ds is not None else m
    if mod.dim == 0:
        raise ModuleError("End(0) is the zero ring")
    F = mod.field
    d = mod.dim
    maps = [h.matrix for h in hom_space(mod, mod)]
    coords = Coordinates(Mat.from_vectors([f.flatten() for f in maps], F, d * d))

    def to_coords(mat: Mat) -> Vec:
        return coords.of(Mat.from_vectors([mat.flatten()], F, d * d)).row(0)

    table = []
    for fi in maps:
        row = []
        for fj in maps:
            prod = to_coords(fj @ fi)
            row.append({k: c for k, c in enumerate(prod) if c})
        table.append(row)
    unit = to_coords(Mat.identity(d, F))
    idems = None
    if ds is not None and all(is_local(s) for s in ds.summands):
        idems = [to_coords(i.compose(p).matrix) for i, p in zip(ds.inclusions, ds.projections)]
    labels = [f"f{k + 1}" for k in range(len(maps))]
    alg = Algebra(F, labels, table, unit, primitive_idempotents=idems, name=f"End({mod.name})")
    return EndomorphismAlgebra(alg, mod, maps, coords)


# ──────────────────────────────────────────────────────────────────────────────
# Classical tilting
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class Coresolution:
    """0 -> A -> T_0 with T_0 the direct sum of the summands taken with t0 multiplicities."""

    map: ModuleMap
    t0_multiplicities: tuple[int, ...]


@dataclass
class TiltingReport:
    pd_values: list[str] = field(default_factory=list)
    pd_ok: bool = False
    ext_table: dict[str, int] = field(default_factory=dict)
    ext_ok: bool = False
    summands_local: bool | None = None
    t0_multiplicities: tuple[int, ...] | None = None
    t1_multiplicities: tuple[int, ...] | None = None
    coresolution_found: bool | None = None
    hom_t1_t0_zero: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def is_tilting(self) -> bool | None:
        flags = [self.pd_ok, self.ext_ok, self.coresolution_found, self.hom_t1_t0_zero]
        if any(f is False for f in flags):
            return False
        if any(f is None for f in flags):
            return None
        return True


def _minimal_approximation(summands: Sequence[RightModule], a: Algebra, homs) -> Coresolution:
    """Minimal left add(T)-approximation of A for pairwise non-isomorphic local summands."""
    F = a.field
    gens: list[tuple[int, int]] = []
    mults = []
    for j, tj in enumerate(summands):
        pieces = []
        for i in range(len(summands)):
            if i == j:
                end = endomorphism_algebra(tj)
                pieces.extend(end.matrix_of(r) for r in end.algebra.rad.vectors())
            else:
                pieces.extend(h.matrix for h in homs[i][j])
        pieces = [p for p in pieces if p.nrows]
        images = Subspace.span(pieces[0].vstack(*pieces[1:])) if pieces else Subspace.zero(tj.dim, F)
        comp = images.complement
        mults.append(len(comp))
        gens.extend((j, c) for c in comp)
    t0 = direct_sum([summands[j] for j, _ in gens] or [zero_module(a)], name="T0")
    rows = []
    for l in range(a.dim):
        row: tuple = ()
        for j, c in gens:
            row += summands[j].action[l].row(c)
        rows.append(row)
    mat = Mat.from_vectors(rows, F, t0.module.dim) if t0.module.dim else Mat.zeros(a.dim, 0, F)
    u = ModuleMap(regular_module(a), t0.module, mat, check=False)
    return Coresolution(u, tuple(mults))


def _multiplicity_vectors(summands: Sequence[RightModule], target: RightModule, limit: int = 2000):
    """Multiplicity vectors whose direct sum matches the dimension vector of target."""
    dims = [s.dim_vector for s in summands]
    goal = target.dim_vector
    out: list[tuple[int, ...]] = []

    def rec(k: int, remaining: tuple[int, ...], acc: list[int]) -> None:
        if len(out) >= limit:
            return
        if k == len(dims):
            if not any(remaining):
                out.append(tuple(acc))
            return
        dv = dims[k]
        c = 0
        while all(r - c * x >= 0 for r, x in zip(remaining, dv)):
            rec(k + 1, tuple(r - c * x for r, x in zip(remaining, dv)), acc + [c])
            if not any(dv):
                break
            c += 1

    rec(0, goal, [])
    return out


def is_classical_tilting(
    summands: Sequence[RightModule],
    a: Algebra,
    *,
    coresolution: Coresolution | None = None,
    cutoff: int = 16,
    seed: int = 0,
    trials: int = 32,
) -> TiltingReport:
    """pd <= 1, Ext^1 vanishing, and a coresolution 0 -> A -> T_0 -> T_1 -> 0 in add(T) with Hom(T_1, T_0) = 0."""
    if not summands:
        raise ModuleError("tilting check needs at least one summand")
    rep = TiltingReport()
    pds = [pd(t, cutoff) for t in summands]
    rep.pd_values = [str(p) for p in pds]
    rep.pd_ok = all(p.exact and p.value <= 1 for p in pds)
    for i, ti in enumerate(summands):
        for j, tj in enumerate(summands):
            rep.ext_table[f"{ti.name or i}->{tj.name or j}"] = ext_dim(ti, tj, 1, cutoff)
    rep.ext_ok = not any(rep.ext_table.values())
    homs = [[hom_space(ti, tj) for tj in summands] for ti in summands]
    hom_dims = [[len(h) for h in row] for row in homs]

    if coresolution is None:
        rep.summands_local = all(is_local(t) for t in summands)
        if not rep.summands_local:
            rep.coresolution_found = None
            rep.notes.append("summands are not all indecomposable; pass a coresolution explicitly")
            return rep
        coresolution = _minimal_approximation(summands, a, homs)
    u = coresolution.map
    rep.t0_multiplicities = coresolution.t0_multiplicities
    if u.rank != a.dim:
        rep.coresolution_found = False
        rep.notes.append("A -> T_0 is not injective")
        return rep
    t1, _ = cokernel_module(u)
    found: tuple[int, ...] | None = None
    undetermined = False
    for vec in _multiplicity_vectors(summands, t1):
        if t1.dim == 0:
            found = vec
            break
        cand = direct_sum([s for s, k in zip(summands, vec) for _ in range(k)]).module
        res = is_isomorphic(t1, cand, seed=seed, trials=trials)
        if res.verdict == "yes":
            found = vec
            break
        if res.verdict == "undetermined":
            undetermined = True
    if found is None:
        rep.coresolution_found = None if undetermined else False
        rep.notes.append("cokernel not matched in add(T)" + (" (undetermined)" if undetermined else ""))
        return rep
    rep.t1_multiplicities = found
    rep.coresolution_found = True
    m0 = coresolution.t0_multiplicities
    cross = sum(found[i] * m0[j] * hom_dims[i][j] for i in range(len(summands)) for j in range(len(summands)))
    rep.hom_t1_t0_zero = cross == 0
    logger.info("tilting check: pd %s, Ext^1 ok=%s, T0=%s, T1=%s", rep.pd_values, rep.ext_ok, m0, found)
    return rep
