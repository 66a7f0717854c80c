"""
Bounded complexes and Homs in the derived category.

Degrees are cohomological: d_n: X_n -> X_{n+1}. X[k]_n = X_{n+k} with
differential (-1)^k d, and cone(f: X -> Y)_n = X_{n+1} + Y_n with row-block
differential [[-d_X, f], [0, d_Y]].

Hom_D(X, Y[n]) is computed as chain maps P(X) -> Y[n] modulo null-homotopic
ones, where P(X) is a bounded complex of projectives built degree by degree
from projective covers of the cycles of cone(P -> X).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .algebra import Algebra
from .linalg import Coordinates, Mat, Subspace, Vec, extend_basis, left_kernel
from .modules import (
    FreeModule,
    ResolutionIncompleteError,
    RightModule,
    cover_generators,
    direct_sum,
    zero_module,
)

logger = logging.getLogger(__name__)


class ComplexError(ValueError):
    """Ill-formed complex or chain map."""


# ──────────────────────────────────────────────────────────────────────────────
# Complexes and chain maps
# ──────────────────────────────────────────────────────────────────────────────

class BoundedComplex:
    """X_lo -> ... -> X_hi; differentials[k] maps X_{lo+k} to X_{lo+k+1}."""

    def __init__(
        self,
        algebra: Algebra,
        lo: int,
        modules: Sequence[RightModule],
        differentials: Sequence[Mat],
        *,
        name: str = "",
        check: bool = True,
    ):
        if not modules:
            raise ComplexError("a complex needs at least one term")
        if len(differentials) != len(modules) - 1:
            raise ComplexError(f"{len(modules)} terms need {len(modules) - 1} differentials")
        for m in modules:
            if m.algebra is not algebra:
                raise ComplexError("all terms must be modules over the same algebra")
        self.algebra = algebra
        self.lo = lo
        self.modules = tuple(modules)
        self.differentials = tuple(differentials)
        self.name = name
        for k, d in enumerate(self.differentials):
            if d.shape != (modules[k].dim, modules[k + 1].dim):
                raise ComplexError(f"d_{lo + k} has shape {d.shape}")
        if check:
            self.verify()

    @property
    def hi(self) -> int:
        return self.lo + len(self.modules) - 1

    def __repr__(self) -> str:
        dims = ", ".join(str(m.dim) for m in self.modules)
        return f"BoundedComplex({self.name or '?'}: [{self.lo}..{self.hi}] dims {dims})"

    @cached_property
    def _zero(self) -> RightModule:
        return zero_module(self.algebra)

    def module(self, n: int) -> RightModule:
        if self.lo <= n <= self.hi:
            return self.modules[n - self.lo]
        return self._zero

    def dim(self, n: int) -> int:
        return self.module(n).dim

    def d(self, n: int) -> Mat:
        if self.lo <= n < self.hi:
            return self.differentials[n - self.lo]
        return Mat.zeros(self.dim(n), self.dim(n + 1), self.algebra.field)

    def verify(self) -> None:
        for k, d in enumerate(self.differentials):
            src, tgt = self.modules[k], self.modules[k + 1]
            for b in range(self.algebra.dim):
                if src.action[b] @ d != d @ tgt.action[b]:
                    raise ComplexError(f"d_{self.lo + k} is not a module map")
        for n in range(self.lo, self.hi - 1):
            if not (self.d(n) @ self.d(n + 1)).is_zero():
                raise ComplexError(f"d_{n + 1} o d_{n} != 0")

    def homology_dim(self, n: int) -> int:
        return self.dim(n) - self.d(n).rank() - self.d(n - 1).rank()

    def homology_dims(self) -> dict[int, int]:
        return {n: self.homology_dim(n) for n in range(self.lo, self.hi + 1)}

    def is_acyclic(self) -> bool:
        return not any(self.homology_dims().values())

    def shift(self, k: int) -> "BoundedComplex":
        """X[k]: X[k]_n = X_{n+k} with differential (-1)^k d."""
        diffs = [d if k % 2 == 0 else -d for d in self.differentials]
        return BoundedComplex(self.algebra, self.lo - k, self.modules, diffs, name=f"{self.name}[{k}]", check=False)


def stalk(m: RightModule, deg: int = 0) -> BoundedComplex:
    return BoundedComplex(m.algebra, deg, [m], [], name=m.name, check=False)


class ChainMap:
    """Degree-wise module maps maps[n]: X_n -> Y_n commuting with the differentials."""

    def __init__(self, source: BoundedComplex, target: BoundedComplex, maps: Mapping[int, Mat], *, check: bool = True):
        if source.algebra is not target.algebra:
            raise ComplexError("chain map between complexes over different algebras")
        self.source = source
        self.target = target
        self.maps = dict(maps)
        for n, m in self.maps.items():
            if m.shape != (source.dim(n), target.dim(n)):
                raise ComplexError(f"component in degree {n} has shape {m.shape}")
        if check:
            self.verify()

    def at(self, n: int) -> Mat:
        m = self.maps.get(n)
        if m is None:
            return Mat.zeros(self.source.dim(n), self.target.dim(n), self.source.algebra.field)
        return m

    @property
    def degrees(self) -> range:
        return range(min(self.source.lo, self.target.lo) - 1, max(self.source.hi, self.target.hi) + 1)

    def verify(self) -> None:
        X, Y = self.source, self.target
        for n in self.degrees:
            if X.d(n) @ self.at(n + 1) != self.at(n) @ Y.d(n):
                raise ComplexError(f"chain map does not commute with the differentials in degree {n}")
            for b in range(X.algebra.dim):
                if X.module(n).action[b] @ self.at(n) != self.at(n) @ Y.module(n).action[b]:
                    raise ComplexError(f"component in degree {n} is not a module map")

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """self after inner."""
        degrees = set(self.maps) | set(inner.maps)
        return ChainMap(inner.source, self.target, {n: inner.at(n) @ self.at(n) for n in degrees}, check=False)

    def homology_rank(self, n: int) -> int:
        """Rank of the induced map H_n(X) -> H_n(Y)."""
        X, Y = self.source, self.target
        F = X.algebra.field
        cycles = left_kernel(X.d(n)) if X.dim(n) else Mat.zeros(0, 0, F)
        boundaries = Y.d(n - 1)
        base = Subspace.span(boundaries) if boundaries.nrows else Subspace.zero(Y.dim(n), F)
        if not cycles.nrows or not Y.dim(n):
            return 0
        joined = base.join(Subspace.span(cycles @ self.at(n)))
        return joined.dim - base.dim


# ──────────────────────────────────────────────────────────────────────────────
# Cones
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class Cone:
    """cone(f) with the triangle maps Y -> cone(f) -> X[1]."""

    complex: BoundedComplex
    inclusion: ChainMap
    projection: ChainMap
    map: ChainMap


def _block(a: Mat, b: Mat, c: Mat, d: Mat) -> Mat:
    """[[a, b], [c, d]] in row convention."""
    F = a.field
    top = a.hstack(b) if a.nrows else Mat.zeros(0, a.ncols + b.ncols, F)
    bottom = c.hstack(d) if c.nrows else Mat.zeros(0, c.ncols + d.ncols, F)
    return top.vstack(bottom)


def cone(f: ChainMap) -> Cone:
    X, Y = f.source, f.target
    F = X.algebra.field
    lo = min(X.lo - 1, Y.lo)
    hi = max(X.hi - 1, Y.hi)
    mods, diffs, incl, proj = [], [], {}, {}
    for n in range(lo, hi + 1):
        xn, yn = X.module(n + 1), Y.module(n)
        mods.append(direct_sum([xn, yn], name=f"C{n}").module)
        eye_x, eye_y = Mat.identity(xn.dim, F), Mat.identity(yn.dim, F)
        incl[n] = Mat.zeros(yn.dim, xn.dim, F).hstack(eye_y) if yn.dim else Mat.zeros(0, xn.dim, F)
        proj[n] = eye_x.vstack(Mat.zeros(yn.dim, xn.dim, F)) if xn.dim else Mat.zeros(yn.dim, 0, F)
    for n in range(lo, hi):
        diffs.append(_block(
            -X.d(n + 1), f.at(n + 1),
            Mat.zeros(Y.dim(n), X.dim(n + 2), F), Y.d(n),
        ))
    c = BoundedComplex(X.algebra, lo, mods, diffs, name=f"cone({X.name}->{Y.name})")
    inclusion = ChainMap(Y, c, incl, check=False)
    projection = ChainMap(c, X.shift(1), proj, check=False)
    return Cone(c, inclusion, projection, f)


def check_cone_sequence(f: ChainMap) -> bool:
    """Long exact homology sequence: h_n(cone) = dim coker H_n(f) + dim ker H_{n+1}(f)."""
    X, Y = f.source, f.target
    c = cone(f).complex
    for n in range(c.lo - 1, c.hi + 2):
        coker = Y.homology_dim(n) - f.homology_rank(n)
        kern = X.homology_dim(n + 1) - f.homology_rank(n + 1)
        if c.homology_dim(n) != coker + kern:
            logger.info("cone sequence fails in degree %d: %d != %d + %d", n, c.homology_dim(n), coker, kern)
            return False
    return True


# ──────────────────────────────────────────────────────────────────────────────
# Projective replacement
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class ProjReplacement:
    """Bounded complex of projectives P with a quasi-isomorphism P -> X.

    images[n][k] is d(g_k) in P_{n+1} coordinates for the k-th generator of P_n.
    """

    source: BoundedComplex
    complex: BoundedComplex
    terms: dict[int, FreeModule]
    images: dict[int, list[Vec]]
    quasi: ChainMap

    def term(self, n: int) -> FreeModule:
        t = self.terms.get(n)
        return t if t is not None else FreeModule(self.source.algebra, ())

    def components(self, n: int) -> list[list[Vec]]:
        """a_kl with d(g_k) = sum_l g'_l a_kl, g'_l the generators of P_{n+1}."""
        upper = self.term(n + 1)
        return [upper.components(y) for y in self.images.get(n, [])]

    def summands(self) -> dict[int, tuple[int, ...]]:
        return {n: t.vertices for n, t in sorted(self.terms.items()) if t.rank}


def _cycles(D: Mat, n: int, F) -> Subspace:
    if n == 0:
        return Subspace.zero(0, F)
    k = left_kernel(D)
    return Subspace.span(k) if k.nrows else Subspace.zero(n, F)


def proj_resolve_complex(x: BoundedComplex, cutoff: int = 16) -> ProjReplacement:
    """Projective complex P with P -> x a quasi-isomorphism, built from the top degree down."""
    a = x.algebra
    F = a.field
    terms: dict[int, FreeModule] = {}
    images: dict[int, list[Vec]] = {}
    dmats: dict[int, Mat] = {}
    qmats: dict[int, Mat] = {}
    upper = FreeModule(a, ())
    upper_d = Mat.zeros(0, 0, F)
    upper_q = Mat.zeros(0, x.dim(x.hi + 1), F)
    n = x.hi
    while True:
        xn = x.module(n)
        top = (-upper_d).hstack(upper_q) if upper.dim else Mat.zeros(0, upper_d.ncols + x.dim(n + 1), F)
        bottom = Mat.zeros(xn.dim, upper_d.ncols, F).hstack(x.d(n)) if xn.dim else Mat.zeros(0, top.ncols, F)
        D = top.vstack(bottom)
        z = _cycles(D, upper.dim + xn.dim, F)
        if n < x.lo and z.dim == 0:
            break
        if n < x.lo - cutoff:
            raise ResolutionIncompleteError(
                f"projective replacement of {x.name or 'complex'} needs more than {cutoff} steps below degree {x.lo}"
            )
        cmod = direct_sum([upper.module, xn]).module
        prev = x.d(n - 1)
        v = Subspace.span(Mat.zeros(prev.nrows, upper.dim, F).hstack(prev)) if prev.nrows and xn.dim else None
        gens = cover_generators(cmod, z, v) if z.dim else []
        term = FreeModule(a, [g[0] for g in gens])
        d_imgs = [tuple(-c for c in g[1][: upper.dim]) for g in gens]
        q_imgs = [g[1][upper.dim:] for g in gens]
        terms[n] = term
        images[n] = d_imgs
        dmats[n] = term.map_to(upper.module, d_imgs).matrix
        qmats[n] = term.map_to(xn, q_imgs).matrix
        logger.debug("replacement of %s: degree %d, generators %s", x.name, n, term.vertices)
        upper, upper_d, upper_q = term, dmats[n], qmats[n]
        n -= 1

    nonzero = [k for k, t in terms.items() if t.rank]
    lo = min(nonzero) if nonzero else x.lo
    hi = max(nonzero) if nonzero else x.lo
    degrees = range(lo, hi + 1)
    full_terms = {k: terms.get(k, FreeModule(a, ())) for k in degrees}
    mods = [full_terms[k].module for k in degrees]
    diffs = [dmats.get(k, Mat.zeros(full_terms[k].dim, full_terms[k + 1].dim, F)) for k in range(lo, hi)]
    p = BoundedComplex(a, lo, mods, diffs, name=f"P({x.name})", check=False)
    quasi = ChainMap(p, x, {k: qmats[k] for k in degrees if k in qmats}, check=False)
    for k in range(min(lo, x.lo), max(hi, x.hi) + 1):
        if p.homology_dim(k) != x.homology_dim(k):
            raise ComplexError(f"projective replacement lost homology in degree {k}")
    return ProjReplacement(x, p, {k: full_terms[k] for k in degrees}, {k: images.get(k, []) for k in degrees}, quasi)


# ──────────────────────────────────────────────────────────────────────────────
# Chain maps modulo homotopy
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class _Slot:
    degree: int
    generator: int
    space: Subspace
    offset: int


@dataclass
class HomotopyClasses:
    """Chain maps P -> Y modulo null-homotopic ones.

    A chain map is recorded by the values of the generators of each P_m, as
    coordinates in the Peirce pieces Y_m e_v.
    """

    source: ProjReplacement
    target: BoundedComplex
    slots: list[_Slot]
    size: int
    cycles: Subspace
    boundaries: Subspace
    reps: list[Vec]
    _coords: Coordinates | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def maps_of(self, u: Vec) -> dict[int, Mat]:
        P, Y = self.source, self.target
        F = Y.algebra.field
        values: dict[int, list[Vec]] = {}
        for s in self.slots:
            chunk = u[s.offset: s.offset + s.space.dim]
            vec = (Mat.from_vectors([chunk], F, s.space.dim) @ s.space.basis).row(0)
            values.setdefault(s.degree, [tuple([F.zero] * Y.dim(s.degree))] * P.term(s.degree).rank)
            values[s.degree][s.generator] = vec
        out = {}
        for m in range(P.complex.lo, P.complex.hi + 1):
            term = P.term(m)
            imgs = values.get(m, [tuple([F.zero] * Y.dim(m))] * term.rank)
            out[m] = term.map_to(Y.module(m), imgs).matrix
        return out

    def unknowns_of(self, maps: Mapping[int, Mat]) -> Vec:
        P = self.source
        F = self.target.algebra.field
        u = [F.zero] * self.size
        for s in self.slots:
            term = P.term(s.degree)
            gen = Mat.from_vectors([term.generator(s.generator)], F, term.dim)
            val = s.space.coords(gen @ maps[s.degree]).row(0)
            u[s.offset: s.offset + s.space.dim] = val
        return tuple(u)

    def class_of(self, maps: Mapping[int, Mat]) -> Vec:
        u = self.unknowns_of(maps)
        F = self.target.algebra.field
        if not self.cycles.contains(u):
            raise ComplexError("maps do not form a chain map")
        if self._coords is None:
            return ()
        full = self._coords.of(Mat.from_vectors([u], F, self.size)).row(0)
        return full[: self.dim]

    def rep_maps(self, i: int) -> dict[int, Mat]:
        return self.maps_of(self.reps[i])


def homotopy_classes(p: ProjReplacement, y: BoundedComplex) -> HomotopyClasses:
    """Degree-zero chain maps p.complex -> y modulo homotopy."""
    a = y.algebra
    F = a.field
    P = p.complex
    slots: list[_Slot] = []
    index: dict[tuple[int, int], _Slot] = {}
    size = 0
    for m in range(P.lo, P.hi + 1):
        ym = y.module(m)
        if not ym.dim:
            continue
        for k, v in enumerate(p.term(m).vertices):
            sp = ym.peirce[v]
            if sp.dim:
                s = _Slot(m, k, sp, size)
                slots.append(s)
                index[(m, k)] = s
                size += sp.dim
    if size == 0:
        zero = Subspace.zero(0, F)
        return HomotopyClasses(p, y, [], 0, zero, zero, [])

    # chain condition on generator k of P_m: sum_l y'_l a_kl - y_k d_Y = 0 in Y_{m+1}
    eq_blocks: dict[tuple[int, int], int] = {}
    width = 0
    for m in range(P.lo, P.hi + 1):
        w = y.dim(m + 1)
        if not w:
            continue
        for k in range(p.term(m).rank):
            eq_blocks[(m, k)] = width
            width += w
    rows: list[list] = [[F.zero] * width for _ in range(size)]
    for s in slots:
        m = s.degree
        d_y = y.d(m)
        if (m, s.generator) in eq_blocks:
            col = eq_blocks[(m, s.generator)]
            for t, vec in enumerate((s.space.basis @ d_y).rows()):
                for c, val in enumerate(vec):
                    if val:
                        rows[s.offset + t][col + c] -= val
        ym = y.module(m)
        for k2, comps in enumerate(p.components(m - 1)):
            if (m - 1, k2) not in eq_blocks:
                continue
            col = eq_blocks[(m - 1, k2)]
            act = ym.rho(comps[s.generator])
            for t, vec in enumerate((s.space.basis @ act).rows()):
                for c, val in enumerate(vec):
                    if val:
                        rows[s.offset + t][col + c] += val
    system = Mat.from_vectors([tuple(r) for r in rows], F, width)
    kern = left_kernel(system) if width else Mat.identity(size, F)
    cycles = Subspace.span(kern) if kern.nrows else Subspace.zero(size, F)

    # null-homotopic maps from h_m: P_m -> Y_{m-1}, parametrised by z_k in Y_{m-1} e_v
    hrows: list[Vec] = []
    for m in range(P.lo, P.hi + 2):
        ylow = y.module(m - 1)
        if not ylow.dim:
            continue
        comps_below = p.components(m - 1)
        for k, v in enumerate(p.term(m).vertices):
            sp = ylow.peirce[v]
            for z in sp.vectors():
                u = [F.zero] * size
                zm = Mat.from_vectors([z], F, ylow.dim)
                own = index.get((m, k))
                if own is not None:
                    u[own.offset: own.offset + own.space.dim] = own.space.coords(zm @ y.d(m - 1)).row(0)
                for k2, comps in enumerate(comps_below):
                    tgt = index.get((m - 1, k2))
                    if tgt is None:
                        continue
                    val = tgt.space.coords(zm @ ylow.rho(comps[k])).row(0)
                    for t, x in enumerate(val):
                        u[tgt.offset + t] += x
                if any(u):
                    hrows.append(tuple(u))
    boundaries = Subspace.span_vectors(hrows, F, size)
    cands = cycles.vectors()
    reps = [cands[i] for i in extend_basis(boundaries, cands)]
    coords = Coordinates(Mat.from_vectors(reps + boundaries.vectors(), F, size)) if reps else None
    logger.debug("homotopy classes %s -> %s: %d unknowns, %d cycles, %d boundaries",
                 P.name, y.name, size, cycles.dim, boundaries.dim)
    return HomotopyClasses(p, y, slots, size, cycles, boundaries, reps, coords)


def derived_hom_dim(x: BoundedComplex, y: BoundedComplex, n: int, cutoff: int = 16) -> int:
    """dim Hom_D(x, y[n])."""
    p = proj_resolve_complex(x, cutoff)
    return homotopy_classes(p, y.shift(n)).dim


@dataclass
class ExceptionalReport:
    exceptional: bool
    offending: list[int]
    table: dict[int, int]


def hom_window(p: ProjReplacement, y: BoundedComplex) -> range:
    """Shifts n for which Hom(P, y[n]) can be nonzero."""
    return range(y.lo - p.complex.hi, y.hi - p.complex.lo + 1)


def is_exceptional(x: BoundedComplex, cutoff: int = 16) -> ExceptionalReport:
    """Hom_D(x, x[n]) = 0 for every n != 0 in the window where it can be nonzero."""
    p = proj_resolve_complex(x, cutoff)
    table = {n: homotopy_classes(p, x.shift(n)).dim for n in hom_window(p, x)}
    offending = [n for n, d in table.items() if n != 0 and d]
    logger.info("exceptional check on %s: table %s", x.name, table)
    return ExceptionalReport(not offending, offending, table)


# ──────────────────────────────────────────────────────────────────────────────
# Derived endomorphism algebras
# ──────────────────────────────────────────────────────────────────────────────

@dataclass
class DerivedEnd:
    """End_D(x) realised on homotopy classes of chain endomorphisms of P(x)."""

    algebra: Algebra
    replacement: ProjReplacement
    classes: HomotopyClasses

    @cached_property
    def _to_source(self) -> tuple[HomotopyClasses, Mat]:
        p = self.replacement
        px = homotopy_classes(p, p.source)
        q = p.quasi
        rows = []
        for i in range(self.classes.dim):
            r = self.classes.rep_maps(i)
            rows.append(px.class_of({m: r[m] @ q.at(m) for m in r}))
        if px.dim != len(rows):
            raise ComplexError("P -> x does not induce an isomorphism on homotopy classes")
        return px, Mat.from_vectors(rows, self.algebra.field, px.dim).inverse()

    def coords_of_source_endomorphism(self, phi: Mapping[int, Mat]) -> Vec:
        """Class of a chain endomorphism of x, in the basis of the algebra."""
        px, inv = self._to_source
        q = self.replacement.quasi
        X = self.replacement.source
        F = self.algebra.field
        composite = {}
        for m in range(q.source.lo, q.source.hi + 1):
            ph = phi[m] if m in phi else Mat.zeros(X.dim(m), X.dim(m), F)
            composite[m] = q.at(m) @ ph
        c = px.class_of(composite)
        return (Mat.from_vectors([c], self.algebra.field, px.dim) @ inv).row(0)


def derived_end_algebra(x: BoundedComplex, cutoff: int = 16) -> DerivedEnd:
    """Chain endomorphisms of P(x) modulo homotopy, composed as f.g = f o g."""
    p = proj_resolve_complex(x, cutoff)
    classes = homotopy_classes(p, p.complex)
    if classes.dim == 0:
        raise ComplexError(f"End_D({x.name or 'complex'}) is the zero ring")
    F = x.algebra.field
    reps = [classes.rep_maps(i) for i in range(classes.dim)]
    table = []
    for fi in reps:
        row = []
        for fj in reps:
            prod = classes.class_of({m: fj[m] @ fi[m] for m in fi})
            row.append({k: c for k, c in enumerate(prod) if c})
        table.append(row)
    eye = {m: Mat.identity(p.complex.dim(m), F) for m in range(p.complex.lo, p.complex.hi + 1)}
    unit = classes.class_of(eye)
    labels = [f"c{k + 1}" for k in range(classes.dim)]
    alg = Algebra(F, labels, table, unit, name=f"End_D({x.name})")
    logger.info("derived endomorphism algebra of %s: dim %d", x.name, alg.dim)
    return DerivedEnd(alg, p, classes)
