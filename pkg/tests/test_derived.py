"""Tests for bounded complexes, cones and Homs in the derived category."""

import pytest

from src.derived import (
    BoundedComplex,
    ChainMap,
    ComplexError,
    check_cone_sequence,
    cone,
    derived_end_algebra,
    derived_hom_dim,
    hom_window,
    is_exceptional,
    proj_resolve_complex,
    stalk,
)
from src.linalg import Mat
from src.modules import (
    direct_sum,
    ext_dim,
    indec_projectives,
    kronecker_preprojective,
    min_proj_resolution,
    simple_at,
    zero_module,
)


def _augmentation_map(module):
    res = min_proj_resolution(module)
    aug = res.augmentation
    return ChainMap(stalk(aug.source), stalk(aug.target), {0: aug.matrix})


def test_shift_moves_degrees(three_vertex):
    x = stalk(simple_at(three_vertex, "1"))
    y = x.shift(2)
    assert (y.lo, y.hi) == (-2, -2)
    assert y.homology_dims() == {-2: 1}


def test_differential_shape_checked(three_vertex):
    s1 = simple_at(three_vertex, "1")
    p1 = indec_projectives(three_vertex)[0]
    with pytest.raises(ComplexError, match="has shape"):
        BoundedComplex(three_vertex, 0, [s1, p1], [Mat.zeros(1, 2, three_vertex.field)])


def test_differential_must_be_module_map(three_vertex):
    s1, s2 = simple_at(three_vertex, "1"), simple_at(three_vertex, "2")
    with pytest.raises(ComplexError, match="not a module map"):
        BoundedComplex(three_vertex, 0, [s1, s2], [Mat.identity(1, three_vertex.field)])


def test_differential_squares_to_zero(three_vertex):
    s1 = simple_at(three_vertex, "1")
    eye = Mat.identity(1, three_vertex.field)
    with pytest.raises(ComplexError, match="!= 0"):
        BoundedComplex(three_vertex, 0, [s1, s1, s1], [eye, eye])


def test_chain_map_must_commute(three_vertex):
    s1 = simple_at(three_vertex, "1")
    eye = Mat.identity(1, three_vertex.field)
    x = BoundedComplex(three_vertex, 0, [s1, s1], [eye])
    with pytest.raises(ComplexError, match="commute"):
        ChainMap(x, x, {0: eye})


def test_cone_of_augmentation(three_vertex):
    f = _augmentation_map(simple_at(three_vertex, "1"))
    c = cone(f).complex
    assert (c.lo, c.hi) == (-1, 0)
    # P1 -> S1 is onto with a 2-dimensional kernel
    assert c.homology_dims() == {-1: 2, 0: 0}
    assert check_cone_sequence(f)


def test_cone_of_identity_is_acyclic(kronecker):
    p = stalk(kronecker_preprojective(kronecker, 2))
    eye = ChainMap(p, p, {0: Mat.identity(p.dim(0), kronecker.field)})
    assert cone(eye).complex.is_acyclic()
    assert check_cone_sequence(eye)


def test_projective_replacement_of_simple(three_vertex):
    p = proj_resolve_complex(stalk(simple_at(three_vertex, "1")))
    # P1 <- P3 <- P2, vertices by position
    assert p.summands() == {-2: (1,), -1: (2,), 0: (0,)}
    assert p.complex.homology_dims() == {-2: 0, -1: 0, 0: 1}


def test_projective_replacement_respects_cutoff(three_vertex):
    from src.modules import ResolutionIncompleteError

    with pytest.raises(ResolutionIncompleteError):
        proj_resolve_complex(stalk(simple_at(three_vertex, "3")), cutoff=2)


def test_derived_hom_matches_ext(three_vertex):
    s = {v: simple_at(three_vertex, v) for v in "123"}
    for i in "123":
        for j in "123":
            for n in range(3):
                assert derived_hom_dim(stalk(s[i]), stalk(s[j]), n) == ext_dim(s[i], s[j], n)


def test_hom_window_bounds(three_vertex):
    x = stalk(simple_at(three_vertex, "1"))
    p = proj_resolve_complex(x)
    assert list(hom_window(p, x)) == [0, 1, 2]


def test_simple_is_exceptional(three_vertex):
    rep = is_exceptional(stalk(simple_at(three_vertex, "1")))
    assert rep.exceptional
    assert rep.table[0] == 1
    assert rep.offending == []


def test_sum_of_simples_is_not_exceptional(kronecker):
    s = direct_sum([simple_at(kronecker, "1"), simple_at(kronecker, "2")]).module
    rep = is_exceptional(stalk(s))
    assert not rep.exceptional
    assert rep.offending == [1]
    assert rep.table[1] == 2


def test_derived_end_of_simple(three_vertex):
    end = derived_end_algebra(stalk(simple_at(three_vertex, "2")))
    assert end.algebra.dim == 1
    assert end.algebra.labels == ("c1",)


def test_derived_end_of_tilting_module_is_kronecker_sized(kronecker):
    t = direct_sum([kronecker_preprojective(kronecker, 1), kronecker_preprojective(kronecker, 2)]).module
    end = derived_end_algebra(stalk(t))
    assert end.algebra.dim == 4
    assert end.algebra.rad.dim == 2


def test_derived_end_of_zero_complex(kronecker):
    with pytest.raises(ComplexError, match="zero ring"):
        derived_end_algebra(stalk(zero_module(kronecker)))


def test_source_endomorphism_coordinates(kronecker):
    p = kronecker_preprojective(kronecker, 1)
    end = derived_end_algebra(stalk(p))
    coords = end.coords_of_source_endomorphism({0: Mat.identity(p.dim, kronecker.field)})
    assert coords == end.algebra.unit
