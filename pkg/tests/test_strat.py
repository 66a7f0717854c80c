"""Tests for epimorphism, surjectivity and stratification checks and the two constructions."""

import pytest

from src.algebra import (
    AlgebraError,
    RingHom,
    corner,
    ideal_generated,
    matrix_algebra,
    parse_element,
    product_algebra,
    quotient_by_ideal,
)
from src.linalg import Mat
from src.modules import kronecker_preprojective, regular_module, representation_hom
from src.strat import (
    Certificate,
    ConstructionError,
    DegenerateConeError,
    NotEpimorphismError,
    NotInjectiveError,
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
    match_path_algebra,
)


@pytest.fixture
def diagonal(QQ):
    k = matrix_algebra(1)
    kk, _, _ = product_algebra(k, k)
    return RingHom(k, kk, Mat.from_rows([[1, 1]], QQ), name="diag")


@pytest.fixture
def projection():
    _, proj, _ = product_algebra(matrix_algebra(2), matrix_algebra(3))
    return proj


@pytest.fixture
def arrow_quotient(kronecker):
    _, q = quotient_by_ideal(kronecker, ideal_generated(kronecker, [parse_element(kronecker, "a")]))
    return q


@pytest.fixture
def lam1(kronecker):
    return representation_hom(kronecker_preprojective(kronecker, 1))


# ── certificates ─────────────────────────────────────────────────────────────

def test_certificate_verdicts():
    cert = Certificate("x")
    assert cert.verdict() == "positive"
    cert.complete = False
    assert cert.verdict() == "inconclusive"
    cert.is_ring_epi = False
    assert cert.verdict() == "negative"


def test_certificate_absorb_keeps_decided_flags():
    a = Certificate("a", is_ring_epi=True, witnesses={"x": 1})
    b = Certificate("b", is_surjective=False, complete=False, trace=["b ran"])
    a.absorb(b)
    assert a.is_ring_epi is True and a.is_surjective is False
    assert not a.complete
    assert a.trace == ["b ran"]
    d = a.to_dict()
    assert d["verdict"] == "negative"
    assert d["flags"]["is_surjective"] is False
    assert d["witnesses"] == {"x": 1}


# ── epimorphisms ─────────────────────────────────────────────────────────────

def test_diagonal_is_not_an_epimorphism(diagonal):
    cert = check_ring_epi(diagonal)
    assert cert.is_ring_epi is False
    assert cert.witnesses["dim Coker(f)"] == 1
    assert cert.witnesses["dim Coker(f) (x)_A B"] == 2
    assert cert.verdict() == "negative"


def test_triangular_inclusion_is_homological_epi(T2_inclusion):
    _, inc = T2_inclusion
    assert check_ring_epi(inc).is_ring_epi
    cert = check_homological_epi(inc)
    assert cert.is_homological_epi is True
    assert cert.homological_degree == 0
    assert cert.witnesses["pd(B_A)"] == 0


def test_non_epi_is_not_homological(diagonal):
    cert = check_homological_epi(diagonal)
    assert cert.is_homological_epi is False


def test_representation_of_preprojective_is_homological_epi(lam1):
    cert = check_homological_epi(lam1)
    assert cert.verdict() == "positive"


def test_quotient_by_arrow_is_epi_but_not_homological(arrow_quotient):
    cert = check_homological_epi(arrow_quotient)
    assert cert.is_ring_epi is True
    assert cert.is_homological_epi is False
    assert cert.witnesses["dim Tor_i(B,B)"]["1"] == 1


# ── surjectivity ─────────────────────────────────────────────────────────────

def test_projection_is_surjective(projection):
    cert = check_surjectivity(projection)
    assert cert.is_surjective is True
    assert cert.verdict() == "positive"


def test_epi_onto_full_matrices_not_surjective(T2_inclusion):
    _, inc = T2_inclusion
    cert = check_surjectivity(inc, radical_condition=True)
    assert cert.is_ring_epi is True
    assert cert.is_surjective is False
    assert cert.witnesses["target basic"] is False
    assert any(not row["restricts_simple"] for row in cert.witnesses["restricted simples"])


def test_surjectivity_of_quotient_map_agrees_with_simples(arrow_quotient):
    cert = check_surjectivity(arrow_quotient)
    assert cert.is_surjective is True
    assert all(row["restricts_simple"] for row in cert.witnesses["restricted simples"])


# ── kernels and idempotent ideals ────────────────────────────────────────────

def test_kernel_of_arrow_quotient_is_not_idempotent(arrow_quotient):
    cert = check_kernel_idempotent(arrow_quotient)
    assert cert.kernel_idempotent is False
    assert cert.witnesses["dim Tor_1(B,B)"] == 1
    assert cert.witnesses["dim I^2"] == 0


def test_kernel_check_needs_surjection(T2_inclusion):
    _, inc = T2_inclusion
    with pytest.raises(PreconditionError, match="not surjective"):
        check_kernel_idempotent(inc)


def test_projection_between_matrix_products_is_homological_epi(projection):
    cert = check_homological_epi(projection)
    assert cert.verdict() == "positive"
    assert cert.witnesses["pd(B_A)"] == 0


def test_projection_kernel_is_stratifying(projection):
    gen = find_idempotent_generator(projection.kernel())
    cert = check_stratifying_ideal(projection.source, gen)
    assert cert.kernel_stratifying is True
    assert cert.witnesses["dim AeA"] == 9


def test_projection_kernel_generated_by_idempotent(projection):
    kernel = projection.kernel()
    assert kernel.is_idempotent()
    gen = find_idempotent_generator(kernel)
    assert gen is not None
    assert projection.source.format_element(gen) == "E11|2 + E22|2 + E33|2"


def test_arrow_ideal_has_no_idempotent_generator(kronecker):
    ideal = ideal_generated(kronecker, [parse_element(kronecker, "a")])
    assert find_idempotent_generator(ideal) is None


# ── stratifying ideals ───────────────────────────────────────────────────────

def test_three_vertex_ideal_is_stratifying(three_vertex, kronecker):
    e = parse_element(three_vertex, "e2 + e3")
    cert = check_stratifying_ideal(three_vertex, e, corner_model=kronecker)
    assert cert.verdict() == "positive"
    assert cert.kernel_stratifying is True
    assert cert.kernel_idempotent is True
    assert cert.witnesses["dim AeA"] == 8
    assert cert.witnesses["dim A/AeA"] == 1
    assert cert.witnesses["dim eAe"] == 4
    assert cert.witnesses["corner matches"] == kronecker.name
    assert cert.idempotent_generator == "e2 + e3"


def test_kronecker_sink_ideal(kronecker):
    cert = check_stratifying_ideal(kronecker, parse_element(kronecker, "e1"))
    assert cert.verdict() == "positive"
    assert cert.witnesses["dim A/AeA"] == 1


def test_stratifying_preconditions(three_vertex):
    with pytest.raises(PreconditionError, match="not idempotent"):
        check_stratifying_ideal(three_vertex, parse_element(three_vertex, "alpha"))
    with pytest.raises(PreconditionError, match="whole algebra"):
        check_stratifying_ideal(three_vertex, three_vertex.unit)


def test_corner_matches_kronecker(three_vertex, kronecker):
    c = corner(three_vertex, parse_element(three_vertex, "e2 + e3")).algebra
    match = match_path_algebra(c, kronecker)
    assert match is not None
    assert match.hom.is_injective
    assert set(match.arrow_images) == {"a", "b"}


def test_match_rejects_other_dimension(three_vertex, kronecker):
    assert match_path_algebra(kronecker, three_vertex) is None


def test_match_needs_presentation(kronecker, M2):
    with pytest.raises(AlgebraError):
        match_path_algebra(kronecker, M2)


def test_full_embedding_along_epimorphism(T2_inclusion):
    _, inc = T2_inclusion
    reg = regular_module(inc.target)
    check = check_full_embedding(inc, [(reg, reg)])
    assert check.holds
    assert check.rows[0][1] == 4


def test_quotient_by_stratifying_ideal_is_exceptional(three_vertex):
    rep = check_exceptional_quotient(three_vertex, parse_element(three_vertex, "e2 + e3"))
    assert rep.exceptional


# ── construction one ─────────────────────────────────────────────────────────

def test_construction_one_on_triangular_inclusion(T2_inclusion):
    _, inc = T2_inclusion
    res = construction_one(inc)
    assert res.A_prime.algebra.dim == 7
    assert res.lambda_prime.is_surjective
    assert res.psi.rank == 4
    assert res.tilting.is_tilting is True
    assert res.checks.verdict() == "positive"
    assert res.checks.kernel_stratifying is True
    assert res.checks.witnesses["dim B/A"] == 1


def test_construction_one_on_kronecker_representation(lam1):
    res = construction_one(lam1)
    assert res.A_prime.algebra.dim == 16
    assert res.checks.witnesses["pd(B_A)"] == 0
    assert res.checks.witnesses["dim B/A"] == 5
    assert res.checks.is_surjective is True
    assert res.checks.verdict() == "positive"
    assert res.checks.kernel_stratifying is True


def test_construction_one_needs_injective(arrow_quotient):
    with pytest.raises(NotInjectiveError):
        construction_one(arrow_quotient)


def test_construction_one_rejects_bijection(kronecker):
    with pytest.raises(ConstructionError, match="bijective"):
        construction_one(RingHom.identity(kronecker))


def test_construction_one_needs_epimorphism(diagonal):
    with pytest.raises(NotEpimorphismError):
        construction_one(diagonal)


# ── construction two ─────────────────────────────────────────────────────────

def test_cone_of_inclusion_has_cokernel_homology(T2_inclusion):
    _, inc = T2_inclusion
    k = cone_of(inc)
    assert k.homology_dims() == {-1: 0, 0: 1}


def test_construction_two_on_preprojective_one(lam1):
    res = construction_two(lam1)
    assert res.C.dim == 1
    assert res.kernel_dim == 3
    assert res.coker_dim == 0
    assert res.hom_BA_dim == 3


def test_construction_two_on_preprojective_two(kronecker):
    lam2 = representation_hom(kronecker_preprojective(kronecker, 2))
    res = construction_two(lam2)
    assert res.C.dim == 9
    assert res.C.rad.dim == 0
    assert res.mu.is_injective
    assert res.coker_dim == 5
    assert res.ext1_BA_dim == 5


def test_construction_two_on_triangular_inclusion(T2_inclusion):
    _, inc = T2_inclusion
    res = construction_two(inc, followups=True)
    assert res.C.dim == 1
    assert res.checks.witnesses["dim End(B/A)"] == 1
    assert res.kernel_dim + res.mu.rank == 3
    assert "pd_A(C)" in res.followups


def test_construction_two_degenerate_cone(kronecker):
    with pytest.raises(DegenerateConeError):
        construction_two(RingHom.identity(kronecker))


def test_construction_two_needs_epimorphism(diagonal):
    with pytest.raises(NotEpimorphismError):
        construction_two(diagonal)


def test_construction_two_followups_on_preprojective_two(kronecker):
    lam2 = representation_hom(kronecker_preprojective(kronecker, 2))
    res = construction_two(lam2, followups=True)
    extra = res.followups
    assert extra is not None
    assert res.checks.witnesses["followups"] is extra
    assert isinstance(extra["mu_homological_epi"], bool)
    # hereditary source: every module has pd at most one
    assert extra["pd_A(C)"] in (0, 1)
    assert extra["pd_A(Ext^1(B,A))"] in (0, 1)
    # mu is injective, so its kernel is the zero ideal
    assert extra["kernel_stratifying"] is True
