"""Tests for exact linear algebra over QQ and GF(p)."""

from fractions import Fraction

import pytest

from src.linalg import (
    Coordinates,
    Field,
    FieldMismatchError,
    Mat,
    Subspace,
    UnsupportedFieldError,
    extend_basis,
    kernel_basis,
    kron,
    left_kernel,
    parse_field,
    rref,
    solve,
)


def test_parse_field_specs():
    assert parse_field("q").characteristic == 0
    assert parse_field(" QQ ").name == "q"
    assert parse_field("fp:7").name == "fp:7"


@pytest.mark.parametrize("spec", ["fp:4", "fp:1", "fp:x", "r", ""])
def test_parse_field_rejects(spec):
    with pytest.raises(UnsupportedFieldError):
        parse_field(spec)


def test_field_convert_fraction_and_string(QQ, GF5):
    assert QQ.format(QQ.convert("1/2") + QQ.convert(Fraction(1, 2))) == "1"
    assert GF5.format(GF5.convert(7)) == "2"
    # 1/2 in GF(5) is 3
    assert GF5.format(GF5.convert("1/2")) == "3"


def test_field_convert_denominator_vanishing():
    with pytest.raises(ValueError, match="vanishes"):
        parse_field("fp:3").convert("1/3")


def test_field_convert_rejects_bool(QQ):
    with pytest.raises(TypeError):
        QQ.convert(True)


def test_to_plain_keeps_ints(QQ):
    assert QQ.to_plain(QQ.convert(4)) == 4
    assert QQ.to_plain(QQ.convert("-2/3")) == "-2/3"


def test_rank_and_rref(QQ):
    m = Mat.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]], QQ)
    res = rref(m)
    assert res.rank == 2
    assert res.pivot_columns == (0, 1)
    assert m.rank() == 2


def test_rank_depends_on_characteristic():
    rows = [[1, 1], [1, -1]]
    assert Mat.from_rows(rows, parse_field("q")).rank() == 2
    assert Mat.from_rows(rows, parse_field("fp:2")).rank() == 1


def test_kernel_basis_annihilates(QQ):
    m = Mat.from_rows([[1, 2, 3], [2, 4, 6]], QQ)
    k = kernel_basis(m)
    assert k.shape == (3, 2)
    assert (m @ k).is_zero()


def test_left_kernel_annihilates(QQ):
    m = Mat.from_rows([[1, 0], [0, 1], [1, 1]], QQ)
    k = left_kernel(m)
    assert k.nrows == 1
    assert (k @ m).is_zero()


def test_left_kernel_of_invertible_is_empty(QQ):
    assert left_kernel(Mat.identity(3, QQ)).nrows == 0


def test_solve_consistent_and_inconsistent(QQ):
    m = Mat.from_rows([[1, 1], [0, 1]], QQ)
    b = Mat.from_rows([[3], [1]], QQ)
    x = solve(m, b)
    assert x is not None and m @ x == b
    singular = Mat.from_rows([[1, 1], [1, 1]], QQ)
    assert solve(singular, Mat.from_rows([[1], [0]], QQ)) is None


def test_inverse_roundtrip(QQ):
    m = Mat.from_rows([[2, 1], [1, 1]], QQ)
    assert m @ m.inverse() == Mat.identity(2, QQ)


def test_field_mismatch_raises(QQ, GF5):
    with pytest.raises(FieldMismatchError):
        Mat.identity(2, QQ) @ Mat.identity(2, GF5)


def test_block_diag_and_kron(QQ):
    a = Mat.from_rows([[1, 2]], QQ)
    b = Mat.from_rows([[3]], QQ)
    bd = Mat.block_diag([a, b], QQ)
    assert bd.shape == (2, 3)
    assert bd.to_plain() == [[1, 2, 0], [0, 0, 3]]
    assert kron(a, b).to_plain() == [[3, 6]]


def test_subspace_membership_and_quotient(QQ):
    s = Subspace.span(Mat.from_rows([[1, 1, 0], [0, 0, 1]], QQ))
    assert s.dim == 2
    assert s.contains(tuple(QQ.convert(x) for x in (2, 2, 5)))
    assert not s.contains(tuple(QQ.convert(x) for x in (1, 0, 0)))
    assert s.complement == (1,)
    q = s.quotient_coords(Mat.from_rows([[1, 0, 0]], QQ))
    assert q.to_plain() == [[-1]]


def test_subspace_equality_is_basis_independent(QQ):
    a = Subspace.span(Mat.from_rows([[1, 0], [1, 1]], QQ))
    b = Subspace.full(2, QQ)
    assert a == b
    assert Subspace.zero(2, QQ).issubset(a)


def test_coordinates_requires_independent_rows(QQ):
    with pytest.raises(ValueError, match="independent"):
        Coordinates(Mat.from_rows([[1, 1], [2, 2]], QQ))
    c = Coordinates(Mat.from_rows([[1, 1], [0, 1]], QQ))
    assert c.of(Mat.from_rows([[2, 5]], QQ)).to_plain() == [[2, 3]]


def test_extend_basis_skips_dependent(QQ):
    base = Subspace.span(Mat.from_rows([[1, 0, 0]], QQ))
    cands = [tuple(QQ.convert(x) for x in v) for v in ((2, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1))]
    assert extend_basis(base, cands) == [1, 3]


def test_prime_field_rejects_composite():
    with pytest.raises(UnsupportedFieldError):
        Field(9)
