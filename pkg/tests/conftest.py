"""Shared fixtures: the algebras most tests are phrased in."""

import pytest
from hypothesis import settings

from src.algebra import Arrow, QuiverPresentation, from_quiver, matrix_algebra, triangular_algebra
from src.linalg import QQ_FIELD, parse_field

settings.register_profile("strathom", max_examples=200, deadline=None, derandomize=True)
settings.load_profile("strathom")


def three_vertex_presentation() -> QuiverPresentation:
    """alpha: 1->2, beta, gamma: 2->3, delta: 3->1 with beta*alpha, alpha*delta, delta*gamma killed."""
    arrows = (
        Arrow("alpha", "1", "2"),
        Arrow("beta", "2", "3"),
        Arrow("gamma", "2", "3"),
        Arrow("delta", "3", "1"),
    )
    rels = (("beta", "alpha"), ("alpha", "delta"), ("delta", "gamma"))
    return QuiverPresentation(("1", "2", "3"), arrows, rels)


def kronecker_presentation() -> QuiverPresentation:
    return QuiverPresentation(("1", "2"), (Arrow("a", "2", "1"), Arrow("b", "2", "1")))


@pytest.fixture
def QQ():
    return QQ_FIELD


@pytest.fixture
def GF5():
    return parse_field("fp:5")


@pytest.fixture
def three_vertex():
    return from_quiver(three_vertex_presentation(), QQ_FIELD, name="A")


@pytest.fixture
def kronecker():
    return from_quiver(kronecker_presentation(), QQ_FIELD, name="K")


@pytest.fixture
def A2():
    """Path algebra of 1 -> 2."""
    return from_quiver(QuiverPresentation(("1", "2"), (Arrow("x", "1", "2"),)), QQ_FIELD, name="A2")


@pytest.fixture
def M2():
    return matrix_algebra(2, QQ_FIELD)


@pytest.fixture
def T2_inclusion():
    """Upper triangular 2x2 matrices with their inclusion into M2."""
    return triangular_algebra(2, QQ_FIELD)
