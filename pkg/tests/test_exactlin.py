from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hochschild import exactlin as el
import oracles

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def grids(max_r=5, max_c=5):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_scalar_parsing():
    assert el.scalar("3/6") == Fraction(1, 2)
    assert el.scalar(-2) == Fraction(-2)
    assert el.fmt(Fraction(-4, 2)) == "-2"
    assert el.fmt(Fraction(3, 9)) == "1/3"


@pytest.mark.parametrize("bad", [0.5, "0.5", "1e3", "x", None])
def test_scalar_refuses_inexact(bad):
    with pytest.raises((TypeError, ValueError)):
        el.scalar(bad)


def test_identity_rank_and_solve():
    m = el.Matrix.identity(4)
    assert el.rank(m) == 4
    assert el.solve(m, [1, 2, 3, 4]) == [1, 2, 3, 4]


def test_solve_inconsistent_returns_none():
    m = el.Matrix.from_dense([[1, 0], [0, 0]])
    assert el.solve(m, [0, 1]) is None


def test_solve_length_mismatch():
    m = el.Matrix.from_dense([[1, 0], [0, 1]])
    with pytest.raises(el.DimensionError):
        el.solve(m, [1, 2, 3])


def test_quotient_requires_containment():
    big = el.Subspace(3, [{0: 1}])
    small_ = el.Subspace(3, [{1: 1}])
    with pytest.raises(el.ContainmentError):
        el.quotient_dim(big, small_)
    assert el.quotient_dim(el.Subspace(3, [{0: 1}, {1: 1}]), small_) == 1


def test_dependent_basis_rejected():
    with pytest.raises(ValueError):
        el.Subspace(2, [{0: 1}, {0: 2}])


@given(grids())
def test_rank_matches_sympy(g):
    assert el.rank(el.Matrix.from_dense(g)) == oracles.rank(g)


@given(grids())
def test_rank_nullity_and_kernel(g):
    m = el.Matrix.from_dense(g)
    k = el.kernel(m)
    assert el.rank(m) + k.dim == m.ncols
    for v in k.basis:
        assert m.apply(v) == {}


@given(grids(), st.data())
def test_solve_round_trip(g, data):
    m = el.Matrix.from_dense(g)
    x = data.draw(st.lists(small, min_size=m.ncols, max_size=m.ncols))
    b = [sum((a * c for a, c in zip(row, x)), Fraction(0)) for row in g]
    y = el.solve(m, b)
    assert y is not None
    assert [sum((a * c for a, c in zip(row, y)), Fraction(0)) for row in g] == b


@given(grids(4, 4), grids(4, 4))
def test_matmul_matches_dense(a, b):
    A, B = el.Matrix.from_dense(a), el.Matrix.from_dense(b)
    if A.ncols != B.nrows:
        return
    want = [[sum((a[i][k] * b[k][j] for k in range(A.ncols)), Fraction(0)) for j in range(B.ncols)]
            for i in range(A.nrows)]
    assert (A @ B).to_dense() == want


@given(grids())
def test_image_dimension_is_rank(g):
    m = el.Matrix.from_dense(g)
    assert el.image(m).dim == el.rank(m)
    assert el.rank(m.transpose()) == el.rank(m)
