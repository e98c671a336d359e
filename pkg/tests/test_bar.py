import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hochschild.algebra import sample_library
from hochschild.cochain import BudgetError, Cochain, basis_cochains, cohomology, differential, is_coboundary, signed_differential
from hochschild.exactlin import rank
from hochschild.gerst import cup, signed_cup
from hochschild.bar import (
    BarComplex, EquivarianceError, BimoduleMap, WindowError, bimodule_map_of_cochain, build_bar,
    cochain_of_bimodule_map, convolution, counit_left, diagonal_AW, diagonal_chain_map_defect,
    diagonal_homotopy_residual, diagonal_point, endo_complex, generator, lift, lift_chain_defect,
    lift_equivariance_defect, transported_differential, yoneda,
)
import oracles

SMALL = ["field", "trunc_poly(2)", "group_cyclic(2)", "triangular(2)"]


@pytest.mark.parametrize("key", SMALL + ["matrix(2)"])
def test_bar_is_exact_resolution(key):
    bar = build_bar(sample_library(key), 3 if key != "matrix(2)" else 2)
    assert bar.check_square_zero()
    assert bar.augmented_homology()[:-1] == [0] * bar.N
    assert bar.augmented_homology()[-1] == 0


def test_bprime_ranks_dual_numbers():
    bar = BarComplex(sample_library("trunc_poly(2)"), 2)
    assert rank(bar.matrix(1)) == 2
    assert oracles.rank(bar.matrix(1).to_dense()) == 2
    assert rank(bar.augmentation_matrix()) == 2


def test_bprime_zero_on_B0():
    bar = BarComplex(sample_library("trunc_poly(2)"), 1)
    assert bar.bprime({(1, 1): Fraction(1)}) == {}


def test_bar_window_and_budget():
    bar = BarComplex(sample_library("field"), 2)
    with pytest.raises(WindowError):
        bar.matrix(3)
    with pytest.raises(WindowError):
        bar.matrix(0)
    with pytest.raises(BudgetError):
        BarComplex(sample_library("matrix(2)"), 8, budget=1000)
    with pytest.raises(ValueError):
        BarComplex(sample_library("field"), -1)


@pytest.mark.parametrize("key", SMALL)
def test_bimodule_round_trip(key):
    A = sample_library(key)
    rng = random.Random(7)
    for n in range(3):
        f = Cochain.random(A, n, rng)
        m = bimodule_map_of_cochain(f)
        assert m.is_equivariant()
        assert cochain_of_bimodule_map(m) == f


def test_non_equivariant_map_rejected():
    A = sample_library("trunc_poly(2)")
    m = BimoduleMap(A, 0, {(0, 0): {0: Fraction(1)}})
    assert not m.is_equivariant()
    with pytest.raises(EquivarianceError):
        cochain_of_bimodule_map(m)


@pytest.mark.parametrize("key", SMALL)
def test_transported_differential_is_hochschild(key):
    A = sample_library(key)
    rng = random.Random(2)
    for n in range(3):
        f = Cochain.random(A, n, rng)
        assert transported_differential(f) == differential(f)


@pytest.mark.parametrize("key", ["trunc_poly(2)", "triangular(2)"])
def test_diagonals_are_chain_maps(key):
    bar = BarComplex(sample_library(key), 3)
    for n in range(1, 4):
        assert diagonal_chain_map_defect(bar, n, diagonal_AW) == []
        assert diagonal_chain_map_defect(bar, n, diagonal_point) == []


@pytest.mark.parametrize("key", ["trunc_poly(2)", "group_cyclic(2)"])
def test_diagonal_homotopy(key):
    bar = BarComplex(sample_library(key), 3)
    for n in range(3):
        assert diagonal_homotopy_residual(bar, n) == []
    with pytest.raises(WindowError):
        diagonal_homotopy_residual(bar, 3)


def test_diagonals_are_counital():
    A = sample_library("triangular(2)")
    bar = BarComplex(A, 3)
    for n in range(3):
        for t in list(bar.basis(n))[::5]:
            x = {t: Fraction(1)}
            assert counit_left(bar, diagonal_AW(bar, x)) == x
    # the point diagonal is counital only after augmenting
    for t in bar.basis(0):
        x = {t: Fraction(1)}
        assert bar.augment(counit_left(bar, diagonal_point(bar, x))) == bar.augment(x)


@pytest.mark.parametrize("key", SMALL)
def test_convolution_is_signed_cup(key):
    A = sample_library(key)
    for p in range(3):
        for q in range(3 - p):
            for f in list(basis_cochains(A, p))[::3]:
                for g in list(basis_cochains(A, q))[::3]:
                    assert convolution(f, g) == signed_cup(f, g)
                    assert convolution(f, g, koszul=False) == cup(f, g)


def test_point_convolution_vanishes_in_positive_arity():
    A = sample_library("trunc_poly(2)")
    rng = random.Random(1)
    for p, q in [(1, 0), (0, 1), (1, 1), (2, 1)]:
        f, g = Cochain.random(A, p, rng), Cochain.random(A, q, rng)
        assert convolution(f, g, "point").is_zero()
    a, b = Cochain.random(A, 0, rng), Cochain.random(A, 0, rng)
    assert convolution(a, b, "point") == cup(a, b)


@pytest.mark.parametrize("key", SMALL)
def test_lift_is_chain_map_and_equivariant(key):
    A = sample_library(key)
    rng = random.Random(4)
    for q in range(3):
        g = Cochain.random(A, q, rng)
        assert lift_chain_defect(g, 3) == []
        assert lift_equivariance_defect(g, q + 1) is None


def test_lift_lifts_the_cochain():
    A = sample_library("triangular(2)")
    bar = BarComplex(A, 2)
    g = Cochain.random(A, 2, random.Random(9))
    for I in [(0, 1), (2, 2), (1, 0)]:
        assert bar.augment(lift(g, generator(A, I))) == {k: v for k, v in g(*I).items() if v}


@pytest.mark.parametrize("key", SMALL)
def test_yoneda_matches_signed_cup(key):
    A = sample_library(key)
    rng = random.Random(8)
    for p in range(3):
        for q in range(3):
            f, g = Cochain.random(A, p, rng), Cochain.random(A, q, rng)
            assert yoneda(f, g) == signed_cup(f, g)


def test_endo_window_dual_numbers():
    A = sample_library("trunc_poly(2)")
    E = endo_complex(BarComplex(A, 4), 3)
    dims = [E.cohomology_dim(q) for q in E.safe_degrees()]
    assert dims == list(cohomology(A, 2).dims)
    assert [E.comparison_rank(q) for q in E.safe_degrees()] == dims
    for k in range(-2, 1):
        assert E.square_zero(k)


def test_endo_window_identity_is_cycle():
    A = sample_library("group_cyclic(2)")
    E = endo_complex(BarComplex(A, 3), 2)
    idv = E.identity()
    assert E.flatten(-1, E.differential(0, idv)) == {}
    assert E.comparison(0, idv) == Cochain.unit(A)


def test_endo_window_edges():
    bar = BarComplex(sample_library("field"), 2)
    with pytest.raises(WindowError):
        endo_complex(bar, 2)
    with pytest.raises(WindowError):
        endo_complex(bar, 0)
    E = endo_complex(bar)
    with pytest.raises(WindowError):
        E.cohomology_dim(E.N)


@given(st.sampled_from(SMALL), st.integers(0, 2), st.integers(0, 2), st.integers(0, 10**6))
def test_yoneda_minus_cup_is_exact(key, p, q, seed):
    A = sample_library(key)
    rng = random.Random(seed)
    f, g = Cochain.random(A, p, rng), Cochain.random(A, q, rng)
    r = yoneda(f, g) - signed_cup(f, g)
    assert r.is_zero() or (p + q > 0 and is_coboundary(r) is not None)


@given(st.sampled_from(SMALL), st.integers(0, 2), st.integers(0, 10**6))
def test_convolution_derivation(key, p, seed):
    A = sample_library(key)
    rng = random.Random(seed)
    f, g = Cochain.random(A, p, rng), Cochain.random(A, 1, rng)
    d = signed_differential
    assert d(convolution(f, g)) == convolution(d(f), g) + convolution(f, d(g)).scale((-1) ** p)
