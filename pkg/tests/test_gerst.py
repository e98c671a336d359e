import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hochschild.algebra import sample_library
from hochschild.cochain import Cochain, basis_cochains, differential, is_coboundary, signed_differential
from hochschild.gerst import (
    ConventionMismatchError, H_EXPONENT, H_OP_EXPONENT, bracket_G, bracket_signed, circle,
    commutativity_homotopy, commutativity_homotopy_op, commutativity_residual, cup,
    homotopy_commutativity_check, resolve_exponent, restrict_14, restrict_23, sample_quadruples,
    sgn, signed_cup, square_homotopy_h, square_homotopy_h_op, h_residual, h_op_residual,
)

SMALL = ["field", "trunc_poly(2)", "group_cyclic(2)", "product(2)", "triangular(2)"]


def rand(key, n, seed):
    A = sample_library(key)
    return Cochain.random(A, n, random.Random(seed))


def test_cup_of_derivative_with_itself():
    A = sample_library("trunc_poly(2)")
    D = Cochain.basis(A, (1,), 0)
    assert cup(D, D)(1, 1) == {0: Fraction(1)}
    assert signed_cup(D, D)(1, 1) == {0: Fraction(-1)}


def test_cup_with_unit_is_identity():
    A = sample_library("triangular(2)")
    f = Cochain.random(A, 2, random.Random(1))
    u = Cochain.unit(A)
    assert cup(u, f) == f and cup(f, u) == f
    assert signed_cup(u, f) == f and signed_cup(f, u) == f


def test_circle_of_derivations_is_composition():
    A = sample_library("trunc_poly(3)")
    E = Cochain.basis(A, (1,), 1) + Cochain.basis(A, (2,), 2).scale(2)
    D = Cochain.basis(A, (1,), 0) + Cochain.basis(A, (2,), 1).scale(2)
    ED = circle(E, D)
    for x in range(A.dim):
        expect = {}
        for k, v in D(x).items():
            for j, w in E(k).items():
                expect[j] = expect.get(j, 0) + v * w
        assert ED(x) == {k: v for k, v in expect.items() if v}


def test_circle_with_element_inserts_it():
    A = sample_library("trunc_poly(2)")
    mu = Cochain.multiplication(A)
    x = Cochain.basis(A, (), 1)
    # mu{x}(a) = mu(x, a) - mu(a, x) = 0 on a commutative algebra
    assert circle(mu, x).is_zero()
    assert circle(x, mu).is_zero() and circle(x, mu).arity == 1


def test_bracket_of_derivations_is_commutator():
    A = sample_library("trunc_poly(3)")
    E = Cochain.basis(A, (1,), 1) + Cochain.basis(A, (2,), 2).scale(2)
    D = Cochain.basis(A, (1,), 0) + Cochain.basis(A, (2,), 1).scale(2)
    assert bracket_G(E, D) == circle(E, D) - circle(D, E)
    assert bracket_signed(E, D) == bracket_G(E, D)


def test_bracket_of_dual_number_operators():
    A = sample_library("trunc_poly(2)")
    D = Cochain.basis(A, (1,), 0)
    x = Cochain.basis(A, (), 1)
    b = bracket_G(D, x)
    assert b.arity == 0
    assert b.value() == {0: Fraction(1)}


@pytest.mark.parametrize("key", SMALL)
def test_homotopy_identity_on_basis(key):
    A = sample_library(key)
    for p in (1, 2):
        for q in (1, 2):
            fs = list(basis_cochains(A, p))[:20]
            gs = list(basis_cochains(A, q))[:20]
            for f in fs[::3]:
                for g in gs[::3]:
                    assert homotopy_commutativity_check(f, g).ok
                    assert commutativity_residual(f, g).is_zero()


def test_homotopy_check_detects_wrong_sign(monkeypatch):
    import hochschild.gerst as G
    A = sample_library("trunc_poly(2)")
    f = Cochain.basis(A, (1,), 0)
    assert homotopy_commutativity_check(f, f).ok
    monkeypatch.setattr(G, "signed_cup", G.cup)
    with pytest.raises(ConventionMismatchError) as e:
        G.homotopy_commutativity_check(f, f)
    assert e.value.degrees == (1, 1)
    assert not G.homotopy_commutativity_check(f, f, raise_on_failure=False).ok


def test_homotopy_check_rejects_arity_zero():
    A = sample_library("field")
    with pytest.raises(ValueError):
        homotopy_commutativity_check(Cochain.unit(A), Cochain.identity(A))


def test_homotopies_sum_to_bracket():
    for seed in range(10):
        for p, q in [(1, 1), (1, 2), (2, 1), (2, 2), (0, 2)]:
            f, g = rand("triangular(2)", p, seed), rand("triangular(2)", q, seed + 100)
            assert commutativity_homotopy(f, g) + commutativity_homotopy_op(f, g) == bracket_signed(f, g)


def test_square_restrictions():
    A = sample_library("trunc_poly(2)")
    rng = random.Random(5)
    for p, q in [(1, 1), (1, 2), (2, 2), (0, 1)]:
        f, g = Cochain.random(A, p, rng), Cochain.random(A, q, rng)
        assert restrict_23(square_homotopy_h, f, g) == commutativity_homotopy(f, g)
        assert restrict_14(square_homotopy_h, f, g).is_zero()
        assert restrict_14(square_homotopy_h_op, f, g).is_zero()
        total = (restrict_23(square_homotopy_h, f, g) + restrict_23(square_homotopy_h_op, f, g)
                 + restrict_14(square_homotopy_h, f, g) + restrict_14(square_homotopy_h_op, f, g))
        assert total == bracket_signed(f, g)


def test_exponent_resolution_is_unique():
    algs = [sample_library(k) for k in ["trunc_poly(2)", "triangular(2)", "group_cyclic(2)"]]
    quads = sample_quadruples(algs, 2, 120, seed=11)
    r = resolve_exponent("h", quads)
    assert r.unique and r.resolved == H_EXPONENT
    assert all(v > 0 for k, v in r.failures.items() if k != H_EXPONENT)
    r = resolve_exponent("h_op", quads)
    assert r.unique and r.resolved == H_OP_EXPONENT
    assert r.to_json()["resolved"] == "g1+g2"


def test_wrong_reading_produces_witness():
    algs = [sample_library("triangular(2)")]
    r = resolve_exponent("h", sample_quadruples(algs, 2, 60, seed=2))
    w = r.witnesses["f1+f1"]
    assert len(w["arities"]) == 4 and w["point"] is not None


def test_unknown_homotopy_name():
    with pytest.raises(ValueError):
        resolve_exponent("k", [])


def test_mismatch_error_reports_point():
    e = ConventionMismatchError("x", (1, 2), ((0,), 1, Fraction(1)))
    assert isinstance(e, AssertionError)
    assert e.degrees == (1, 2)


@given(st.sampled_from(SMALL), st.integers(0, 2), st.integers(0, 2), st.integers(0, 10**6))
def test_signed_cup_is_derivation_for_signed_d(key, p, q, seed):
    f, g = rand(key, p, seed), rand(key, q, seed + 1)
    lhs = signed_differential(signed_cup(f, g))
    rhs = signed_cup(signed_differential(f), g) + signed_cup(f, signed_differential(g)).scale(sgn(p))
    assert lhs == rhs


@given(st.sampled_from(SMALL), st.integers(0, 2), st.integers(0, 2), st.integers(0, 10**6))
def test_bracket_chain_map(key, p, q, seed):
    f, g = rand(key, p, seed), rand(key, q, seed + 1)
    if p + q == 0:
        return
    d = signed_differential
    lhs = d(bracket_signed(f, g))
    rhs = -bracket_signed(d(f), g) - bracket_signed(f, d(g)).scale(sgn(p))
    assert lhs == rhs


@given(st.sampled_from(SMALL), st.integers(1, 2), st.integers(1, 2), st.integers(0, 10**6))
def test_bracket_graded_antisymmetry(key, p, q, seed):
    f, g = rand(key, p, seed), rand(key, q, seed + 1)
    assert bracket_G(f, g) == bracket_G(g, f).scale(-sgn((p - 1) * (q - 1)))


@given(st.sampled_from(SMALL), st.integers(0, 10**6))
def test_cup_associative(key, seed):
    f, g, h = rand(key, 1, seed), rand(key, 2, seed + 1), rand(key, 1, seed + 2)
    assert cup(cup(f, g), h) == cup(f, cup(g, h))
    assert signed_cup(signed_cup(f, g), h) == signed_cup(f, signed_cup(g, h))


@given(st.sampled_from(SMALL), st.integers(0, 10**6),
       st.tuples(*[st.integers(0, 1)] * 4))
def test_square_homotopies_random(key, seed, arities):
    quad = [rand(key, n, seed + i) for i, n in enumerate(arities)]
    assert h_residual(*quad).is_zero()
    assert h_op_residual(*quad).is_zero()


@pytest.mark.parametrize("key, top", [("trunc_poly(2)", 3), ("triangular(2)", 3), ("group_cyclic(3)", 2),
                                      ("matrix(2)", 2)])
def test_signed_cup_chain_map_exhaustive(key, top):
    A = sample_library(key)
    d = signed_differential
    basis = {n: list(basis_cochains(A, n)) for n in range(top + 1)}
    for p in range(top + 1):
        for q in range(top + 1):
            for f in basis[p]:
                for g in basis[q]:
                    lhs = d(signed_cup(f, g))
                    assert lhs == signed_cup(d(f), g) + signed_cup(f, d(g)).scale(sgn(p))


def test_plain_cup_needs_unsigned_differential():
    A = sample_library("triangular(2)")
    rng = random.Random(0)
    sd = signed_differential
    mismatches = 0
    for _ in range(10):
        f, g = Cochain.random(A, 1, rng), Cochain.random(A, 1, rng)
        assert differential(cup(f, g)) == cup(differential(f), g) - cup(f, differential(g))
        mismatches += sd(cup(f, g)) != cup(sd(f), g) - cup(f, sd(g))
    assert mismatches > 0
