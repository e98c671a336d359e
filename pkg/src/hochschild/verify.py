"""
Invariant suites.  Each suite takes an algebra and returns a list of
:class:`CheckResult`; a failing check always carries a witness.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

from . import bar as barmod
from . import dpoly, e2, exactlin, gerst
from .algebra import AlgebraSpec, center, opposite, sample_library, tensor
from .cochain import Cochain, basis_cochains, cohomology, differential, is_coboundary, signed_differential
from .exactlin import fmt


@dataclass
class CheckResult:
    suite: str
    name: str
    ok: bool
    count: int = 0
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"name": self.name, "ok": self.ok, "count": self.count}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class VerifyReport:
    algebra: str
    suites: dict
    conventions: dict
    timing: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for checks in self.suites.values() for c in checks)

    def failures(self) -> list:
        return [c for checks in self.suites.values() for c in checks if not c.ok]

    def to_json(self, with_timing: bool = False) -> dict:
        out = {
            "algebra": self.algebra,
            "ok": self.ok,
            "conventions": self.conventions,
            "suites": {k: [c.to_json() for c in v] for k, v in self.suites.items()},
        }
        if with_timing:
            out["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return out


def _cochain_witness(args, f: Cochain) -> dict:
    point = f.first_nonzero()
    return {
        "inputs": [c.describe() for c in args],
        "point": {"args": list(point[0]), "out": point[1], "value": fmt(point[2])} if point else None,
    }


class _Suite:
    """Collects checks for one suite."""

    def __init__(self, name: str):
        self.name = name
        self.results: list = []

    def run(self, name: str, cases, residual: Callable):
        """residual(case) returns None when fine, else a witness dict."""
        n = 0
        for case in cases:
            n += 1
            w = residual(case)
            if w is not None:
                self.results.append(CheckResult(self.name, name, False, n, w))
                return
        self.results.append(CheckResult(self.name, name, True, n))

    def fact(self, name: str, ok: bool, witness: Optional[dict] = None):
        self.results.append(CheckResult(self.name, name, bool(ok), 1, None if ok else (witness or {})))


def _zero_or(args, f: Cochain):
    return None if f.is_zero() else _cochain_witness(args, f)


def _arity_cap(A: AlgebraSpec) -> int:
    return 2 if A.dim <= 3 else 1


# -- suites ----------------------------------------------------------------------------

def suite_exactlin(A: AlgebraSpec, seed: int = 0) -> list:
    s = _Suite("exactlin")
    rng = random.Random(seed)
    mats = []
    for _ in range(20):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        mats.append(exactlin.Matrix.from_dense(
            [[Fraction(rng.randint(-2, 2), rng.choice((1, 1, 2, 3))) if rng.random() < 0.6 else 0 for _ in range(c)]
             for _ in range(r)]))

    def rank_nullity(m):
        k = exactlin.kernel(m)
        if exactlin.rank(m) + k.dim != m.ncols:
            return {"shape": list(m.shape)}
        for v in k.basis:
            if m.apply(v):
                return {"shape": list(m.shape), "kernel_vector": {str(i): fmt(x) for i, x in v.items()}}
        return None

    def solve_back(m):
        x = {j: Fraction(rng.randint(-3, 3)) for j in range(m.ncols)}
        b = m.apply(x)
        y = exactlin.Solver(m).solve(b)
        if y is None or m.apply(y) != b:
            return {"shape": list(m.shape)}
        return None

    def transpose_rank(m):
        return None if exactlin.rank(m) == exactlin.rank(m.transpose()) else {"shape": list(m.shape)}

    s.run("rank + nullity = columns", mats, rank_nullity)
    s.run("solve reproduces the right-hand side", mats, solve_back)
    s.run("row rank = column rank", mats, transpose_rank)
    return s.results


def suite_algebra(A: AlgebraSpec, seed: int = 0) -> list:
    s = _Suite("algebra")
    s.fact("opposite of opposite", opposite(opposite(A)).structure == A.structure)
    T = tensor(A, sample_library("field"))
    s.fact("tensor with the field keeps the dimension", T.dim == A.dim)
    Z = center(A)
    s.run("center elements commute with the basis", Z.basis, lambda z: next(
        ({"element": {str(k): fmt(v) for k, v in z.items()}, "basis": i}
         for i in range(A.dim) if A.mul(z, {i: 1}) != A.mul({i: 1}, z)), None))
    s.fact("unit lies in the center", Z.contains(A.unit_vec))
    s.fact("commutative iff center is everything", A.is_commutative == (Z.dim == A.dim))
    return s.results


def suite_cochain(A: AlgebraSpec, seed: int = 0) -> list:
    s = _Suite("cochain")
    rng = random.Random(seed)
    cap = _arity_cap(A) + 1
    cases = [f for n in range(cap + 1) for f in basis_cochains(A, n)]
    s.run("d d = 0 on basis cochains", cases, lambda f: _zero_or((f,), differential(differential(f))))
    s.run("signed d squares to zero", cases, lambda f: _zero_or((f,), signed_differential(signed_differential(f))))
    rep = cohomology(A, 1, with_representatives=True)
    s.fact("HH^0 = center", rep.dims[0] == center(A).dim, {"hh0": rep.dims[0], "center": center(A).dim})
    for n, reps in enumerate(rep.representatives):
        s.run(f"HH^{n} representatives are cocycles", reps, lambda f: _zero_or((f,), differential(f)))
    hs = [Cochain.random(A, n, rng) for n in range(cap) for _ in range(3)]

    def solvable(h):
        dh = differential(h)
        g = is_coboundary(dh)
        if g is None or differential(g) != dh:
            return _cochain_witness((h,), dh)
        return None

    s.run("coboundaries are solved", hs, solvable)
    if A.is_commutative:
        def derivation(f):
            if not differential(f).is_zero():
                return None
            for i, j in product(range(A.dim), repeat=2):
                lhs = f.value(A.mul({i: 1}, {j: 1}))
                rhs = A.mul(f(i), {j: 1})
                exactlin.axpy(rhs, 1, A.mul({i: 1}, f(j)))
                if lhs != {k: v for k, v in rhs.items() if v}:
                    return {"cocycle": f.describe(), "pair": [i, j]}
            return None
        s.run("arity-1 cocycles are derivations", rep.representatives[1], derivation)
    return s.results


def suite_gerst(A: AlgebraSpec, seed: int = 0) -> list:
    s = _Suite("gerst")
    cap = _arity_cap(A)
    pairs = [(f, g) for p in range(1, cap + 1) for q in range(1, cap + 1)
             for f in basis_cochains(A, p) for g in basis_cochains(A, q)]
    pairs0 = [(f, g) for p in range(cap + 1) for q in range(cap + 1)
              for f in basis_cochains(A, p) for g in basis_cochains(A, q)]
    d = signed_differential

    s.run("homotopy commutativity identity", pairs,
          lambda fg: _zero_or(fg, gerst.homotopy_commutativity_check(*fg, raise_on_failure=False).check_residual))
    s.run("H is a homotopy from the product to its swap", pairs,
          lambda fg: _zero_or(fg, gerst.commutativity_residual(*fg)))

    def leibniz_signed(fg):
        f, g = fg
        lhs = d(gerst.signed_cup(f, g))
        rhs = gerst.signed_cup(d(f), g) + gerst.signed_cup(f, d(g)).scale(gerst.sgn(f.arity))
        return _zero_or(fg, lhs - rhs)

    def leibniz_plain(fg):
        f, g = fg
        lhs = differential(gerst.cup(f, g))
        rhs = gerst.cup(differential(f), g) + gerst.cup(f, differential(g)).scale(gerst.sgn(f.arity))
        return _zero_or(fg, lhs - rhs)

    s.run("signed cup is a chain map", pairs0, leibniz_signed)
    s.run("plain cup satisfies the Leibniz rule for d", pairs0, leibniz_plain)

    u = Cochain.unit(A)
    s.run("unit for the cup product", [f for f, _ in pairs0[:: max(1, len(pairs0) // 50)]],
          lambda f: None if gerst.cup(u, f) == f == gerst.cup(f, u) else _cochain_witness((f,), gerst.cup(u, f) - f))

    def chain_map(fg):
        f, g = fg
        p = f.arity
        r = (d(gerst.bracket_signed(f, g)) + gerst.bracket_signed(d(f), g)
             + gerst.bracket_signed(f, d(g)).scale(gerst.sgn(p)))
        return _zero_or(fg, r)

    s.run("bracket is a degree +1 chain map", pairs, chain_map)

    def h_sum(fg):
        f, g = fg
        tot = gerst.commutativity_homotopy(f, g) + gerst.commutativity_homotopy_op(f, g)
        return _zero_or(fg, tot - gerst.bracket_signed(f, g))

    s.run("H + H^op = signed bracket", pairs, h_sum)

    def restrictions(fg):
        f, g = fg
        checks = [
            gerst.restrict_23(gerst.square_homotopy_h, f, g) - gerst.commutativity_homotopy(f, g),
            gerst.restrict_23(gerst.square_homotopy_h_op, f, g) - gerst.commutativity_homotopy_op(f, g),
            gerst.restrict_14(gerst.square_homotopy_h, f, g),
            gerst.restrict_14(gerst.square_homotopy_h_op, f, g),
        ]
        for c in checks:
            if not c.is_zero():
                return _cochain_witness(fg, c)
        return None

    s.run("restrictions of h and h_op", pairs, restrictions)
    return s.results


def suite_signs(A: AlgebraSpec, seed: int = 0, samples: int = 240) -> list:
    s = _Suite("signs")
    algebras = [A, sample_library("trunc_poly(2)"), sample_library("triangular(2)")]
    quads = gerst.sample_quadruples(algebras, 2, samples, seed)
    for which, expected in (("h", gerst.H_EXPONENT), ("h_op", gerst.H_OP_EXPONENT)):
        res = gerst.resolve_exponent(which, quads)
        s.fact(f"{which} exponent has a unique reading", res.unique and res.resolved == expected,
               {"failures": res.failures, "passing": res.passing()})
    return s.results


def suite_bar(A: AlgebraSpec, seed: int = 0) -> list:
    s = _Suite("bar")
    rng = random.Random(seed)
    N = 3 if A.dim <= 3 else 2
    B = barmod.build_bar(A, N, check=False)
    s.fact("b' b' = 0", B.check_square_zero())
    hom = B.augmented_homology()
    s.fact("augmented bar complex is exact", all(h == 0 for h in hom), {"homology": hom})
    fs = [Cochain.random(A, n, rng) for n in range(N)]
    s.run("transported differential is d", fs, lambda f: _zero_or((f,), barmod.transported_differential(f) - differential(f)))
    s.run("bimodule extension round-trips", fs,
          lambda f: _zero_or((f,), barmod.cochain_of_bimodule_map(barmod.bimodule_map_of_cochain(f)) - f))
    for n in range(N):
        bad = barmod.diagonal_homotopy_residual(B, n)
        s.fact(f"diagonal homotopy in degree {n}", not bad, {"points": [list(t) for t in bad[:3]]})
        bad = barmod.diagonal_chain_map_defect(B, n, barmod.diagonal_AW)
        s.fact(f"AW diagonal is a chain map in degree {n}", not bad, {"points": [list(t) for t in bad[:3]]})
    cap = _arity_cap(A)
    pairs = [(f, g) for p in range(cap + 1) for q in range(cap + 1 - p)
             for f in basis_cochains(A, p) for g in basis_cochains(A, q)]
    s.run("convolution with the AW diagonal is the signed cup", pairs,
          lambda fg: _zero_or(fg, barmod.convolution(*fg) - gerst.signed_cup(*fg)))
    s.run("convolution with the point diagonal vanishes in positive arity",
          [fg for fg in pairs if fg[0].arity + fg[1].arity > 0],
          lambda fg: _zero_or(fg, barmod.convolution(*fg, diagonal="point")))
    s.run("yoneda product is the signed cup", pairs,
          lambda fg: _zero_or(fg, barmod.yoneda(*fg) - gerst.signed_cup(*fg)))
    gs = [g for q in range(cap + 1) for g in basis_cochains(A, q)]
    s.run("lift is a chain map", gs, lambda g: (
        None if not barmod.lift_chain_defect(g, N) else {"cochain": g.describe()}))
    return s.results


def suite_e2(A: AlgebraSpec, seed: int = 0) -> list:
    s = _Suite("e2")
    window = 2 if A.dim <= 3 else 1
    P = e2.hochschild_presentation(A, window)
    rep = e2.validate_presentation(P, limit=1500, seed=seed)
    for c in rep.checks:
        s.results.append(CheckResult("e2", f"presentation: {c.name}", c.ok, c.count, c.witness))
    B = e2.ExtractedBracket(P)
    pairs = [(f, g) for p in range(window + 1) for q in range(window + 1) if p + q >= 1
             for f in basis_cochains(A, p) for g in basis_cochains(A, q)]

    def agree(fg):
        f, g = fg
        got = e2.as_cochain(A, B(e2.as_element(f), e2.as_element(g)))
        return _zero_or(fg, got - gerst.bracket_signed(f, g))

    s.run("extracted bracket = signed bracket", pairs, agree)
    if A.is_commutative:
        C = e2.commutative_presentation(A)
        s.fact("commutative presentation is valid", e2.validate_presentation(C).ok)
        eh = e2.eckmann_hilton_check(C)
        s.results.append(CheckResult("e2", "Eckmann-Hilton degeneration", eh.ok, eh.count, eh.witness))
    bad = e2.validate_presentation(e2.corrupt(P, "h", (0, -1, -1, 0)), limit=1500, seed=seed)
    s.fact("a corrupted homotopy is detected", not bad.ok)
    return s.results


def suite_dpoly(A: AlgebraSpec = None, seed: int = 0, max_degree: int = 3) -> list:
    s = _Suite("dpoly")
    ops = {"d": dpoly.derivative(), "x": dpoly.multiplication_by(dpoly.monomial([1])),
           "xd": dpoly.euler(), "mu": dpoly.product_op()}
    for a, f in ops.items():
        for b, g in ops.items():
            F, G = dpoly.as_function(f), dpoly.as_function(g)
            for name, sym, pt in (("cup", dpoly.cup_op, dpoly.pointwise_cup),
                                  ("circle", dpoly.circle_op, dpoly.pointwise_circle),
                                  ("bracket", dpoly.bracket_op, dpoly.pointwise_bracket)):
                bad = dpoly.agreement_failures(sym(f, g), pt(F, f.arity, G, g.arity), max_degree)
                s.fact(f"{name}({a}, {b}) symbolic = pointwise", not bad, {"arguments": bad})
    s.fact("[d, x] = id", dpoly.bracket_op(ops["d"], ops["x"]) == dpoly.identity())
    return s.results


SUITES = {
    "exactlin": suite_exactlin,
    "algebra": suite_algebra,
    "cochain": suite_cochain,
    "gerst": suite_gerst,
    "signs": suite_signs,
    "bar": suite_bar,
    "e2": suite_e2,
    "dpoly": suite_dpoly,
}


def run_suites(A: AlgebraSpec, names=None, seed: int = 0) -> VerifyReport:
    names = list(SUITES) if not names or names == ["all"] else names
    out, timing = {}, {}
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
        t = time.perf_counter()
        out[name] = SUITES[name](A, seed=seed)
        timing[name] = time.perf_counter() - t
    return VerifyReport(A.name, out, gerst.sign_conventions(), timing)
