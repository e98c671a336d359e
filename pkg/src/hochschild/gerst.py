"""
Chain-level Gerstenhaber structure on Hochschild cochains.

Degrees: an arity-p cochain sits in chain degree -p, so only the parity of
the arity matters for signs.  ``cup`` is the plain product
f(a_1..a_p) g(a_{p+1}..a_{p+q}); ``signed_cup`` multiplies it by (-1)^{pq}
and is the product that the interchange homotopies below fill.

Chain homotopies follow the convention  d h + h d = source - target,  where
on a tensor product the differential is Koszul signed:
d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

from .algebra import AlgebraError, AlgebraSpec, same_algebra
from .cochain import Cochain, basis_cochains, signed_differential
from .exactlin import axpy


class ConventionMismatchError(AssertionError):
    """A sign convention failed an identity that must hold exactly."""

    def __init__(self, what: str, degrees: tuple, point=None):
        msg = f"{what} fails at degrees {degrees}"
        if point is not None:
            msg += f", basis point {point}"
        super().__init__(msg)
        self.degrees = degrees
        self.point = point


def _same(f: Cochain, g: Cochain):
    if not same_algebra(f.algebra, g.algebra):
        raise AlgebraError("cochains over different algebras")


def sgn(e: int) -> int:
    return -1 if e % 2 else 1


# -- products -------------------------------------------------------------------

def cup(f: Cochain, g: Cochain) -> Cochain:
    """(f cup g)(a_1..a_{p+q}) = f(a_1..a_p) g(a_{p+1}..a_{p+q})."""
    _same(f, g)
    A = f.algebra
    rows: dict = {}
    for R, u in f.rows.items():
        for S, v in g.rows.items():
            w = A.mul(u, v)
            if w:
                rows[R + S] = w
    return Cochain(A, f.arity + g.arity, rows)


def signed_cup(f: Cochain, g: Cochain) -> Cochain:
    """(-1)^{pq} f cup g: associative, unital, and a chain map for the signed differential."""
    c = cup(f, g)
    return c if (f.arity * g.arity) % 2 == 0 else -c


def circle(f: Cochain, g: Cochain) -> Cochain:
    """
    f{g} = sum_{i=1}^{p} (-1)^{(q-1)(i-1)} f(a_1.., g(a_i..a_{i+q-1}), ..).
    Zero when f has arity 0.
    """
    _same(f, g)
    A = f.algebra
    p, q = f.arity, g.arity
    if p == 0:
        return Cochain.zero(A, max(q - 1, 0))
    by_out: dict = {}
    for S, v in g.rows.items():
        for k, c in v.items():
            by_out.setdefault(k, []).append((S, c))
    rows: dict = {}
    for R, val in f.rows.items():
        for i in range(p):
            hits = by_out.get(R[i])
            if not hits:
                continue
            sign = sgn((q - 1) * i)
            pre, post = R[:i], R[i + 1:]
            for S, c in hits:
                axpy(rows.setdefault(pre + S + post, {}), sign * c, val)
    return Cochain(A, p + q - 1, rows)


def bracket_G(f: Cochain, g: Cochain) -> Cochain:
    """Classical bracket f{g} - (-1)^{(p-1)(q-1)} g{f}."""
    fg = circle(f, g)
    gf = circle(g, f)
    if fg.arity != gf.arity:
        # an arity-0 argument: one side is the zero cochain of the wrong arity
        n = f.arity + g.arity - 1
        fg = fg if fg.arity == n else Cochain.zero(f.algebra, max(n, 0))
        gf = gf if gf.arity == n else Cochain.zero(f.algebra, max(n, 0))
    e = (f.arity - 1) * (g.arity - 1)
    return fg - gf if e % 2 == 0 else fg + gf


def bracket_signed(f: Cochain, g: Cochain) -> Cochain:
    """(-1)^{p+1} (f{g} - (-1)^{(p-1)(q-1)} g{f})."""
    b = bracket_G(f, g)
    return b if (f.arity + 1) % 2 == 0 else -b


# -- homotopy commutativity ----------------------------------------------------------

@dataclass
class HomotopyWitness:
    source_op: str
    target_op: str
    witness: Callable
    inputs: tuple
    check_residual: Cochain

    @property
    def ok(self) -> bool:
        return self.check_residual.is_zero()


def commutativity_homotopy(f: Cochain, g: Cochain) -> Cochain:
    """H(f (x) g) = (-1)^{pq+q-1} g{f}, from signed_cup to signed_cup after the swap."""
    c = circle(g, f)
    p, q = f.arity, g.arity
    return c.scale(sgn(p * q + q - 1))


def commutativity_homotopy_op(f: Cochain, g: Cochain) -> Cochain:
    """H^op(f (x) g) = (-1)^{p+1} f{g}."""
    return circle(f, g).scale(sgn(f.arity + 1))


def homotopy_commutativity_check(f: Cochain, g: Cochain, raise_on_failure: bool = True) -> HomotopyWitness:
    """
    Check, exactly,
      f*g - (-1)^{pq} g*f = (-1)^{(p+1)q} (dg){f} + (-1)^{(p+1)q-1} d(g{f}) + (-1)^{pq+1} g{df}
    with * the signed cup and d the signed differential.
    """
    _same(f, g)
    p, q = f.arity, g.arity
    if p < 1 or q < 1:
        raise ValueError("both arities must be >= 1")
    lhs = signed_cup(f, g) - signed_cup(g, f).scale(sgn(p * q))
    gf = circle(g, f)
    rhs = (
        circle(signed_differential(g), f).scale(sgn((p + 1) * q))
        + signed_differential(gf).scale(sgn((p + 1) * q - 1))
        + circle(g, signed_differential(f)).scale(sgn(p * q + 1))
    )
    res = lhs - rhs
    w = HomotopyWitness("f*g", "(-1)^{pq} g*f", commutativity_homotopy, (f, g), res)
    if raise_on_failure and not w.ok:
        raise ConventionMismatchError("homotopy commutativity", (p, q), res.first_nonzero())
    return w


def commutativity_residual(f: Cochain, g: Cochain) -> Cochain:
    """d H + H d - (f*g - (-1)^{pq} g*f) for the homotopy H."""
    p = f.arity
    H = commutativity_homotopy
    lhs = signed_differential(H(f, g)) + H(signed_differential(f), g) + H(f, signed_differential(g)).scale(sgn(p))
    target = signed_cup(f, g) - signed_cup(g, f).scale(sgn(p * g.arity))
    return lhs - target


# -- the interchange square ----------------------------------------------------------

def interchange_top(f1, g1, f2, g2) -> Cochain:
    """m1 o (m2 (x) m2): (f1*g1)*(f2*g2)."""
    return signed_cup(signed_cup(f1, g1), signed_cup(f2, g2))


def interchange_bottom(f1, g1, f2, g2) -> Cochain:
    """m2 o (m1 (x) m1) o tau_23: (-1)^{|g1||f2|} (f1*f2)*(g1*g2)."""
    c = signed_cup(signed_cup(f1, f2), signed_cup(g1, g2))
    return c.scale(sgn(g1.arity * f2.arity))


def _op(x, y):
    """Opposite product m^op(x, y) = (-1)^{|x||y|} y*x."""
    return signed_cup(y, x).scale(sgn(x.arity * y.arity))


def interchange_top_op(f1, g1, f2, g2) -> Cochain:
    return _op(_op(f1, g1), _op(f2, g2))


def interchange_bottom_op(f1, g1, f2, g2) -> Cochain:
    return _op(_op(f1, f2), _op(g1, g2)).scale(sgn(g1.arity * f2.arity))


def _alpha(f1, g1, f2, g2) -> int:
    a = [x.arity for x in (f1, g1, f2, g2)]
    return sum(a[i] * a[j] for i in range(4) for j in range(i + 1, 4))


# Candidate readings for the linear part of the exponents.  Each reading names
# the arities summed, together with |f2||g1| - 1 (and alpha for h_op).
H_READINGS = {
    "f1+f1": ("f1", "f1"),
    "f1+g1": ("f1", "g1"),
    "f1+f2": ("f1", "f2"),
    "f1+g2": ("f1", "g2"),
}
H_OP_READINGS = {
    "f2": ("f2",),
    "g1": ("g1",),
    "f1": ("f1",),
    "g2": ("g2",),
    "g1+g2": ("g1", "g2"),
    "f1+g2": ("f1", "g2"),
}
H_EXPONENT = "f1+f2"
H_OP_EXPONENT = "g1+g2"


def _linear(reading, args) -> int:
    ar = dict(zip(("f1", "g1", "f2", "g2"), (x.arity for x in args)))
    return sum(ar[n] for n in reading)


def square_homotopy_h(f1, g1, f2, g2, reading: str = H_EXPONENT) -> Cochain:
    """(-1)^{|f1|+|f2|+|f2||g1|-1} f1 * f2{g1} * g2 (signed cups)."""
    args = (f1, g1, f2, g2)
    e = _linear(H_READINGS[reading], args) + f2.arity * g1.arity - 1
    body = signed_cup(signed_cup(f1, circle(f2, g1)), g2) if f2.arity else _zero_for(args)
    return body.scale(sgn(e))


def square_homotopy_h_op(f1, g1, f2, g2, reading: str = H_OP_EXPONENT) -> Cochain:
    """(-1)^{alpha+|f2||g1|+|g1|+|g2|-1} g2 * g1{f2} * f1 (signed cups)."""
    args = (f1, g1, f2, g2)
    e = _alpha(*args) + f2.arity * g1.arity + _linear(H_OP_READINGS[reading], args) - 1
    body = signed_cup(signed_cup(g2, circle(g1, f2)), f1) if g1.arity else _zero_for(args)
    return body.scale(sgn(e))


def _zero_for(args) -> Cochain:
    n = sum(x.arity for x in args) - 1
    return Cochain.zero(args[0].algebra, max(n, 0))


def square_residual(h: Callable, top: Callable, bottom: Callable, args: Sequence[Cochain]) -> Cochain:
    """d h(x) + h(d x) - (top(x) - bottom(x)) with Koszul signs on the tensor."""
    out = bottom(*args) - top(*args)
    if sum(x.arity for x in args) > 0:
        # in total degree 0 the homotopy has nowhere to land
        out = out + signed_differential(h(*args))
    parity = 0
    for i, x in enumerate(args):
        dx = signed_differential(x)
        if not dx.is_zero():
            term = h(*args[:i], dx, *args[i + 1:])
            out = out + term.scale(sgn(parity))
        parity += x.arity
    return out


def h_residual(f1, g1, f2, g2, reading: str = H_EXPONENT) -> Cochain:
    return square_residual(
        lambda *a: square_homotopy_h(*a, reading=reading),
        interchange_top, interchange_bottom, (f1, g1, f2, g2))


def h_op_residual(f1, g1, f2, g2, reading: str = H_OP_EXPONENT) -> Cochain:
    return square_residual(
        lambda *a: square_homotopy_h_op(*a, reading=reading),
        interchange_top_op, interchange_bottom_op, (f1, g1, f2, g2))


def restrict_23(h: Callable, f: Cochain, g: Cochain) -> Cochain:
    """Restriction along iota_23: (1, f, g, 1)."""
    u = Cochain.unit(f.algebra)
    return h(u, f, g, u)


def restrict_14(h: Callable, f: Cochain, g: Cochain) -> Cochain:
    """Restriction along iota_14: (f, 1, 1, g)."""
    u = Cochain.unit(f.algebra)
    return h(f, u, u, g)


# -- exponent resolution -------------------------------------------------------------

@dataclass
class ExponentResolution:
    which: str
    failures: dict
    samples: int
    resolved: Optional[str]
    witnesses: dict = field(default_factory=dict)

    @property
    def unique(self) -> bool:
        return self.resolved is not None

    def passing(self) -> list:
        return [k for k, v in self.failures.items() if v == 0]

    def to_json(self) -> dict:
        return {
            "homotopy": self.which,
            "samples": self.samples,
            "failures": dict(sorted(self.failures.items())),
            "resolved": self.resolved,
        }


def sample_quadruples(algebras: Sequence[AlgebraSpec], max_arity: int, samples: int, seed: int = 0):
    """Seeded random basis-cochain quadruples with arities 0..max_arity."""
    rng = random.Random(seed)
    out = []
    for k in range(samples):
        A = algebras[k % len(algebras)]
        quad = []
        for _ in range(4):
            n = rng.randint(0, max_arity)
            args = tuple(rng.randrange(A.dim) for _ in range(n))
            quad.append(Cochain.basis(A, args, rng.randrange(A.dim)))
        out.append(tuple(quad))
    return out


def resolve_exponent(which: str, quadruples) -> ExponentResolution:
    """
    Try every candidate reading of the exponent for ``which`` ("h" or "h_op")
    and count the quadruples on which the square residual is nonzero.  The
    resolution is the single reading with no failures, or None.
    """
    if which == "h":
        readings, resid = H_READINGS, h_residual
    elif which == "h_op":
        readings, resid = H_OP_READINGS, h_op_residual
    else:
        raise ValueError(f"unknown homotopy {which!r}")
    failures = {}
    witnesses = {}
    for name in readings:
        bad = 0
        for quad in quadruples:
            r = resid(*quad, reading=name)
            if not r.is_zero():
                if bad == 0:
                    witnesses[name] = {
                        "arities": [x.arity for x in quad],
                        "point": r.first_nonzero(),
                    }
                bad += 1
        failures[name] = bad
    passing = [k for k, v in failures.items() if v == 0]
    resolved = passing[0] if len(passing) == 1 else None
    return ExponentResolution(which, failures, len(quadruples), resolved, witnesses)


def sign_conventions() -> dict:
    """The sign conventions this package uses, for embedding in reports."""
    return {
        "differential": "d f = (-1)^n (a1 f(..) + sum (-1)^i f(.. a_i a_{i+1} ..) + (-1)^{n+1} f(..) a_{n+1})",
        "cup": "plain f(a_1..a_p) g(a_{p+1}..); signed product is (-1)^{pq} f cup g",
        "homotopy_direction": "d h + h d = source - target, Koszul signs on tensors",
        "h_exponent": "|f1| + |f2| + |f2||g1| - 1",
        "h_op_exponent": "alpha + |f2||g1| + |g1| + |g2| - 1",
        "bracket_chain_map": "d[f,g] = -[df,g] - (-1)^p [f,dg]",
        "bar_tensor_differential": "b' (x) 1 + (-1)^p 1 (x) b' on the (p,q) summand",
        "yoneda_lift": "(-1)^{q(n+1)} a0 (x) .. (x) g(..) a_{n+1}",
    }
