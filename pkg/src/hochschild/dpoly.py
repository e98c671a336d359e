"""
Polydifferential operators on k[x_1..x_m].

An operator of arity n is a finite sum of terms

    c(x) * d^{a_1}(p_1) * ... * d^{a_n}(p_n)

stored as ``terms[(a_1, ..., a_n)] = c`` with each a_j an exponent tuple of
length m and c a polynomial.  Polynomials are dicts from exponent tuples to
Fractions.  Every operator is kept in this normal form (coefficients left of
all derivatives), so equal operators have equal term dicts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Callable, Optional, Sequence

from .exactlin import fmt, scalar

TERM_BUDGET = 10_000


class TermBudgetError(RuntimeError):
    pass


class OperatorSyntaxError(ValueError):
    pass


def sgn(e: int) -> int:
    return -1 if e % 2 else 1


# -- polynomials -------------------------------------------------------------------

def padd(p: dict, q: dict, c=1) -> dict:
    out = dict(p)
    for e, v in q.items():
        w = out.get(e, 0) + c * v
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e, a in p.items():
        for f, b in q.items():
            k = tuple(x + y for x, y in zip(e, f))
            w = out.get(k, 0) + a * b
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def pderiv(p: dict, alpha: tuple) -> dict:
    """d^alpha p."""
    out: dict = {}
    for e, a in p.items():
        if any(x < y for x, y in zip(e, alpha)):
            continue
        c = Fraction(a)
        for x, y in zip(e, alpha):
            c *= factorial(x) // factorial(x - y)
        k = tuple(x - y for x, y in zip(e, alpha))
        out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


def monomial(exps: Sequence[int], c=1) -> dict:
    return {tuple(exps): Fraction(c)}


def one(m: int) -> dict:
    return {(0,) * m: Fraction(1)}


def poly_degree(p: dict) -> int:
    return max((sum(e) for e in p), default=-1)


def format_poly(p: dict, m: int) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = p[e]
        mono = _format_mono(e, m)
        if mono == "1":
            parts.append(fmt(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{fmt(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def _var(i: int, m: int, letter: str) -> str:
    return letter if m == 1 else f"{letter}{i + 1}"


def _format_mono(e: tuple, m: int, letter: str = "x") -> str:
    fs = []
    for i, k in enumerate(e):
        if k == 1:
            fs.append(_var(i, m, letter))
        elif k > 1:
            fs.append(f"{_var(i, m, letter)}^{k}")
    return "*".join(fs) if fs else "1"


# -- operators ----------------------------------------------------------------------

@dataclass(frozen=True)
class PolyDiffOp:
    num_vars: int
    arity: int
    terms: tuple  # sorted ((multi-indices), poly-items) pairs

    @classmethod
    def make(cls, m: int, n: int, terms: dict) -> "PolyDiffOp":
        clean = []
        for key, coef in terms.items():
            if len(key) != n or any(len(a) != m for a in key):
                raise ValueError("multi-index shape does not match the operator")
            c = {e: Fraction(v) for e, v in coef.items() if v}
            if c:
                clean.append((tuple(key), tuple(sorted(c.items()))))
        if len(clean) > TERM_BUDGET:
            raise TermBudgetError(f"{len(clean)} terms exceed the budget of {TERM_BUDGET}")
        return cls(m, n, tuple(sorted(clean)))

    @property
    def term_dict(self) -> dict:
        return {k: dict(v) for k, v in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PolyDiffOp") -> "PolyDiffOp":
        _match(self, other)
        t = self.term_dict
        for k, c in other.term_dict.items():
            t[k] = padd(t.get(k, {}), c)
        return PolyDiffOp.make(self.num_vars, self.arity, t)

    def scale(self, c) -> "PolyDiffOp":
        return PolyDiffOp.make(self.num_vars, self.arity,
                               {k: {e: c * v for e, v in p.items()} for k, p in self.term_dict.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __str__(self):
        return format_op(self)

    def order(self) -> int:
        return max((sum(sum(a) for a in k) for k, _ in self.terms), default=0)


def _match(f: PolyDiffOp, g: PolyDiffOp):
    if f.num_vars != g.num_vars:
        raise ValueError("operators on different numbers of variables")
    if f.arity != g.arity:
        raise ValueError(f"arity mismatch: {f.arity} vs {g.arity}")


def apply(op: PolyDiffOp, args: Sequence[dict]) -> dict:
    if len(args) != op.arity:
        raise ValueError(f"operator has arity {op.arity}, got {len(args)} arguments")
    out: dict = {}
    for key, coef in op.terms:
        val = dict(coef)
        for a, p in zip(key, args):
            val = pmul(val, pderiv(p, a))
            if not val:
                break
        out = padd(out, val)
    return out


def cup_op(f: PolyDiffOp, g: PolyDiffOp) -> PolyDiffOp:
    if f.num_vars != g.num_vars:
        raise ValueError("operators on different numbers of variables")
    t: dict = {}
    for ka, ca in f.terms:
        for kb, cb in g.terms:
            k = ka + kb
            t[k] = padd(t.get(k, {}), pmul(dict(ca), dict(cb)))
    return PolyDiffOp.make(f.num_vars, f.arity + g.arity, t)


def _splits(alpha: tuple, parts: int):
    """Ways to write alpha = g_0 + ... + g_{parts-1}, with multinomial weights."""
    per_var = []
    for a in alpha:
        opts = []
        for comp in _compositions(a, parts):
            w = factorial(a)
            for x in comp:
                w //= factorial(x)
            opts.append((comp, w))
        per_var.append(opts)
    for choice in product(*per_var):
        w = 1
        for _, x in choice:
            w *= x
        yield tuple(tuple(comp[j] for comp, _ in choice) for j in range(parts)), w


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _insert(alpha: tuple, g: PolyDiffOp) -> dict:
    """
    d^alpha applied to g's output, as terms over g's slots plus a leftover
    coefficient: d^alpha(c * prod d^b p) = sum multinom * d^{g0} c * prod d^{b+g} p.
    Returns {slot-multi-indices: coefficient}.
    """
    q = g.arity
    out: dict = {}
    for key, coef in g.terms:
        coef = dict(coef)
        for split, w in _splits(alpha, q + 1):
            dc = pderiv(coef, split[0])
            if not dc:
                continue
            k = tuple(tuple(x + y for x, y in zip(b, s)) for b, s in zip(key, split[1:]))
            out[k] = padd(out.get(k, {}), dc, w)
    return out


def circle_op(f: PolyDiffOp, g: PolyDiffOp) -> PolyDiffOp:
    """f{g}: insert g into each slot of f with sign (-1)^{(q-1)(i-1)}."""
    if f.num_vars != g.num_vars:
        raise ValueError("operators on different numbers of variables")
    p, q = f.arity, g.arity
    if p == 0:
        # no slot to insert into
        return PolyDiffOp.make(f.num_vars, max(q - 1, 0), {})
    t: dict = {}
    for i in range(p):
        s = sgn((q - 1) * i)
        for key, coef in f.terms:
            coef = dict(coef)
            for inner, c in _insert(key[i], g).items():
                k = key[:i] + inner + key[i + 1:]
                t[k] = padd(t.get(k, {}), pmul(coef, c), s)
    return PolyDiffOp.make(f.num_vars, p + q - 1, t)


def bracket_G_op(f: PolyDiffOp, g: PolyDiffOp) -> PolyDiffOp:
    """f{g} - (-1)^{(p-1)(q-1)} g{f}."""
    fg = circle_op(f, g)
    gf = circle_op(g, f)
    return fg - gf.scale(sgn((f.arity - 1) * (g.arity - 1)))


def bracket_op(f: PolyDiffOp, g: PolyDiffOp) -> PolyDiffOp:
    """The signed bracket (-1)^{p+1} (f{g} - (-1)^{(p-1)(q-1)} g{f})."""
    return bracket_G_op(f, g).scale(sgn(f.arity + 1))


def compose(f: PolyDiffOp, g: PolyDiffOp) -> PolyDiffOp:
    """Composition of arity-1 operators."""
    if f.arity != 1 or g.arity != 1:
        raise ValueError("composition is for arity-1 operators")
    return circle_op(f, g)


# -- standard operators -------------------------------------------------------------

def zero_index(m: int) -> tuple:
    return (0,) * m


def unit_index(m: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(m))


def derivative(m: int = 1, i: int = 0) -> PolyDiffOp:
    return PolyDiffOp.make(m, 1, {(unit_index(m, i),): one(m)})


def multiplication_by(p: dict, m: int = 1) -> PolyDiffOp:
    return PolyDiffOp.make(m, 1, {(zero_index(m),): p})


def identity(m: int = 1) -> PolyDiffOp:
    return multiplication_by(one(m), m)


def product_op(m: int = 1) -> PolyDiffOp:
    return PolyDiffOp.make(m, 2, {(zero_index(m), zero_index(m)): one(m)})


def euler(m: int = 1, i: int = 0) -> PolyDiffOp:
    """x_i d_i."""
    return PolyDiffOp.make(m, 1, {(unit_index(m, i),): monomial(unit_index(m, i))})


def element(p: dict, m: int = 1) -> PolyDiffOp:
    return PolyDiffOp.make(m, 0, {(): p})


# -- text form ------------------------------------------------------------------------

_FACTOR = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<sym>[xd])(?P<idx>\d*)(?:\^(?P<pow>\d+))?)\s*$")


def parse(text: str, num_vars: Optional[int] = None, arity: Optional[int] = None) -> PolyDiffOp:
    """
    Parse operators such as ``x1^2*d1 + d1.d2`` or ``x*d - 1/2``.
    ``di`` is d/dx_i, ``.`` separates argument slots and ``1`` is an
    identity slot; ``x``, ``d`` mean x1, d1.  Pass ``arity=0`` to read a
    polynomial as a 0-ary operator.
    """
    src = text.strip()
    if not src:
        raise OperatorSyntaxError("empty operator")
    raw_terms = _split_terms(src)
    parsed = []
    max_var = 0
    for sign, body in raw_terms:
        slots = body.split(".")
        term_slots = []
        coef_exp: dict = {}
        c = Fraction(sign)
        for slot in slots:
            dexp: dict = {}
            if not slot.strip():
                raise OperatorSyntaxError(f"empty slot in {body!r}")
            for fac in slot.split("*"):
                mt = _FACTOR.match(fac)
                if not mt:
                    raise OperatorSyntaxError(f"cannot read factor {fac.strip()!r}")
                if mt.group("num"):
                    c *= Fraction(mt.group("num"))
                    continue
                idx = int(mt.group("idx") or 1)
                if idx < 1:
                    raise OperatorSyntaxError(f"variable index must be >= 1 in {fac.strip()!r}")
                max_var = max(max_var, idx)
                pw = int(mt.group("pow") or 1)
                target = coef_exp if mt.group("sym") == "x" else dexp
                target[idx - 1] = target.get(idx - 1, 0) + pw
            term_slots.append(dexp)
        parsed.append((c, coef_exp, term_slots))
    m = num_vars if num_vars is not None else max(max_var, 1)
    if max_var > m:
        raise OperatorSyntaxError(f"variable index {max_var} exceeds num_vars = {m}")
    slot_counts = {len(s) for _, _, s in parsed}
    if arity == 0:
        if any(d for _, _, s in parsed for d in s) or slot_counts != {1}:
            raise OperatorSyntaxError("a 0-ary operator is a polynomial: no derivatives or slots")
        n = 0
    else:
        if len(slot_counts) != 1:
            raise OperatorSyntaxError("terms have different numbers of slots")
        n = slot_counts.pop()
        if arity is not None and arity != n:
            raise OperatorSyntaxError(f"expected arity {arity}, found {n}")
    t: dict = {}
    for c, cexp, slots in parsed:
        e = tuple(cexp.get(i, 0) for i in range(m))
        key = () if n == 0 else tuple(tuple(s.get(i, 0) for i in range(m)) for s in slots)
        t[key] = padd(t.get(key, {}), {e: c})
    return PolyDiffOp.make(m, n, t)


def _split_terms(src: str):
    """[(sign, body)] for a sum of terms."""
    out = []
    sign, pending = 1, False
    for tok in re.split(r"([+-])", src):
        t = tok.strip()
        if t in ("+", "-"):
            if pending:
                raise OperatorSyntaxError("two signs in a row")
            sign, pending = (1 if t == "+" else -1), True
        elif t:
            out.append((sign, t))
            sign, pending = 1, False
    if pending:
        raise OperatorSyntaxError("operator ends with a sign")
    return out


def parse_poly(text: str, num_vars: Optional[int] = None) -> dict:
    op = parse(text, num_vars, arity=0)
    return dict(op.terms[0][1]) if op.terms else {}


def format_op(op: PolyDiffOp) -> str:
    m = op.num_vars
    if op.is_zero():
        return "0"
    parts = []
    for key, coef in op.terms:
        slots = ".".join(_format_mono(a, m, "d") for a in key)
        for e, c in coef:
            mono = _format_mono(e, m)
            if op.arity == 0:
                body = mono
            elif mono == "1":
                body = slots
            else:
                head, _, tail = slots.partition(".")
                first = mono if head == "1" else f"{mono}*{head}"
                body = first + ("." + tail if tail else "")
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            elif body == "1":
                parts.append(fmt(c))
            else:
                parts.append(f"{fmt(c)}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


# -- pointwise oracles -------------------------------------------------------------------

def as_function(op: PolyDiffOp) -> Callable:
    """The multilinear map on polynomials that op defines, as a black box."""
    return lambda *args: apply(op, list(args))


def pointwise_cup(F: Callable, p: int, G: Callable, q: int) -> Callable:
    return lambda *a: pmul(F(*a[:p]), G(*a[p:]))


def pointwise_circle(F: Callable, p: int, G: Callable, q: int) -> Callable:
    """Cochain formula for f{g}, evaluated by composing functions."""
    def run(*a):
        out: dict = {}
        for i in range(p):
            inner = G(*a[i:i + q])
            out = padd(out, F(*a[:i], inner, *a[i + q:]), sgn((q - 1) * i))
        return out
    return run


def pointwise_bracket(F: Callable, p: int, G: Callable, q: int) -> Callable:
    fg = pointwise_circle(F, p, G, q)
    gf = pointwise_circle(G, q, F, p)
    s = sgn((p - 1) * (q - 1))
    outer = sgn(p + 1)
    return lambda *a: {k: outer * v for k, v in padd(fg(*a), gf(*a), -s).items()}


def monomials(m: int, max_degree: int):
    for e in product(range(max_degree + 1), repeat=m):
        if sum(e) <= max_degree:
            yield monomial(e)


def agreement_failures(op: PolyDiffOp, fn: Callable, max_degree: int, limit: int = 5) -> list:
    """Monomial argument tuples (degree <= max_degree) where op and fn differ."""
    bad = []
    monos = list(monomials(op.num_vars, max_degree))
    for args in product(monos, repeat=op.arity):
        if apply(op, list(args)) != fn(*args):
            bad.append([next(iter(a)) for a in args])
            if len(bad) >= limit:
                break
    return bad


@dataclass
class TruncatedPolyContext:
    num_vars: int
    max_poly_degree: int

    def __post_init__(self):
        if self.max_poly_degree < 1:
            raise ValueError("max_poly_degree must be >= 1")

    def arguments(self, arity: int):
        monos = list(monomials(self.num_vars, self.max_poly_degree))
        return product(monos, repeat=arity)
