"""
Brackets of 2-algebras from their interchange homotopies.

A presentation is a finite window of a chain complex (dimension per chain
degree, differential of degree -1) with two products, their units, and two
homotopies of degree +1:

    d h + h d = m1 o (m2 (x) m2) - m2 o (m1 (x) m1) o tau_23
    d h_op + h_op d = the same square for the opposite products

with Koszul signs on tensor products and m^op(x, y) = (-1)^{|x||y|} m(y, x).
All structure maps are given on basis elements; an element is a pair
``(degree, sparse_vector)``.

Degrees above the window are zero.  Degrees below it are truncated, and
any identity that would reach them is skipped, unless the presentation is
marked ``bounded_below``.

The bracket is the sum of the homotopies restricted along the two unit
insertions (1, x, y, 1) and (x, 1, 1, y).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Optional

from .algebra import AlgebraSpec
from .cochain import DEFAULT_BUDGET, BudgetError, Cochain, signed_differential
from .exactlin import Echelon, Matrix, axpy, fmt, kernel, scalar, vadd
from . import gerst


def sgn(e: int) -> int:
    return -1 if e % 2 else 1


class PresentationError(ValueError):
    pass


@dataclass
class TwoAlgebraPresentation:
    """
    Structure maps take basis data and return sparse vectors:
    ``d(deg, i)``, ``m1(da, i, db, j)``, ``h(degs, idx)`` for 4-tuples.
    """

    name: str
    dims: dict
    d: Callable
    m1: Callable
    m2: Callable
    unit1: dict
    unit2: dict
    h: Callable
    h_op: Callable
    meta: dict = field(default_factory=dict)
    bounded_below: bool = False

    def degrees(self) -> list:
        return sorted(self.dims)

    def has(self, deg: int) -> bool:
        """Whether degree ``deg`` is known: inside the window, or above it (and so zero)."""
        if deg in self.dims or deg > max(self.dims):
            return True
        return self.bounded_below and deg < min(self.dims)

    def basis(self, deg: int):
        return [(deg, {i: Fraction(1)}) for i in range(self.dims.get(deg, 0))]

    # -- multilinear extension ------------------------------------------------------

    def diff(self, x) -> tuple:
        deg, v = x
        out: dict = {}
        for i, c in v.items():
            axpy(out, c, self.d(deg, i))
        return deg - 1, _clean(out)

    def mul(self, which: str, x, y) -> tuple:
        fn = self.m1 if which == "m1" else self.m2
        (da, va), (db, vb) = x, y
        out: dict = {}
        for i, c in va.items():
            for j, e in vb.items():
                axpy(out, c * e, fn(da, i, db, j))
        return da + db, _clean(out)

    def mul_op(self, which: str, x, y) -> tuple:
        deg, v = self.mul(which, y, x)
        s = sgn(x[0] * y[0])
        return deg, {k: s * c for k, c in v.items()}

    def homotopy(self, which: str, xs) -> tuple:
        fn = self.h if which == "h" else self.h_op
        degs = tuple(x[0] for x in xs)
        out: dict = {}
        for combo in product(*(sorted(x[1].items()) for x in xs)):
            c = Fraction(1)
            for _, a in combo:
                c *= a
            axpy(out, c, fn(degs, tuple(i for i, _ in combo)))
        return sum(degs) + 1, _clean(out)


def _clean(v: dict) -> dict:
    return {k: c for k, c in v.items() if c}


def _add(*terms) -> dict:
    out: dict = {}
    for c, (_, v) in terms:
        axpy(out, c, v)
    return _clean(out)


# -- validation ----------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    count: int
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"name": self.name, "ok": self.ok, "count": self.count}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ValidationReport:
    presentation: str
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def first_failure(self) -> Optional[Check]:
        for c in self.checks:
            if not c.ok:
                return c
        return None

    def to_json(self) -> dict:
        return {"presentation": self.presentation, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _witness(inputs, value) -> dict:
    return {
        "inputs": [[deg, sorted(v)] for deg, v in inputs],
        "residual": {str(k): fmt(c) for k, c in sorted(value.items())},
    }


def _run(name: str, cases, residual) -> Check:
    n = 0
    for inputs in cases:
        n += 1
        r = residual(inputs)
        if r:
            return Check(name, False, n, _witness(inputs, r))
    return Check(name, True, n)


def _tuples(P: TwoAlgebraPresentation, k: int, ok: Callable, limit: Optional[int], rng):
    """Basis k-tuples whose degrees pass ``ok``, optionally subsampled."""
    degs = [dg for dg in P.degrees() if P.dims[dg]]
    out = []
    for ds in product(degs, repeat=k):
        if not ok(ds):
            continue
        for idx in product(*(range(P.dims[dg]) for dg in ds)):
            out.append(tuple((dg, {i: Fraction(1)}) for dg, i in zip(ds, idx)))
    if limit is not None and len(out) > limit:
        out = rng.sample(out, limit)
    return out


def validate_presentation(P: TwoAlgebraPresentation, limit: Optional[int] = None, seed: int = 0) -> ValidationReport:
    """
    Check every structural identity on basis inputs inside the window.
    ``limit`` subsamples each family of inputs (seeded) for large windows.
    """
    rng = random.Random(seed)
    has = P.has
    checks = []

    checks.append(_run(
        "d^2 = 0",
        _tuples(P, 1, lambda ds: has(ds[0] - 2), limit, rng),
        lambda xs: P.diff(P.diff(xs[0]))[1]))

    def chain_ok(ds):
        return has(sum(ds)) and has(sum(ds) - 1) and all(has(x - 1) for x in ds)

    for which in ("m1", "m2"):
        def resid(xs, which=which):
            x, y = xs
            return _add(
                (1, P.diff(P.mul(which, x, y))),
                (-1, P.mul(which, P.diff(x), y)),
                (-sgn(x[0]), P.mul(which, x, P.diff(y))))
        checks.append(_run(f"{which} is a chain map", _tuples(P, 2, chain_ok, limit, rng), resid))

    if P.unit1 != P.unit2:
        checks.append(Check("units agree", False, 1, {"unit1": _strv(P.unit1), "unit2": _strv(P.unit2)}))
    else:
        checks.append(Check("units agree", True, 1))
    for which, u in (("m1", P.unit1), ("m2", P.unit2)):
        one = (0, u)

        def resid(xs, which=which, one=one):
            x = xs[0]
            left = _add((1, P.mul(which, one, x)), (-1, x))
            return left or _add((1, P.mul(which, x, one)), (-1, x))
        checks.append(_run(f"{which} unit", _tuples(P, 1, lambda ds: True, limit, rng), resid))

    def square_ok(ds):
        t = sum(ds)
        return has(t) and has(t + 1) and all(has(x - 1) for x in ds)

    quads = _tuples(P, 4, square_ok, limit, rng)
    checks.append(_run("h fills the interchange square", quads, lambda xs: square_residual(P, "h", xs)))
    checks.append(_run("h_op fills the opposite square", quads, lambda xs: square_residual(P, "h_op", xs)))
    return ValidationReport(P.name, checks)


def _strv(v: dict) -> dict:
    return {str(k): fmt(c) for k, c in sorted(v.items())}


def square_residual(P: TwoAlgebraPresentation, which: str, xs) -> dict:
    """d h(x) + h(d x) - (top(x) - bottom(x)) for x = (f1, g1, f2, g2)."""
    f1, g1, f2, g2 = xs
    if which == "h":
        m = P.mul
    else:
        m = P.mul_op
    top = m("m1", m("m2", f1, g1), m("m2", f2, g2))
    bottom = m("m2", m("m1", f1, f2), m("m1", g1, g2))
    terms = [(1, P.diff(P.homotopy(which, xs))), (-1, top), (sgn(g1[0] * f2[0]), bottom)]
    parity = 0
    for i, x in enumerate(xs):
        dx = P.diff(x)
        if dx[1]:
            ys = xs[:i] + (dx,) + xs[i + 1:]
            terms.append((sgn(parity), P.homotopy(which, ys)))
        parity += x[0]
    return _add(*terms)


# -- bracket extraction -----------------------------------------------------------------

@dataclass
class ExtractedBracket:
    presentation: TwoAlgebraPresentation

    def __call__(self, x, y) -> tuple:
        P = self.presentation
        u = (0, P.unit1)
        terms = [
            P.homotopy("h", (u, x, y, u)),
            P.homotopy("h_op", (x, u, u, y)),
            P.homotopy("h_op", (u, x, y, u)),
            P.homotopy("h", (x, u, u, y)),
        ]
        return x[0] + y[0] + 1, _add(*((1, t) for t in terms))

    def parts(self, x, y) -> dict:
        """The four restricted homotopies, separately."""
        P = self.presentation
        u = (0, P.unit1)
        return {
            "h iota23": P.homotopy("h", (u, x, y, u))[1],
            "h_op iota14": P.homotopy("h_op", (x, u, u, y))[1],
            "h_op iota23": P.homotopy("h_op", (u, x, y, u))[1],
            "h iota14": P.homotopy("h", (x, u, u, y))[1],
        }

    def chain_residual(self, x, y) -> dict:
        """d[x,y] + [dx,y] + (-1)^{|x|}[x,dy]; zero for a degree +1 chain map."""
        P = self.presentation
        return _add(
            (1, P.diff(self(x, y))),
            (1, self(P.diff(x), y)),
            (sgn(x[0]), self(x, P.diff(y))))


def extract_bracket(P: TwoAlgebraPresentation, validate: bool = True, limit: Optional[int] = None) -> ExtractedBracket:
    if validate:
        rep = validate_presentation(P, limit=limit)
        if not rep.ok:
            bad = rep.first_failure()
            raise PresentationError(f"invalid presentation {P.name}: {bad.name} fails at {bad.witness}")
    return ExtractedBracket(P)


# -- homology inside the window ----------------------------------------------------------

def _dmatrix(P: TwoAlgebraPresentation, deg: int) -> Matrix:
    cols = [P.d(deg, i) for i in range(P.dims.get(deg, 0))]
    return Matrix.from_columns(P.dims.get(deg - 1, 0), cols)


def cycles(P: TwoAlgebraPresentation, deg: int) -> list:
    if not P.has(deg - 1):
        raise PresentationError(f"degree {deg}: its differential leaves the window")
    return kernel(_dmatrix(P, deg)).basis


def is_boundary(P: TwoAlgebraPresentation, x) -> bool:
    deg, v = x
    if not v:
        return True
    if not P.has(deg + 1):
        raise PresentationError(f"degree {deg}: boundaries come from outside the window")
    e = Echelon()
    for col in _dmatrix(P, deg + 1).columns():
        if col:
            e.add(col)
    return e.contains(v)


def eckmann_hilton_check(P: TwoAlgebraPresentation, degrees=None) -> Check:
    """
    With h = h_op = 0 the bracket vanishes and m1 - m2 is a boundary on
    cycles.  Checked on pairs of cycle basis vectors.
    """
    B = ExtractedBracket(P)
    degs = degrees if degrees is not None else [dg for dg in P.degrees() if P.has(dg - 1)]
    n = 0
    for da in degs:
        for db in degs:
            if not (P.has(da + db) and P.has(da + db + 1)):
                continue
            for za in cycles(P, da):
                for zb in cycles(P, db):
                    x, y = (da, za), (db, zb)
                    n += 1
                    if P.has(da + db + 1) and B(x, y)[1]:
                        return Check("bracket vanishes", False, n, _witness((x, y), B(x, y)[1]))
                    diff = _add((1, P.mul("m1", x, y)), (-1, P.mul("m2", x, y)))
                    if not is_boundary(P, (da + db, diff)):
                        return Check("m1 - m2 is a boundary", False, n, _witness((x, y), diff))
    return Check("Eckmann-Hilton degeneration", True, n)


# -- instances ----------------------------------------------------------------------

def commutative_presentation(A: AlgebraSpec) -> TwoAlgebraPresentation:
    """A commutative algebra in degree 0: m1 = m2, zero differential and homotopies."""
    if not A.is_commutative:
        raise PresentationError(f"{A.name} is not commutative")

    def m(da, i, db, j):
        return dict(A.products.get((i, j), {}))

    zero = lambda *a: {}
    return TwoAlgebraPresentation(
        name=f"commutative {A.name}", dims={0: A.dim}, d=zero, m1=m, m2=m,
        unit1=dict(A.unit_vec), unit2=dict(A.unit_vec), h=zero, h_op=zero,
        bounded_below=True)


def hochschild_presentation(A: AlgebraSpec, max_arity: int, budget: int = DEFAULT_BUDGET) -> TwoAlgebraPresentation:
    """
    The Hochschild cochains of arity 0..max_arity, in chain degrees
    -max_arity..0, with the signed cup as both products and the explicit
    interchange homotopies.
    """
    if max_arity < 0:
        raise ValueError("max_arity must be >= 0")
    size = A.dim ** (max_arity + 1)
    if size > budget:
        raise BudgetError(f"C^{max_arity} of {A.name}", size, budget)
    dims = {-n: A.dim ** (n + 1) for n in range(max_arity + 1)}

    @lru_cache(maxsize=None)
    def basis(deg, i):
        return Cochain.from_vector(A, -deg, {i: Fraction(1)})

    def vec(c: Cochain) -> dict:
        return c.to_vector()

    def d(deg, i):
        return vec(signed_differential(basis(deg, i)))

    def m(da, i, db, j):
        return vec(gerst.signed_cup(basis(da, i), basis(db, j)))

    def hom(fn):
        def run(degs, idx):
            if sum(degs) >= 0:
                return {}
            return vec(fn(*(basis(dg, i) for dg, i in zip(degs, idx))))
        return run

    u = Cochain.unit(A).to_vector()
    return TwoAlgebraPresentation(
        name=f"hochschild {A.name}", dims=dims, d=d, m1=m, m2=m, unit1=u, unit2=dict(u),
        h=hom(gerst.square_homotopy_h), h_op=hom(gerst.square_homotopy_h_op),
        meta={"algebra": A.name, "max_arity": max_arity, "conventions": gerst.sign_conventions()})


def as_cochain(A: AlgebraSpec, x) -> Cochain:
    deg, v = x
    return Cochain.from_vector(A, -deg, v)


def as_element(f: Cochain) -> tuple:
    return -f.arity, f.to_vector()


def corrupt(P: TwoAlgebraPresentation, which: str = "h", degs=None) -> TwoAlgebraPresentation:
    """A copy with one homotopy negated on a single degree pattern."""
    fn = P.h if which == "h" else P.h_op

    def bad(ds, idx):
        v = fn(ds, idx)
        if degs is None or tuple(ds) == tuple(degs):
            return {k: -c for k, c in v.items()}
        return v

    kw = dict(P.__dict__)
    kw[which] = bad
    kw["name"] = P.name + f" ({which} corrupted)"
    return TwoAlgebraPresentation(**kw)


# -- JSON -------------------------------------------------------------------------------

def _entries(v: dict) -> list:
    return [[k, fmt(c)] for k, c in sorted(v.items())]


def to_json(P: TwoAlgebraPresentation) -> dict:
    """
    Tabulate every structure map on the window.  Products and homotopies are
    listed only where their output degree stays in the window.
    """
    degs = P.degrees()
    doc = {
        "name": P.name,
        "bounded_below": P.bounded_below,
        "dims": {str(dg): P.dims[dg] for dg in degs},
        "unit1": _entries(P.unit1),
        "unit2": _entries(P.unit2),
        "d": [],
        "m1": [],
        "m2": [],
        "h": [],
        "h_op": [],
    }
    for dg in degs:
        if not P.has(dg - 1):
            continue
        for i in range(P.dims[dg]):
            v = P.d(dg, i)
            if v:
                doc["d"].append([dg, i, _entries(v)])
    for which in ("m1", "m2"):
        fn = P.m1 if which == "m1" else P.m2
        for da, db in product(degs, repeat=2):
            if not P.has(da + db):
                continue
            for i, j in product(range(P.dims[da]), range(P.dims[db])):
                v = fn(da, i, db, j)
                if v:
                    doc[which].append([da, i, db, j, _entries(v)])
    for which in ("h", "h_op"):
        fn = P.h if which == "h" else P.h_op
        for ds in product(degs, repeat=4):
            if not P.has(sum(ds) + 1):
                continue
            for idx in product(*(range(P.dims[dg]) for dg in ds)):
                v = fn(ds, idx)
                if v:
                    doc[which].append([list(ds), list(idx), _entries(v)])
    return doc


def dumps(P: TwoAlgebraPresentation) -> str:
    return json.dumps(to_json(P), sort_keys=True, indent=1)


def from_json(doc) -> TwoAlgebraPresentation:
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        dims = {int(k): int(v) for k, v in doc["dims"].items()}

        def vec(entries):
            return {int(k): scalar(c) for k, c in entries}

        dt = {(dg, i): vec(v) for dg, i, v in doc["d"]}
        mt = {w: {(da, i, db, j): vec(v) for da, i, db, j, v in doc[w]} for w in ("m1", "m2")}
        ht = {w: {(tuple(ds), tuple(idx)): vec(v) for ds, idx, v in doc[w]} for w in ("h", "h_op")}
        u1, u2 = vec(doc["unit1"]), vec(doc["unit2"])
        name = doc["name"]
        below = bool(doc.get("bounded_below", False))
    except (KeyError, TypeError, ValueError) as e:
        raise PresentationError(f"malformed presentation document: {e}") from None

    def table(t):
        return lambda *key: dict(t.get(key, {}))

    def htable(t):
        return lambda ds, idx: dict(t.get((tuple(ds), tuple(idx)), {}))

    return TwoAlgebraPresentation(
        name=name, dims=dims, d=lambda dg, i: dict(dt.get((dg, i), {})),
        m1=table(mt["m1"]), m2=table(mt["m2"]), unit1=u1, unit2=u2,
        h=htable(ht["h"]), h_op=htable(ht["h_op"]), bounded_below=below)
