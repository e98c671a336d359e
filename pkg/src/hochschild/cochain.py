"""
Hochschild cochains C^n(A, A) = Hom(A^{(x)n}, A), the codifferential, and
cohomology.

A cochain of arity n is stored sparsely: ``rows[(i1, ..., in)]`` is the
coefficient vector of f(e_i1, ..., e_in).  Flattened coordinates put the
argument multi-index first (i1 major) and the output index last.

Two differentials are provided.  ``differential`` is the usual Hochschild
codifferential d; ``signed_differential`` is the chain-complex differential
f -> (-1)^n d f used with the grading |f| = -n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator, Optional, Sequence

from .algebra import AlgebraError, AlgebraSpec, same_algebra
from .exactlin import Echelon, Matrix, Solver, axpy, fmt, kernel, scalar, vadd

DEFAULT_BUDGET = 200_000


class BudgetError(RuntimeError):
    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what} needs {size} entries, over the budget of {budget}")
        self.size = size
        self.budget = budget


class Cochain:
    """An n-multilinear map A^n -> A.  Treat instances as immutable."""

    __slots__ = ("algebra", "arity", "rows")

    def __init__(self, algebra: AlgebraSpec, arity: int, rows: Optional[dict] = None):
        if arity < 0:
            raise ValueError("arity must be >= 0")
        self.algebra = algebra
        self.arity = arity
        self.rows = {I: r for I, r in (rows or {}).items() if r}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, A: AlgebraSpec, arity: int) -> "Cochain":
        return cls(A, arity, {})

    @classmethod
    def basis(cls, A: AlgebraSpec, args: tuple, out: int) -> "Cochain":
        """The cochain sending e_args to e_out and every other basis tuple to 0."""
        return cls(A, len(args), {tuple(args): {out: Fraction(1)}})

    @classmethod
    def element(cls, A: AlgebraSpec, vec: dict) -> "Cochain":
        """An element of A viewed as a 0-cochain."""
        return cls(A, 0, {(): dict(vec)} if vec else {})

    @classmethod
    def unit(cls, A: AlgebraSpec) -> "Cochain":
        return cls.element(A, A.unit_vec)

    @classmethod
    def identity(cls, A: AlgebraSpec) -> "Cochain":
        return cls(A, 1, {(i,): {i: Fraction(1)} for i in range(A.dim)})

    @classmethod
    def multiplication(cls, A: AlgebraSpec) -> "Cochain":
        return cls(A, 2, {k: dict(v) for k, v in A.products.items()})

    @classmethod
    def from_function(cls, A: AlgebraSpec, arity: int, fn: Callable) -> "Cochain":
        """fn receives a basis multi-index and returns a sparse vector."""
        return cls(A, arity, {I: fn(I) for I in product(range(A.dim), repeat=arity)})

    @classmethod
    def from_vector(cls, A: AlgebraSpec, arity: int, vec: dict) -> "Cochain":
        rows: dict = {}
        d = A.dim
        for flat, v in vec.items():
            r, k = divmod(flat, d)
            rows.setdefault(_unflatten(r, d, arity), {})[k] = v
        return cls(A, arity, rows)

    @classmethod
    def from_nested(cls, A: AlgebraSpec, arity: int, nested) -> "Cochain":
        rows = {}
        for I in product(range(A.dim), repeat=arity):
            cell = nested
            for i in I:
                cell = cell[i]
            rows[I] = {k: scalar(x) for k, x in enumerate(cell) if scalar(x)}
        return cls(A, arity, rows)

    @classmethod
    def random(cls, A: AlgebraSpec, arity: int, rng: random.Random, density: float = 0.5, span: int = 3):
        rows = {}
        for I in product(range(A.dim), repeat=arity):
            r = {}
            for k in range(A.dim):
                if rng.random() < density:
                    c = rng.randint(-span, span)
                    if c:
                        r[k] = Fraction(c)
            rows[I] = r
        return cls(A, arity, rows)

    # -- views ----------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.algebra.dim ** (self.arity + 1)

    def to_vector(self) -> dict:
        d = self.algebra.dim
        out = {}
        for I, r in self.rows.items():
            base = _flatten(I, d) * d
            for k, v in r.items():
                out[base + k] = v
        return out

    def to_nested(self, as_str: bool = False):
        d = self.algebra.dim
        conv = fmt if as_str else (lambda x: x)

        def build(prefix):
            if len(prefix) == self.arity:
                r = self.rows.get(prefix, {})
                return [conv(Fraction(r.get(k, 0))) for k in range(d)]
            return [build(prefix + (i,)) for i in range(d)]

        return build(())

    def value(self, *args) -> dict:
        """Evaluate on sparse argument vectors, extending multilinearly."""
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        out: dict = {}
        for I, r in self.rows.items():
            c = Fraction(1)
            for a, i in zip(args, I):
                c *= a.get(i, 0)
                if not c:
                    break
            if c:
                axpy(out, c, r)
        return out

    def __call__(self, *idx: int) -> dict:
        """Value on a tuple of basis indices."""
        return dict(self.rows.get(tuple(idx), {}))

    # -- linear structure -------------------------------------------------------

    def _check(self, other: "Cochain"):
        if not same_algebra(self.algebra, other.algebra):
            raise AlgebraError("cochains over different algebras")
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        rows = {I: dict(r) for I, r in self.rows.items()}
        for I, r in other.rows.items():
            axpy(rows.setdefault(I, {}), 1, r)
        return Cochain(self.algebra, self.arity, rows)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        rows = {I: dict(r) for I, r in self.rows.items()}
        for I, r in other.rows.items():
            axpy(rows.setdefault(I, {}), -1, r)
        return Cochain(self.algebra, self.arity, rows)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def scale(self, c) -> "Cochain":
        c = scalar(c)
        if not c:
            return Cochain(self.algebra, self.arity)
        return Cochain(self.algebra, self.arity, {I: {k: c * v for k, v in r.items()} for I, r in self.rows.items()})

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.arity == other.arity
            and same_algebra(self.algebra, other.algebra)
            and self.rows == other.rows
        )

    __hash__ = None

    def first_nonzero(self):
        """(args, out, value) of some nonzero entry, for error witnesses."""
        for I in sorted(self.rows):
            k = min(self.rows[I])
            return I, k, self.rows[I][k]
        return None

    def describe(self) -> str:
        labels = self.algebra.basis_labels
        parts = []
        for I in sorted(self.rows):
            arg = ",".join(labels[i] for i in I)
            val = " + ".join(f"{fmt(v)}*{labels[k]}" for k, v in sorted(self.rows[I].items()))
            parts.append(f"({arg}) -> {val}")
        return "; ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Cochain(arity={self.arity}, {self.describe()})"


def _flatten(I: tuple, d: int) -> int:
    r = 0
    for i in I:
        r = r * d + i
    return r


def _unflatten(r: int, d: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        r, i = divmod(r, d)
        out.append(i)
    return tuple(reversed(out))


def basis_cochains(A: AlgebraSpec, arity: int) -> Iterator[Cochain]:
    """Basis cochains in flattened order."""
    for I in product(range(A.dim), repeat=arity):
        for k in range(A.dim):
            yield Cochain.basis(A, I, k)


# -- differentials -------------------------------------------------------------

def differential(f: Cochain) -> Cochain:
    """
    (df)(a1..a_{n+1}) = a1 f(a2..) + sum_i (-1)^i f(.., a_i a_{i+1}, ..)
                        + (-1)^{n+1} f(a1..a_n) a_{n+1}
    """
    A = f.algebra
    n = f.arity
    out: dict = {}
    last = -1 if n % 2 == 0 else 1  # (-1)^{n+1}
    for R, val in f.rows.items():
        for a in range(A.dim):
            left = A.mul({a: 1}, val)
            if left:
                axpy(out.setdefault((a,) + R, {}), 1, left)
            right = A.mul(val, {a: 1})
            if right:
                axpy(out.setdefault(R + (a,), {}), last, right)
        for i in range(n):
            sign = 1 if i % 2 else -1  # (-1)^{i+1} for 0-based slot i
            for x, y, c in A.factorizations[R[i]]:
                axpy(out.setdefault(R[:i] + (x, y) + R[i + 1:], {}), sign * c, val)
    return Cochain(A, n + 1, out)


def signed_differential(f: Cochain) -> Cochain:
    """The graded differential (-1)^n d on an arity-n cochain."""
    df = differential(f)
    return df if f.arity % 2 == 0 else -df


# -- the complex and its cohomology ---------------------------------------------

class HochschildComplex:
    """
    Matrices of d: C^n -> C^{n+1} for one algebra, built lazily and cached
    together with their eliminations.
    """

    def __init__(self, A: AlgebraSpec, budget: int = DEFAULT_BUDGET):
        self.algebra = A
        self.budget = budget
        self._mats: dict = {}
        self._solvers: dict = {}
        self._kernels: dict = {}

    def dim(self, n: int) -> int:
        return self.algebra.dim ** (n + 1)

    def check_budget(self, n: int):
        size = self.dim(n)
        if size > self.budget:
            raise BudgetError(f"C^{n} of {self.algebra.name}", size, self.budget)

    def matrix(self, n: int) -> Matrix:
        """d: C^n -> C^{n+1} in flattened coordinates."""
        if n not in self._mats:
            self.check_budget(n + 1)
            cols = [differential(b).to_vector() for b in basis_cochains(self.algebra, n)]
            self._mats[n] = Matrix.from_columns(self.dim(n + 1), cols)
        return self._mats[n]

    def solver(self, n: int) -> Solver:
        if n not in self._solvers:
            self._solvers[n] = Solver(self.matrix(n))
        return self._solvers[n]

    def rank(self, n: int) -> int:
        if n < 0:
            return 0
        return self.solver(n).rank

    def cocycles(self, n: int):
        if n not in self._kernels:
            self._kernels[n] = kernel(self.matrix(n))
        return self._kernels[n]

    def hh_dim(self, n: int) -> int:
        return self.dim(n) - self.rank(n) - self.rank(n - 1)

    def representatives(self, n: int) -> list:
        """Cocycles whose classes form a basis of HH^n."""
        A = self.algebra
        e = Echelon()
        if n > 0:
            for col in self.matrix(n - 1).columns():
                if col:
                    e.add(col)
        reps = []
        for z in self.cocycles(n).basis:
            if e.add(z):
                reps.append(Cochain.from_vector(A, n, z))
        return reps

    def preimage(self, f: Cochain) -> Optional[Cochain]:
        """Some g with d g = f, or None."""
        n = f.arity
        if n == 0:
            return Cochain.zero(self.algebra, 0) if f.is_zero() else None
        x = self.solver(n - 1).solve(f.to_vector())
        if x is None:
            return None
        return Cochain.from_vector(self.algebra, n - 1, x)


@lru_cache(maxsize=32)
def complex_for(A: AlgebraSpec, budget: int = DEFAULT_BUDGET) -> HochschildComplex:
    return HochschildComplex(A, budget)


@dataclass
class CohomologyReport:
    algebra: AlgebraSpec
    max_degree: int
    dims: list
    representatives: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "max_degree": self.max_degree,
            "dims": list(self.dims),
            "representatives": [
                [r.to_nested(as_str=True) for r in reps] for reps in self.representatives
            ],
        }


def cohomology(A: AlgebraSpec, max_degree: int, budget: int = DEFAULT_BUDGET,
               with_representatives: bool = True) -> CohomologyReport:
    """HH^n(A, A) for n = 0..max_degree."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    cx = complex_for(A, budget)
    cx.check_budget(max_degree + 1)
    dims = [cx.hh_dim(n) for n in range(max_degree + 1)]
    reps = [cx.representatives(n) for n in range(max_degree + 1)] if with_representatives else []
    return CohomologyReport(A, max_degree, dims, reps)


def is_coboundary(f: Cochain, budget: int = DEFAULT_BUDGET) -> Optional[Cochain]:
    """Some g of arity n-1 with d g = f, or None when f is not a coboundary."""
    if f.arity < 1:
        raise ValueError("coboundaries have arity >= 1")
    return complex_for(f.algebra, budget).preimage(f)


def is_cocycle(f: Cochain) -> bool:
    return differential(f).is_zero()
