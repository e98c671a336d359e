"""
Finite-dimensional unital associative algebras given by structure constants.

``e_i * e_j = sum_k c[i][j][k] e_k``.  Specs are validated (associativity on
all basis triples, two-sided unit) when constructed, so anything holding an
:class:`AlgebraSpec` can rely on both.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from .exactlin import Matrix, Subspace, axpy, fmt, kernel, scalar, vadd


class AlgebraError(ValueError):
    pass


class SpecFormatError(AlgebraError):
    """Malformed algebra JSON; ``where`` names the offending field."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    dim: int
    basis_labels: tuple
    unit: tuple
    structure: tuple  # structure[i][j] is a tuple of length dim

    def __post_init__(self):
        if self.dim < 1:
            raise AlgebraError("dimension must be positive")
        if len(self.basis_labels) != self.dim:
            raise AlgebraError("need one basis label per basis vector")
        if len(self.unit) != self.dim:
            raise AlgebraError("unit has the wrong length")
        if len(self.structure) != self.dim or any(
            len(row) != self.dim or any(len(c) != self.dim for c in row) for row in self.structure
        ):
            raise AlgebraError("structure constants must have shape dim x dim x dim")
        self._check_associative()
        self._check_unit()

    # -- construction ----------------------------------------------------

    @classmethod
    def from_table(cls, name: str, labels: Sequence[str], unit, products: dict) -> "AlgebraSpec":
        """Build from a sparse table {(i, j): {k: coeff}}; missing pairs are zero."""
        n = len(labels)
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), out in products.items():
            for k, v in out.items():
                c[i][j][k] = scalar(v)
        u = [Fraction(0)] * n
        if isinstance(unit, int):
            u[unit] = Fraction(1)
        else:
            u = [scalar(x) for x in unit]
        return cls(
            name=name,
            dim=n,
            basis_labels=tuple(labels),
            unit=tuple(u),
            structure=tuple(tuple(tuple(col) for col in row) for row in c),
        )

    # -- cached sparse views ------------------------------------------------

    @cached_property
    def products(self) -> dict:
        """(i, j) -> {k: c} for nonzero products of basis vectors."""
        out = {}
        for i, j in product(range(self.dim), repeat=2):
            v = {k: x for k, x in enumerate(self.structure[i][j]) if x}
            if v:
                out[(i, j)] = v
        return out

    @cached_property
    def factorizations(self) -> dict:
        """k -> [(i, j, c)] listing every basis product with an e_k component."""
        out: dict = {k: [] for k in range(self.dim)}
        for (i, j), v in self.products.items():
            for k, c in v.items():
                out[k].append((i, j, c))
        return out

    @cached_property
    def unit_vec(self) -> dict:
        return {k: x for k, x in enumerate(self.unit) if x}

    def mul(self, u: dict, v: dict) -> dict:
        """Product of two sparse coefficient vectors."""
        out: dict = {}
        prods = self.products
        for i, a in u.items():
            for j, b in v.items():
                p = prods.get((i, j))
                if p:
                    axpy(out, a * b, p)
        return out

    def basis_vec(self, i: int) -> dict:
        return {i: Fraction(1)}

    # -- validation ----------------------------------------------------------

    def _check_associative(self):
        for i, j, k in product(range(self.dim), repeat=3):
            left = self.mul(self.mul({i: 1}, {j: 1}), {k: 1})
            right = self.mul({i: 1}, self.mul({j: 1}, {k: 1}))
            if left != right:
                raise AlgebraError(
                    f"{self.name}: not associative at "
                    f"({self.basis_labels[i]}, {self.basis_labels[j]}, {self.basis_labels[k]})"
                )

    def _check_unit(self):
        u = self.unit_vec
        for i in range(self.dim):
            e = {i: Fraction(1)}
            if self.mul(u, e) != e or self.mul(e, u) != e:
                raise AlgebraError(f"{self.name}: unit fails on {self.basis_labels[i]}")

    @property
    def is_commutative(self) -> bool:
        return all(self.structure[i][j] == self.structure[j][i] for i, j in product(range(self.dim), repeat=2))

    def __repr__(self):
        return f"AlgebraSpec({self.name!r}, dim={self.dim})"

    # -- serialisation --------------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        for (i, j), v in sorted(self.products.items()):
            for k, c in sorted(v.items()):
                entries.append([i, j, k, fmt(c)])
        return {
            "name": self.name,
            "dim": self.dim,
            "basis": list(self.basis_labels),
            "unit": [fmt(x) for x in self.unit],
            "structure": entries,
        }


def same_algebra(A: AlgebraSpec, B: AlgebraSpec) -> bool:
    return A is B or (A.unit == B.unit and A.structure == B.structure)


class Element:
    """An element of a spec'd algebra, stored as a dense coefficient tuple."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: AlgebraSpec, coeffs):
        coeffs = tuple(scalar(x) for x in coeffs)
        if len(coeffs) != algebra.dim:
            raise AlgebraError("coefficient vector has the wrong length")
        self.algebra = algebra
        self.coeffs = coeffs

    @classmethod
    def basis(cls, algebra: AlgebraSpec, i: int) -> "Element":
        return cls(algebra, [1 if k == i else 0 for k in range(algebra.dim)])

    @classmethod
    def one(cls, algebra: AlgebraSpec) -> "Element":
        return cls(algebra, algebra.unit)

    @property
    def vec(self) -> dict:
        return {k: x for k, x in enumerate(self.coeffs) if x}

    def __mul__(self, other: "Element") -> "Element":
        return multiply(self, other)

    def __add__(self, other: "Element") -> "Element":
        if not same_algebra(other.algebra, self.algebra):
            raise AlgebraError("elements of different algebras")
        return Element(self.algebra, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other):
        return isinstance(other, Element) and same_algebra(other.algebra, self.algebra) and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{fmt(c)}*{self.algebra.basis_labels[k]}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


def multiply(a: Element, b: Element) -> Element:
    if not same_algebra(a.algebra, b.algebra):
        raise AlgebraError("cannot multiply elements of different algebras")
    A = a.algebra
    v = A.mul(a.vec, b.vec)
    return Element(A, [v.get(k, 0) for k in range(A.dim)])


# -- derived constructions ---------------------------------------------------

def center(A: AlgebraSpec) -> Subspace:
    """Z(A) as the kernel of the stacked commutator maps z -> z e_i - e_i z."""
    n = A.dim
    rows: dict = {}
    for i in range(n):
        for j in range(n):  # column j: coordinate z_j
            col = A.mul({j: 1}, {i: 1})
            axpy(col, -1, A.mul({i: 1}, {j: 1}))
            for k, v in col.items():
                rows.setdefault(i * n + k, {})[j] = v
    return kernel(Matrix(n * n, n, rows))


def opposite(A: AlgebraSpec) -> AlgebraSpec:
    n = A.dim
    c = tuple(tuple(A.structure[j][i] for j in range(n)) for i in range(n))
    name = A.name[:-3] if A.name.endswith("^op") else A.name + "^op"
    return AlgebraSpec(name, n, A.basis_labels, A.unit, c)


def tensor(A: AlgebraSpec, B: AlgebraSpec) -> AlgebraSpec:
    """A (x) B with basis e_a (x) f_b at index a*dim(B) + b."""
    m = B.dim
    labels = [f"{a}(x){b}" for a in A.basis_labels for b in B.basis_labels]
    products = {}
    for (a1, a2), pa in A.products.items():
        for (b1, b2), pb in B.products.items():
            out: dict = {}
            for ka, ca in pa.items():
                for kb, cb in pb.items():
                    vadd(out, ka * m + kb, ca * cb)
            products[(a1 * m + b1, a2 * m + b2)] = out
    unit = [A.unit[a] * B.unit[b] for a in range(A.dim) for b in range(m)]
    return AlgebraSpec.from_table(f"({A.name})(x)({B.name})", labels, unit, products)


# -- sample library -------------------------------------------------------------

def field_algebra() -> AlgebraSpec:
    return AlgebraSpec.from_table("field", ["1"], 0, {(0, 0): {0: 1}})


def trunc_poly(n: int) -> AlgebraSpec:
    """k[x]/(x^n), basis 1, x, ..., x^(n-1)."""
    if n < 1:
        raise AlgebraError("trunc_poly needs n >= 1")
    labels = ["1"] + ["x" if i == 1 else f"x^{i}" for i in range(1, n)]
    prods = {(i, j): {i + j: 1} for i in range(n) for j in range(n) if i + j < n}
    return AlgebraSpec.from_table(f"trunc_poly({n})", labels, 0, prods)


def matrix_algebra(n: int) -> AlgebraSpec:
    """M_n(k) with matrix units E_ij at index i*n + j."""
    if n < 1:
        raise AlgebraError("matrix needs n >= 1")
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    prods = {}
    for i, j, l in product(range(n), repeat=3):
        prods[(i * n + j, j * n + l)] = {i * n + l: 1}
    unit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    return AlgebraSpec.from_table(f"matrix({n})", labels, unit, prods)


def group_cyclic(m: int) -> AlgebraSpec:
    """Group algebra k[Z/m], basis g^0 .. g^(m-1)."""
    if m < 1:
        raise AlgebraError("group_cyclic needs m >= 1")
    labels = [f"g^{i}" for i in range(m)]
    prods = {(i, j): {(i + j) % m: 1} for i in range(m) for j in range(m)}
    return AlgebraSpec.from_table(f"group_cyclic({m})", labels, 0, prods)


def product_algebra(k: int) -> AlgebraSpec:
    """k^k with orthogonal idempotents."""
    if k < 1:
        raise AlgebraError("product needs k >= 1")
    labels = [f"p{i + 1}" for i in range(k)]
    prods = {(i, i): {i: 1} for i in range(k)}
    return AlgebraSpec.from_table(f"product({k})", labels, [1] * k, prods)


def upper_triangular(n: int) -> AlgebraSpec:
    """Upper triangular n x n matrices; a small non-commutative, non-semisimple test case."""
    if n < 1:
        raise AlgebraError("triangular needs n >= 1")
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    idx = {p: k for k, p in enumerate(pairs)}
    prods = {}
    for (i, j), (k, l) in product(pairs, repeat=2):
        if j == k:
            prods[(idx[(i, j)], idx[(k, l)])] = {idx[(i, l)]: 1}
    unit = [1 if i == j else 0 for i, j in pairs]
    labels = [f"E{i + 1}{j + 1}" for i, j in pairs]
    return AlgebraSpec.from_table(f"triangular({n})", labels, unit, prods)


_SAMPLES = {
    "trunc_poly": trunc_poly,
    "matrix": matrix_algebra,
    "group_cyclic": group_cyclic,
    "product": product_algebra,
    "triangular": upper_triangular,
}

_KEY = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*(-?\d+)\s*\))?\s*$")

SAMPLE_KEYS = ("field", "trunc_poly(n)", "matrix(n)", "group_cyclic(m)", "product(k)", "triangular(n)")


def sample_library(key: str) -> AlgebraSpec:
    """Look up a sample algebra such as ``"trunc_poly(2)"`` or ``"field"``."""
    m = _KEY.match(key)
    if not m:
        raise KeyError(f"unknown sample key {key!r}; expected one of {', '.join(SAMPLE_KEYS)}")
    name, arg = m.group(1), m.group(2)
    if name == "field" and arg is None:
        return field_algebra()
    if name in _SAMPLES and arg is not None:
        return _SAMPLES[name](int(arg))
    raise KeyError(f"unknown sample key {key!r}; expected one of {', '.join(SAMPLE_KEYS)}")


# -- JSON ingestion -------------------------------------------------------------

def from_json(doc) -> AlgebraSpec:
    """
    Parse an algebra document
    ``{"name", "dim", "basis", "unit", "structure": [[i, j, k, "p/q"], ...]}``.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise SpecFormatError(f"line {e.lineno}", e.msg) from None
    if not isinstance(doc, dict):
        raise SpecFormatError("<root>", "expected a JSON object")
    for key in ("dim", "basis", "unit", "structure"):
        if key not in doc:
            raise SpecFormatError(key, "missing field")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise SpecFormatError("dim", "must be a positive integer")
    basis = doc["basis"]
    if not isinstance(basis, list) or len(basis) != dim or not all(isinstance(b, str) for b in basis):
        raise SpecFormatError("basis", f"must be a list of {dim} strings")
    unit = doc["unit"]
    if not isinstance(unit, list) or len(unit) != dim:
        raise SpecFormatError("unit", f"must be a list of {dim} rationals")
    try:
        unit = [_rational(u) for u in unit]
    except ValueError as e:
        raise SpecFormatError("unit", str(e)) from None
    prods: dict = {}
    for n, entry in enumerate(doc["structure"]):
        where = f"structure[{n}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise SpecFormatError(where, "expected [i, j, k, \"p/q\"]")
        i, j, k, c = entry
        for name, v in zip("ijk", (i, j, k)):
            if not isinstance(v, int) or not 0 <= v < dim:
                raise SpecFormatError(where, f"index {name}={v!r} out of range")
        try:
            c = _rational(c)
        except ValueError as e:
            raise SpecFormatError(where, str(e)) from None
        slot = prods.setdefault((i, j), {})
        if k in slot:
            raise SpecFormatError(where, f"duplicate entry for ({i}, {j}, {k})")
        slot[k] = c
    try:
        return AlgebraSpec.from_table(doc.get("name", "unnamed"), basis, unit, prods)
    except AlgebraError as e:
        raise SpecFormatError("structure", str(e)) from None


def _rational(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ValueError(f"rational must be a \"p/q\" string, got {x!r}")
    try:
        return scalar(x)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"bad rational {x!r}: {e}") from None
