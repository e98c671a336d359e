"""
Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` (always in lowest terms, positive
denominator).  Vectors are sparse ``dict[int, Fraction]`` with no stored
zeros; matrices keep one such dict per row.  Everything here is exact, so
the pivot rule only affects speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

Scalar = Fraction
Vec = dict  # dict[int, Fraction], zeros never stored

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    pass


class ContainmentError(ValueError):
    pass


def scalar(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings.  Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"decimal literal not allowed for an exact scalar: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot make an exact scalar from {type(x).__name__}")


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# -- sparse vector helpers ---------------------------------------------------

def vadd(out: dict, key, c) -> None:
    """out[key] += c, dropping the entry if it cancels."""
    if not c:
        return
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def axpy(out: dict, a, x: Mapping) -> None:
    """out += a*x in place."""
    if not a:
        return
    for k, v in x.items():
        vadd(out, k, a * v)


def vscale(a, x: Mapping) -> dict:
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


def vsub(x: Mapping, y: Mapping) -> dict:
    out = dict(x)
    axpy(out, -1, y)
    return out


def dense(v: Mapping, n: int) -> list:
    return [Fraction(v.get(i, 0)) for i in range(n)]


def sparse(values: Sequence) -> dict:
    return {i: scalar(x) for i, x in enumerate(values) if x}


# -- matrices ----------------------------------------------------------------

class Matrix:
    """Sparse rational matrix, row-major.  Treat as immutable."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Optional[Mapping[int, Mapping]] = None):
        self.nrows = nrows
        self.ncols = ncols
        clean = {}
        for i, r in (rows or {}).items():
            if not 0 <= i < nrows:
                raise DimensionError(f"row {i} out of range for {nrows} rows")
            rr = {}
            for j, v in r.items():
                if not 0 <= j < ncols:
                    raise DimensionError(f"column {j} out of range for {ncols} columns")
                v = scalar(v)
                if v:
                    rr[j] = v
            if rr:
                clean[i] = rr
        self.rows = clean

    @classmethod
    def from_dense(cls, grid: Sequence[Sequence], ncols: Optional[int] = None) -> "Matrix":
        nrows = len(grid)
        if ncols is None:
            ncols = len(grid[0]) if nrows else 0
        for r in grid:
            if len(r) != ncols:
                raise DimensionError("ragged grid")
        return cls(nrows, ncols, {i: sparse(r) for i, r in enumerate(grid)})

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping]) -> "Matrix":
        rows: dict = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows.setdefault(i, {})[j] = v
        return cls(nrows, len(columns), rows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {i: {i: ONE} for i in range(n)})

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols)

    def to_dense(self) -> list:
        return [dense(self.rows.get(i, {}), self.ncols) for i in range(self.nrows)]

    def columns(self) -> list:
        cols: list = [dict() for _ in range(self.ncols)]
        for i, r in self.rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def transpose(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, dict(enumerate(self.columns())))

    def apply(self, x: Mapping) -> dict:
        """Matrix times sparse vector."""
        out = {}
        for i, r in self.rows.items():
            s = 0
            if len(r) < len(x):
                for j, v in r.items():
                    w = x.get(j)
                    if w:
                        s += v * w
            else:
                for j, w in x.items():
                    v = r.get(j)
                    if v:
                        s += v * w
            if s:
                out[i] = Fraction(s)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot compose {self.shape} with {other.shape}")
        rows = {}
        for i, r in self.rows.items():
            acc: dict = {}
            for k, v in r.items():
                o = other.rows.get(k)
                if o:
                    axpy(acc, v, o)
            if acc:
                rows[i] = acc
        return Matrix(self.nrows, other.ncols, rows)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            acc = rows.setdefault(i, {})
            axpy(acc, -1, r)
        return Matrix(self.nrows, self.ncols, rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            acc = rows.setdefault(i, {})
            axpy(acc, 1, r)
        return Matrix(self.nrows, self.ncols, rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def is_zero(self) -> bool:
        return not self.rows

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


# -- elimination -------------------------------------------------------------

def _pivot_key(v: Fraction, length: int):
    # smallest denominator first, then shortest row (fill-in), stable on index
    return (v.denominator, length)


class Echelon:
    """
    Incrementally maintained row-echelon basis of a span.

    Each stored vector has a distinct leading (smallest) index and is scaled
    so its leading entry is 1.  If ``track`` is set every stored vector also
    carries its expression as a combination of the inserted vectors, which
    is what :meth:`express` uses to solve linear systems.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict = {}   # lead index -> vector
        self.combos: dict = {}   # lead index -> combination of inputs
        self.track = track
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, v: dict, combo: Optional[dict]):
        v = dict(v)
        while v:
            lead = min(v)
            p = self.pivots.get(lead)
            if p is None:
                return v, combo, lead
            c = v[lead]
            axpy(v, -c, p)
            if combo is not None:
                axpy(combo, -c, self.combos[lead])
        return v, combo, None

    def add(self, v: Mapping, label=None) -> bool:
        """Insert v; return True if it was independent of what is stored."""
        idx = self.count if label is None else label
        self.count += 1
        combo = {idx: ONE} if self.track else None
        r, combo, lead = self._reduce(v, combo)
        if lead is None:
            return False
        inv = 1 / r[lead]
        r = {k: x * inv for k, x in r.items()}
        self.pivots[lead] = r
        if self.track:
            self.combos[lead] = {k: x * inv for k, x in combo.items()}
        return True

    def contains(self, v: Mapping) -> bool:
        r, _, _ = self._reduce(v, None)
        return not r

    def express(self, v: Mapping) -> Optional[dict]:
        """Coefficients c with sum c[label]*input[label] == v, or None."""
        if not self.track:
            raise RuntimeError("Echelon built without tracking")
        r, combo, _ = self._reduce(v, {})
        if r:
            return None
        return {k: -x for k, x in combo.items() if x}


def rref(m: Matrix):
    """
    Reduced row echelon form.  Returns (pivot_columns, rows) where rows[i]
    has a 1 in pivot_columns[i] and zeros in every other pivot column.
    """
    work = [dict(r) for r in m.rows.values()]
    pivot_rows: dict = {}  # pivot col -> row
    for r in work:
        # forward-reduce against existing pivots
        while r:
            hit = [c for c in r if c in pivot_rows]
            if not hit:
                break
            for c in hit:
                x = r.get(c)
                if x:
                    axpy(r, -x, pivot_rows[c])
        if not r:
            continue
        col = min(r, key=lambda c: (_pivot_key(r[c], len(r)), c))
        inv = 1 / r[col]
        r = {k: v * inv for k, v in r.items()}
        # back-substitute into earlier pivot rows
        for c, pr in pivot_rows.items():
            x = pr.get(col)
            if x:
                axpy(pr, -x, r)
        pivot_rows[col] = r
    cols = sorted(pivot_rows)
    return cols, [pivot_rows[c] for c in cols]


def rank(m: Matrix) -> int:
    # eliminate along the shorter side
    if m.nrows <= m.ncols:
        vectors = m.rows.values()
    else:
        vectors = [c for c in m.columns() if c]
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


class Subspace:
    """A subspace of Q^n given by a linearly independent basis."""

    __slots__ = ("ambient_dim", "basis", "_echelon")

    def __init__(self, ambient_dim: int, basis: Iterable[Mapping] = (), check: bool = True):
        self.ambient_dim = ambient_dim
        vecs = [dict(b) for b in basis]
        for v in vecs:
            if any(not 0 <= k < ambient_dim for k in v):
                raise DimensionError("basis vector outside ambient space")
        self._echelon = None
        if check:
            e = Echelon()
            for v in vecs:
                if not e.add(v):
                    raise ValueError("basis vectors are linearly dependent")
            self._echelon = e
        self.basis = vecs

    @classmethod
    def spanned_by(cls, ambient_dim: int, vectors: Iterable[Mapping]) -> "Subspace":
        """Extract an independent subset of the given vectors."""
        e = Echelon()
        keep = [dict(v) for v in vectors if e.add(v)]
        s = cls(ambient_dim, keep, check=False)
        s._echelon = e
        return s

    @property
    def dim(self) -> int:
        return len(self.basis)

    def echelon(self) -> Echelon:
        if self._echelon is None:
            e = Echelon()
            for v in self.basis:
                e.add(v)
            self._echelon = e
        return self._echelon

    def contains(self, v: Mapping) -> bool:
        return self.echelon().contains(v)

    def dense_basis(self) -> list:
        return [dense(v, self.ambient_dim) for v in self.basis]

    def __repr__(self):
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


def kernel(m: Matrix) -> Subspace:
    """Basis of {v : m v = 0}, one vector per free column."""
    cols, rows = rref(m)
    pivset = set(cols)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = {free: ONE}
        for c, r in zip(cols, rows):
            x = r.get(free)
            if x:
                v[c] = -x
        basis.append(v)
    return Subspace(m.ncols, basis, check=False)


def image(m: Matrix) -> Subspace:
    """Basis of the column space, drawn from the columns themselves."""
    return Subspace.spanned_by(m.nrows, (c for c in m.columns() if c))


class Solver:
    """Repeated solves of m x = b against a fixed m."""

    def __init__(self, m: Matrix):
        self.m = m
        self._e = Echelon(track=True)
        for j, col in enumerate(m.columns()):
            if col:
                self._e.add(col, label=j)
            else:
                self._e.count += 1

    @property
    def rank(self) -> int:
        return self._e.rank

    def solve(self, b: Mapping) -> Optional[dict]:
        if any(not 0 <= i < self.m.nrows for i in b):
            raise DimensionError("right-hand side has the wrong length")
        b = {i: scalar(v) for i, v in b.items() if v}
        x = self._e.express(b)
        if x is None:
            return None
        assert self.m.apply(x) == b, "back-substitution check failed"
        return x


def solve(m: Matrix, b) -> Optional[list]:
    """
    Some x with m x = b (as a dense list), or None when b is not in the
    column space.  b may be a dense sequence or a sparse dict.
    """
    if not isinstance(b, Mapping):
        if len(b) != m.nrows:
            raise DimensionError(f"b has length {len(b)}, matrix has {m.nrows} rows")
        b = sparse(b)
    x = Solver(m).solve(b)
    if x is None:
        return None
    return dense(x, m.ncols)


def quotient_dim(big: Subspace, small: Subspace) -> int:
    if big.ambient_dim != small.ambient_dim:
        raise DimensionError("subspaces live in different ambient spaces")
    for v in small.basis:
        if not big.contains(v):
            raise ContainmentError("small is not contained in big")
    return big.dim - small.dim
