"""
The bar resolution B(A) -> A and the constructions built on it.

Elements of B_n = A^{(x)(n+2)} are sparse dicts from basis tuples of length
n+2 to Fractions.  Elements of B (x)_A B are sparse dicts keyed by
``(p, t)`` where ``t`` has length p+q+3: the last factor of the left copy
and the first factor of the right copy are fused into the middle slot.

Signs: the differential on B (x)_A B is b' (x) 1 + (-1)^p 1 (x) b' on the
(p, q) summand, and homotopies satisfy d H + H d = source - target.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

from .algebra import AlgebraSpec
from .cochain import DEFAULT_BUDGET, BudgetError, Cochain, complex_for, signed_differential
from .exactlin import Echelon, Matrix, axpy, kernel, vadd
from .gerst import ConventionMismatchError, sgn, signed_cup


class WindowError(ValueError):
    """A request whose answer would depend on truncated degrees."""


# -- tensor helpers -------------------------------------------------------------------

def _mul_into(A: AlgebraSpec, out: dict, t: tuple, i: int, c) -> None:
    """Add c * (t with factors i, i+1 multiplied) to out."""
    for k, v in A.products.get((t[i], t[i + 1]), {}).items():
        vadd(out, t[:i] + (k,) + t[i + 2:], c * v)


def insert_unit(A: AlgebraSpec, t: tuple, pos: int, c=1):
    """Terms of t with the unit inserted before position pos."""
    for k, v in A.unit_vec.items():
        yield t[:pos] + (k,) + t[pos:], c * v


def act(A: AlgebraSpec, x: dict, left: Optional[int] = None, right: Optional[int] = None) -> dict:
    """e_left . x . e_right on a sparse tensor, acting on the outer factors."""
    out: dict = {}
    for t, c in x.items():
        terms = {t: c}
        if left is not None:
            nxt: dict = {}
            for s, d in terms.items():
                for k, v in A.products.get((left, s[0]), {}).items():
                    vadd(nxt, (k,) + s[1:], d * v)
            terms = nxt
        if right is not None:
            nxt = {}
            for s, d in terms.items():
                for k, v in A.products.get((s[-1], right), {}).items():
                    vadd(nxt, s[:-1] + (k,), d * v)
            terms = nxt
        for s, d in terms.items():
            vadd(out, s, d)
    return out


def generator(A: AlgebraSpec, args: tuple) -> dict:
    """1 (x) e_args (x) 1 in B_n."""
    out: dict = {}
    for l, u in A.unit_vec.items():
        for r, w in A.unit_vec.items():
            vadd(out, (l,) + tuple(args) + (r,), u * w)
    return out


# -- the bar complex ----------------------------------------------------------------

@dataclass
class BarComplex:
    algebra: AlgebraSpec
    N: int
    budget: int = DEFAULT_BUDGET
    _mats: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("truncation must be >= 0")
        size = self.algebra.dim ** (self.N + 2)
        if size > self.budget:
            raise BudgetError(f"B_{self.N} of {self.algebra.name}", size, self.budget)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def rank_of(self, n: int) -> int:
        return self.dim ** (n + 2)

    def basis(self, n: int):
        return product(range(self.dim), repeat=n + 2)

    def index(self, t: tuple) -> int:
        r = 0
        for i in t:
            r = r * self.dim + i
        return r

    def bprime(self, x: dict) -> dict:
        """b' = sum_i (-1)^i (multiply factors i, i+1); zero on B_0."""
        A = self.algebra
        out: dict = {}
        for t, c in x.items():
            n = len(t) - 2
            if n <= 0:
                continue
            for i in range(n + 1):
                _mul_into(A, out, t, i, c * sgn(i))
        return {k: v for k, v in out.items() if v}

    def augment(self, x: dict) -> dict:
        """B_0 -> A, a0 (x) a1 -> a0 a1."""
        A = self.algebra
        out: dict = {}
        for t, c in x.items():
            if len(t) != 2:
                raise ValueError("augmentation is defined on B_0")
            for k, v in A.products.get(t, {}).items():
                vadd(out, k, c * v)
        return out

    def _to_flat(self, x: dict) -> dict:
        return {self.index(t): c for t, c in x.items()}

    def matrix(self, n: int) -> Matrix:
        """b': B_n -> B_{n-1} for 1 <= n <= N."""
        if not 1 <= n <= self.N:
            raise WindowError(f"b' on B_{n} is outside 1..{self.N}")
        if n not in self._mats:
            cols = [self._to_flat(self.bprime({t: Fraction(1)})) for t in self.basis(n)]
            self._mats[n] = Matrix.from_columns(self.rank_of(n - 1), cols)
        return self._mats[n]

    def augmentation_matrix(self) -> Matrix:
        cols = [self.augment({t: Fraction(1)}) for t in self.basis(0)]
        return Matrix.from_columns(self.dim, cols)

    def check_square_zero(self) -> bool:
        for n in range(2, self.N + 1):
            if not (self.matrix(n - 1) @ self.matrix(n)).is_zero():
                return False
        if self.N >= 1 and not (self.augmentation_matrix() @ self.matrix(1)).is_zero():
            return False
        return True

    def augmented_homology(self) -> list:
        """Homology dims of ... -> B_1 -> B_0 -> A -> 0 at B_0..B_{N-1}, then at A."""
        ranks = [_rank(self.augmentation_matrix())]
        ranks += [_rank(self.matrix(n)) for n in range(1, self.N + 1)]
        dims = []
        for n in range(self.N):
            dims.append(self.rank_of(n) - ranks[n] - ranks[n + 1])
        dims.append(self.dim - ranks[0])
        return dims

    def check_exact(self) -> bool:
        return all(h == 0 for h in self.augmented_homology())


def _rank(m: Matrix) -> int:
    e = Echelon()
    for c in m.columns():
        if c:
            e.add(c)
    return e.rank


def build_bar(A: AlgebraSpec, N: int, budget: int = DEFAULT_BUDGET, check: bool = True) -> BarComplex:
    bar = BarComplex(A, N, budget)
    if check and not (bar.check_square_zero() and bar.check_exact()):
        raise ConventionMismatchError("bar resolution exactness", (N,))
    return bar


# -- bimodule maps B_n -> A ----------------------------------------------------------

class EquivarianceError(ValueError):
    pass


@dataclass
class BimoduleMap:
    """A k-linear map B_n -> A, stored by its values on basis tensors."""

    algebra: AlgebraSpec
    degree: int
    values: dict

    def __call__(self, x: dict) -> dict:
        out: dict = {}
        for t, c in x.items():
            v = self.values.get(t)
            if v:
                axpy(out, c, v)
        return out

    def equivariance_defect(self):
        """A basis witness (a, t, b) where m(e_a t e_b) != e_a m(t) e_b, or None."""
        A = self.algebra
        for t in product(range(A.dim), repeat=self.degree + 2):
            mt = self.values.get(t, {})
            for a in range(A.dim):
                for b in range(A.dim):
                    lhs = self(act(A, {t: Fraction(1)}, a, b))
                    rhs = A.mul(A.mul({a: Fraction(1)}, mt), {b: Fraction(1)})
                    if lhs != rhs:
                        return (a, t, b)
        return None

    def is_equivariant(self) -> bool:
        return self.equivariance_defect() is None


def bimodule_map_of_cochain(f: Cochain) -> BimoduleMap:
    """Extend f to B_n -> A by a0 (x) a (x) a_{n+1} -> a0 f(a) a_{n+1}."""
    A = f.algebra
    vals = {}
    for t in product(range(A.dim), repeat=f.arity + 2):
        v = f.rows.get(t[1:-1])
        if v:
            w = A.mul(A.mul({t[0]: Fraction(1)}, v), {t[-1]: Fraction(1)})
            if w:
                vals[t] = w
    return BimoduleMap(A, f.arity, vals)


def cochain_of_bimodule_map(m: BimoduleMap, check: bool = True) -> Cochain:
    """f(a_1..a_n) = m(1 (x) a_1 .. a_n (x) 1)."""
    if check:
        bad = m.equivariance_defect()
        if bad is not None:
            raise EquivarianceError(f"map is not A-bilinear at {bad}")
    A = m.algebra
    rows = {}
    for I in product(range(A.dim), repeat=m.degree):
        v = m(generator(A, I))
        if v:
            rows[I] = v
    return Cochain(A, m.degree, rows)


def transported_differential(f: Cochain) -> Cochain:
    """The cochain of m o b' where m is the bimodule extension of f."""
    A = f.algebra
    bar = BarComplex(A, f.arity + 1, budget=10 ** 9)
    m = bimodule_map_of_cochain(f)
    rows = {}
    for I in product(range(A.dim), repeat=f.arity + 1):
        v = m(bar.bprime(generator(A, I)))
        if v:
            rows[I] = v
    return Cochain(A, f.arity + 1, rows)


# -- B (x)_A B, diagonals, and the homotopy ---------------------------------------------

def tensor_differential(bar: BarComplex, x: dict) -> dict:
    """b' (x) 1 + (-1)^p 1 (x) b' on fused elements keyed (p, t)."""
    A = bar.algebra
    out: dict = {}
    for (p, t), c in x.items():
        q = len(t) - p - 3
        if p >= 1:
            tmp: dict = {}
            for i in range(p + 1):
                _mul_into(A, tmp, t, i, c * sgn(i))
            for s, v in tmp.items():
                vadd(out, (p - 1, s), v)
        if q >= 1:
            tmp = {}
            for j in range(q + 1):
                _mul_into(A, tmp, t, p + 1 + j, c * sgn(p + j))
            for s, v in tmp.items():
                vadd(out, (p, s), v)
    return {k: v for k, v in out.items() if v}


def diagonal_AW(bar: BarComplex, x: dict) -> dict:
    """a0..a_{n+1} -> sum_i (a0..a_i (x) 1) (x)_A (1 (x) a_{i+1}..a_{n+1})."""
    A = bar.algebra
    out: dict = {}
    for t, c in x.items():
        n = len(t) - 2
        for i in range(n + 1):
            for s, v in insert_unit(A, t, i + 1, c):
                vadd(out, (i, s), v)
    return {k: v for k, v in out.items() if v}


def diagonal_point(bar: BarComplex, x: dict) -> dict:
    """Zero above degree 0; a0 (x) a1 -> (1 (x) 1) (x)_A (1 (x) a0 a1)."""
    A = bar.algebra
    out: dict = {}
    for t, c in x.items():
        if len(t) != 2:
            continue
        for k, v in A.products.get(t, {}).items():
            for s, u in insert_unit(A, (k,), 0, c * v):
                for r, w in insert_unit(A, s, 0, u):
                    vadd(out, (0, r), w)
    return {k: v for k, v in out.items() if v}


def diagonal_homotopy(bar: BarComplex, x: dict) -> dict:
    """a0..a_{n+1} -> sum_{i=0}^{n+1} (1 (x) a0..a_{i-1} (x) 1) (x)_A (1 (x) a_i..a_{n+1})."""
    A = bar.algebra
    out: dict = {}
    for t, c in x.items():
        n = len(t) - 2
        for i in range(n + 2):
            for s, u in insert_unit(A, t, i, c):
                for r, w in insert_unit(A, s, 0, u):
                    vadd(out, (i, r), w)
    return {k: v for k, v in out.items() if v}


def diagonal_homotopy_residual(bar: BarComplex, n: int, raise_on_failure: bool = False):
    """
    Largest-first list of basis points t in B_n where
    d H + H b' != Delta_AW - Delta_point.  Empty when the homotopy is valid.
    """
    if n > bar.N - 1:
        raise WindowError(f"degree {n} is outside the safe window 0..{bar.N - 1}")
    bad = []
    for t in bar.basis(n):
        x = {t: Fraction(1)}
        lhs = tensor_differential(bar, diagonal_homotopy(bar, x))
        for k, v in diagonal_homotopy(bar, bar.bprime(x)).items():
            vadd(lhs, k, v)
        rhs = diagonal_AW(bar, x)
        for k, v in diagonal_point(bar, x).items():
            vadd(rhs, k, -v)
        diff = dict(lhs)
        for k, v in rhs.items():
            vadd(diff, k, -v)
        diff = {k: v for k, v in diff.items() if v}
        if diff:
            if raise_on_failure:
                raise ConventionMismatchError("bar diagonal homotopy", (n,), t)
            bad.append(t)
    return bad


def diagonal_chain_map_defect(bar: BarComplex, n: int, diagonal: Callable):
    """Basis points of B_n where d Delta != Delta b'."""
    bad = []
    for t in bar.basis(n):
        x = {t: Fraction(1)}
        lhs = tensor_differential(bar, diagonal(bar, x))
        rhs = diagonal(bar, bar.bprime(x))
        if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
            bad.append(t)
    return bad


def counit_left(bar: BarComplex, y: dict) -> dict:
    """(aug (x) id) on the p = 0 summand: (c0, m, rest) -> c0 m (x) rest."""
    A = bar.algebra
    out: dict = {}
    for (p, t), c in y.items():
        if p != 0:
            continue
        for k, v in A.products.get((t[0], t[1]), {}).items():
            vadd(out, (k,) + t[2:], c * v)
    return {k: v for k, v in out.items() if v}


# -- products through the bar complex --------------------------------------------------

def _pair_value(A: AlgebraSpec, f: Cochain, g: Cochain, p: int, t: tuple) -> dict:
    """(f^ (x) g^) on the fused tensor t with left degree p, before any sign."""
    fv = f.rows.get(t[1:p + 1])
    if not fv:
        return {}
    gv = g.rows.get(t[p + 2:-1])
    if not gv:
        return {}
    left = A.mul({t[0]: Fraction(1)}, fv)
    mid = A.mul(left, {t[p + 1]: Fraction(1)})
    return A.mul(A.mul(mid, gv), {t[-1]: Fraction(1)})


DIAGONALS = {"aw": diagonal_AW, "point": diagonal_point}


def convolution(f: Cochain, g: Cochain, diagonal: str = "aw", koszul: bool = True) -> Cochain:
    """
    mu o (f (x) g) o Delta, read off on 1 (x) a (x) 1.  The Koszul rule
    contributes (-1)^{pq} when g passes the degree-p left factor.
    """
    A = f.algebra
    p, q = f.arity, g.arity
    delta = DIAGONALS[diagonal]
    bar = BarComplex(A, p + q, budget=10 ** 9)
    sign = sgn(p * q) if koszul else 1
    rows = {}
    for I in product(range(A.dim), repeat=p + q):
        out: dict = {}
        for (i, t), c in delta(bar, generator(A, I)).items():
            if i != p:
                continue
            v = _pair_value(A, f, g, p, t)
            if v:
                axpy(out, sign * c, v)
        out = {k: v for k, v in out.items() if v}
        if out:
            rows[I] = out
    return Cochain(A, p + q, rows)


def lift(g: Cochain, x: dict) -> dict:
    """
    The lift of g to B_n -> B_{n-q}:
    a0..a_{n+1} -> (-1)^{q(n+1)} a0 (x) .. (x) a_{n-q} (x) g(a_{n-q+1}..a_n) a_{n+1}.
    """
    A = g.algebra
    q = g.arity
    out: dict = {}
    for t, c in x.items():
        n = len(t) - 2
        if n < q:
            continue
        v = g.rows.get(t[n - q + 1:n + 1])
        if not v:
            continue
        w = A.mul(v, {t[-1]: Fraction(1)})
        head = t[:n - q + 1]
        s = c * sgn(q * (n + 1))
        for k, u in w.items():
            vadd(out, head + (k,), s * u)
    return {k: v for k, v in out.items() if v}


def lift_chain_defect(g: Cochain, max_n: int):
    """
    Basis points where D(lift g) != -lift(dg), with
    D(phi) = b' phi - (-1)^{|phi|} phi b' and |phi| = -q.
    """
    A = g.algebra
    q = g.arity
    dg = signed_differential(g)
    bar = BarComplex(A, max_n, budget=10 ** 9)
    bad = []
    for n in range(q, max_n + 1):
        for t in bar.basis(n):
            x = {t: Fraction(1)}
            lhs = bar.bprime(lift(g, x))
            for k, v in lift(g, bar.bprime(x)).items():
                vadd(lhs, k, -sgn(q) * v)
            for k, v in lift(dg, x).items():
                vadd(lhs, k, v)
            if any(lhs.values()):
                bad.append((n, t))
    return bad


def lift_equivariance_defect(g: Cochain, n: int):
    A = g.algebra
    for t in product(range(A.dim), repeat=n + 2):
        base = lift(g, {t: Fraction(1)})
        for a in range(A.dim):
            for b in range(A.dim):
                lhs = lift(g, act(A, {t: Fraction(1)}, a, b))
                rhs = act(A, base, a, b)
                if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                    return (a, t, b)
    return None


def yoneda(f: Cochain, g: Cochain) -> Cochain:
    """Composition product: aug o lift(f) o lift(g), read off on generators."""
    A = f.algebra
    p, q = f.arity, g.arity
    bar = BarComplex(A, 0, budget=10 ** 9)
    rows = {}
    for I in product(range(A.dim), repeat=p + q):
        y = lift(f, lift(g, generator(A, I)))
        v = bar.augment(y) if y else {}
        v = {k: c for k, c in v.items() if c}
        if v:
            rows[I] = v
    return Cochain(A, p + q, rows)


# -- the endomorphism complex ------------------------------------------------------------

@dataclass
class EndoComplexWindow:
    """
    Truncated Hom_{A^e}(B, B).  A degree-k element is a family of
    bimodule maps phi_n: B_n -> B_{n+k} for max(0, -k) <= n <= N, stored by
    their values on generators 1 (x) e_I (x) 1.  Components with n > N are
    dropped, which makes the window a quotient complex.
    """

    bar: BarComplex
    N: int
    _index: dict = field(default_factory=dict, repr=False)
    _mats: dict = field(default_factory=dict, repr=False)

    @property
    def algebra(self) -> AlgebraSpec:
        return self.bar.algebra

    def safe_degrees(self) -> range:
        """Cohomological degrees q (chain degree -q) answered correctly."""
        return range(0, self.N)

    def basis(self, k: int) -> list:
        if k not in self._index:
            d = self.algebra.dim
            keys = []
            for n in range(max(0, -k), self.N + 1):
                m = n + k
                for I in product(range(d), repeat=n):
                    for J in product(range(d), repeat=m + 2):
                        keys.append((n, I, J))
            self._index[k] = {key: i for i, key in enumerate(keys)}
        return list(self._index[k])

    def dim(self, k: int) -> int:
        self.basis(k)
        return len(self._index[k])

    def index(self, k: int) -> dict:
        self.basis(k)
        return self._index[k]

    def evaluate(self, phi: dict, x: dict) -> dict:
        """ev(phi, x) for phi keyed (n, I) -> tensor and x in B."""
        A = self.algebra
        out: dict = {}
        for t, c in x.items():
            n = len(t) - 2
            val = phi.get((n, t[1:-1]))
            if not val:
                continue
            for s, v in act(A, val, t[0], t[-1]).items():
                vadd(out, s, c * v)
        return {k: v for k, v in out.items() if v}

    def compose(self, phi: dict, psi: dict) -> dict:
        """(phi o psi) restricted to components that stay inside the window."""
        A = self.algebra
        out = {}
        for (n, I), val in psi.items():
            if n > self.N:
                continue
            v = self.evaluate(phi, val)
            if v:
                out[(n, I)] = v
        return out

    def element(self, k: int, vec: dict) -> dict:
        keys = self.basis(k)
        phi: dict = {}
        for i, c in vec.items():
            n, I, J = keys[i]
            vadd(phi.setdefault((n, I), {}), J, c)
        return phi

    def differential(self, k: int, phi: dict) -> dict:
        """(D phi)_n = b' phi_n - (-1)^k phi_{n-1} b' on generators, n <= N."""
        A = self.algebra
        bar = self.bar
        out: dict = {}
        for (n, I), val in phi.items():
            if n + k >= 1:
                for s, v in bar.bprime(val).items():
                    vadd(out.setdefault((n, I), {}), s, v)
        for n in range(max(1, 1 - k), self.N + 1):
            for I in product(range(A.dim), repeat=n):
                faces = bar.bprime(generator(A, I))
                v = self.evaluate(phi, faces)
                if v:
                    tgt = out.setdefault((n, I), {})
                    for s, c in v.items():
                        vadd(tgt, s, -sgn(k) * c)
        return {key: {s: c for s, c in v.items() if c} for key, v in out.items() if any(v.values())}

    def flatten(self, k: int, phi: dict) -> dict:
        idx = self.index(k)
        out = {}
        for (n, I), v in phi.items():
            for J, c in v.items():
                if c:
                    out[idx[(n, I, J)]] = c
        return out

    def matrix(self, k: int) -> Matrix:
        """D: E^k -> E^{k-1}."""
        if k not in self._mats:
            cols = []
            for i in range(self.dim(k)):
                cols.append(self.flatten(k - 1, self.differential(k, self.element(k, {i: Fraction(1)}))))
            self._mats[k] = Matrix.from_columns(self.dim(k - 1), cols)
        return self._mats[k]

    def square_zero(self, k: int) -> bool:
        return (self.matrix(k - 1) @ self.matrix(k)).is_zero()

    def cohomology_dim(self, q: int) -> int:
        """Cohomology at chain degree -q."""
        self._check_safe(q)
        k = -q
        return self.dim(k) - _rank(self.matrix(k)) - _rank(self.matrix(k + 1))

    def _check_safe(self, q: int):
        if q not in self.safe_degrees():
            raise WindowError(f"degree {q} is too close to the truncation edge N = {self.N}")

    def comparison(self, q: int, phi: dict) -> Cochain:
        """aug o phi_q, as an arity-q cochain."""
        A = self.algebra
        rows = {}
        for I in product(range(A.dim), repeat=q):
            val = phi.get((q, I))
            if val:
                v = {k: c for k, c in self.bar.augment(val).items() if c}
                if v:
                    rows[I] = v
        return Cochain(A, q, rows)

    def comparison_rank(self, q: int) -> int:
        """Rank of the map induced on cohomology by the comparison in degree q."""
        self._check_safe(q)
        A = self.algebra
        cx = complex_for(A)
        e = Echelon()
        if q > 0:
            for col in cx.matrix(q - 1).columns():
                if col:
                    e.add(col)
        base = e.rank
        for z in kernel(self.matrix(-q)).basis:
            f = self.comparison(q, self.element(-q, z))
            if not cx.matrix(q).apply(f.to_vector()) == {}:
                raise ConventionMismatchError("comparison map is not a chain map", (q,))
            e.add(f.to_vector())
        return e.rank - base

    def coboundary_of(self, q: int, phi: dict) -> dict:
        return self.differential(-q, phi)

    def identity(self) -> dict:
        A = self.algebra
        return {(n, I): generator(A, I) for n in range(self.N + 1) for I in product(range(A.dim), repeat=n)}

    def random_element(self, k: int, rng: random.Random, terms: int = 4) -> dict:
        size = self.dim(k)
        vec = {rng.randrange(size): Fraction(rng.randint(-3, 3)) for _ in range(terms)}
        return self.element(k, {i: c for i, c in vec.items() if c})


def endo_complex(bar: BarComplex, N: Optional[int] = None) -> EndoComplexWindow:
    """
    The window of End(B) whose components are phi_n with n <= N.  The bar
    complex must reach degree N + 1 so that degree-one maps are defined.
    """
    if N is None:
        N = bar.N - 1
    if N < 1:
        raise WindowError("the window needs N >= 1")
    if bar.N < N + 1:
        raise WindowError(f"bar complex truncated at {bar.N}; the window needs {N + 1}")
    return EndoComplexWindow(bar, N)
