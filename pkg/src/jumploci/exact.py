"""Exact scalars, dense exact linear algebra and sparse multivariate polynomials.

Two coefficient fields are supported: the rationals (``fractions.Fraction``)
and the Gaussian rationals (:class:`Gaussian`).  Matrices are numpy arrays of
``dtype=object`` holding exact scalars, so ``@`` and ``+`` on them stay exact.

Row reduction always takes the first nonzero entry of a column as pivot, which
makes every result (rank, kernel basis, normal forms) deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Gaussian",
    "FIELDS",
    "to_scalar",
    "parse_scalar",
    "format_scalar",
    "is_zero",
    "conj",
    "matrix",
    "zeros",
    "identity",
    "vector",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "det",
    "inverse",
    "nilpotency_and_singularity",
    "matrix_equal",
    "MultiPoly",
]

FIELDS = ("rational", "gaussian")


class Gaussian:
    """Element ``re + im*i`` of the field Q(i), with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gaussian is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, Gaussian):
            return other
        if isinstance(other, (int, Fraction)):
            return Gaussian(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        return Gaussian(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (Gaussian(1) / self) ** (-n)
        out, base = Gaussian(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}+{self.im}i" if self.im > 0 else f"{self.re}{self.im}i"


def to_scalar(x, field: str = "rational"):
    """Coerce ints, Fractions, strings or Gaussians into the requested field."""
    if field not in FIELDS:
        raise ValueError(f"unknown field {field!r}")
    if isinstance(x, Gaussian):
        if field == "rational":
            if x.im != 0:
                raise ValueError(f"{x} is not rational")
            return x.re
        return x
    if isinstance(x, (str, list, tuple)):
        return parse_scalar(x, field)
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    q = Fraction(x)
    return Gaussian(q) if field == "gaussian" else q


def parse_scalar(text, field: str = "rational"):
    """Parse ``"p/q"``, ``"p"`` or ``["p/q", "r/s"]`` (real, imaginary)."""
    if isinstance(text, (list, tuple)):
        if len(text) != 2:
            raise ValueError(f"gaussian scalar needs two parts, got {text!r}")
        g = Gaussian(Fraction(str(text[0])), Fraction(str(text[1])))
        return to_scalar(g, field)
    if isinstance(text, int):
        return to_scalar(text, field)
    if not isinstance(text, str):
        raise ValueError(f"cannot parse scalar {text!r}")
    try:
        q = Fraction(text.strip())
    except ValueError as exc:
        raise ValueError(f"cannot parse scalar {text!r}") from exc
    if "." in text or "e" in text.lower():
        raise ValueError(f"decimal notation not accepted: {text!r}")
    return to_scalar(q, field)


def format_scalar(x):
    """Inverse of :func:`parse_scalar`; Gaussians always print as a pair."""
    if isinstance(x, Gaussian):
        return [str(x.re), str(x.im)]
    return str(Fraction(x))


def is_zero(x) -> bool:
    return not x


def conj(x):
    return x.conjugate() if isinstance(x, Gaussian) else x


def matrix(rows, field: str = "rational") -> np.ndarray:
    """Build an exact 2-d object array from nested sequences."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    out = np.empty((len(rows), ncols), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            out[i, j] = to_scalar(x, field)
    return out


def zeros(rows: int, cols: int, field: str = "rational") -> np.ndarray:
    zero = Gaussian(0) if field == "gaussian" else Fraction(0)
    out = np.empty((rows, cols), dtype=object)
    out.fill(zero)
    return out


def identity(n: int, field: str = "rational") -> np.ndarray:
    out = zeros(n, n, field)
    one = Gaussian(1) if field == "gaussian" else Fraction(1)
    for i in range(n):
        out[i, i] = one
    return out


def vector(entries: Iterable, field: str = "rational") -> np.ndarray:
    vals = [to_scalar(x, field) for x in entries]
    out = np.empty(len(vals), dtype=object)
    for i, v in enumerate(vals):
        out[i] = v
    return out


def _rows(m) -> list[list]:
    m = np.asarray(m, dtype=object)
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return [list(r) for r in m]


def _rref_lists(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            inv = 1 / piv
            rows[r] = [x * inv for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.asarray(m, dtype=object)
    rows, piv = _rref_lists(_rows(m), m.shape[1])
    out = np.empty(m.shape, dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = x
    return out, piv


def rank(m) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    # eliminate along the shorter side
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(_rref_lists(_rows(m), m.shape[1])[1])


def kernel_basis(m) -> list[np.ndarray]:
    """Basis of ``{v : m v = 0}``, one vector per free column, in column order."""
    m = np.asarray(m, dtype=object)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return [_unit(ncols, j, m) for j in range(ncols)]
    rows, piv = _rref_lists(_rows(m), ncols)
    free = [j for j in range(ncols) if j not in set(piv)]
    zero, one = _zero_one(m)
    basis = []
    for f in free:
        v = np.empty(ncols, dtype=object)
        v.fill(zero)
        v[f] = one
        for r, c in enumerate(piv):
            v[c] = -rows[r][f]
        basis.append(v)
    return basis


def _zero_one(m):
    for x in np.asarray(m, dtype=object).flat:
        if isinstance(x, Gaussian):
            return Gaussian(0), Gaussian(1)
    return Fraction(0), Fraction(1)


def _unit(n, j, like):
    zero, one = _zero_one(like)
    v = np.empty(n, dtype=object)
    v.fill(zero)
    v[j] = one
    return v


def solve(a, b) -> np.ndarray | None:
    """One solution of ``a x = b`` (free variables set to zero) or ``None``.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    vec = b.ndim == 1
    b2 = b.reshape(-1, 1) if vec else b
    n, k = a.shape[1], b2.shape[1]
    aug = [list(ra) + list(rb) for ra, rb in zip(_rows(a), _rows(b2))]
    rows, piv = _rref_lists(aug, n + k)
    if any(p >= n for p in piv):
        return None
    zero, _ = _zero_one(np.concatenate([a.ravel(), b2.ravel()]) if a.size + b2.size else a)
    x = np.empty((n, k), dtype=object)
    x.fill(zero)
    for r, c in enumerate(piv):
        for j in range(k):
            x[c, j] = rows[r][n + j]
    return x[:, 0] if vec else x


def det(m):
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("det needs a square matrix")
    rows = _rows(m)
    zero, one = _zero_one(m)
    acc = one
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return zero
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            acc = -acc
        piv = rows[c][c]
        acc = acc * piv
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f / piv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return acc


def inverse(m) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    field = "gaussian" if isinstance(_zero_one(m)[0], Gaussian) else "rational"
    x = solve(m, identity(n, field))
    if x is None or rank(m) < n:
        raise ZeroDivisionError("matrix is singular")
    return x


def matrix_equal(a, b) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def nilpotency_and_singularity(m) -> tuple[bool, bool]:
    """``(m**n == 0, det m == 0)`` for an ``n x n`` matrix, computed exactly."""
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("square matrix required")
    if n == 0:
        return True, False
    p = m
    for _ in range(n - 1):
        p = p @ m
    nilpotent = all(not x for x in p.flat)
    return nilpotent, det(m) == 0


class MultiPoly:
    """Sparse polynomial: ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != len(self.variables):
                raise ValueError("exponent length does not match variables")
            if c:
                clean[e] = c
        self.terms = clean

    @classmethod
    def constant(cls, variables, c):
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def var(cls, variables, name, coeff=1):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): Fraction(coeff) if isinstance(coeff, int) else coeff})

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variable lists")
            return other
        return MultiPoly.constant(self.variables, other)

    def __add__(self, other):
        o = self._lift(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return MultiPoly(self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = MultiPoly.constant(self.variables, Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            other = self._lift(other)
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, point):
        """Evaluate at a mapping ``name -> scalar`` or a sequence in variable order."""
        if isinstance(point, Mapping):
            vals = [point[v] for v in self.variables]
        else:
            vals = list(point)
        acc = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term = term * x**k
            acc = acc + term
        return acc

    def coefficient(self, exponent: tuple):
        return self.terms.get(tuple(exponent), 0)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mon = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k
            )
            cs = f"({c})" if isinstance(c, Gaussian) else str(c)
            parts.append(mon if mon and c == 1 else (f"{cs}*{mon}" if mon else cs))
        return " + ".join(parts)


def all_exponents(nvars: int, max_total: int):
    """Exponent tuples of total degree ``<= max_total`` in graded-lex order."""
    out = [e for e in _cartesian(range(max_total + 1), repeat=nvars) if sum(e) <= max_total]
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out
