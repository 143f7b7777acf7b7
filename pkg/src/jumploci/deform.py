"""Holonomy Lie algebras, Maurer-Cartan systems and gauge calculus over Artin rings.

Coefficient rings are monomial truncations ``k[t_1..t_s] / (degree >= n)``.
A connection over such a ring is a :class:`~jumploci.cdga.FlatConnection`
whose coefficient matrix holds :class:`TruncElem` entries; a gauge element is
a ``(dim A^0, dim g)`` array of ring elements in the maximal ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from . import exact as ex
from .cdga import Cdga, FlatConnection, mc_residual
from .lie import LieAlgebra

__all__ = [
    "HolonomyPresentation",
    "holonomy",
    "flat_iff_holonomy_hom",
    "mc_equations",
    "mc_check",
    "TruncatedCoefficients",
    "TruncElem",
    "GaugeElement",
    "gauge_act",
    "LiftResult",
    "mc_lift",
    "gauge_equivalent",
]


@dataclass(frozen=True)
class HolonomyPresentation:
    """One relation per ``A^2`` basis element.

    Relation ``k`` reads ``sum_j linear[k][j] x_j + 1/2 sum_{j,l} quadratic[k][j, l] [x_j, x_l]``
    with ``quadratic[k]`` antisymmetric.
    """

    generators: tuple[str, ...]
    linear: tuple[np.ndarray, ...]
    quadratic: tuple[np.ndarray, ...]

    @property
    def relations(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.linear, self.quadratic))

    def nonzero_relations(self) -> list[int]:
        return [
            k
            for k, (lin, quad) in enumerate(self.relations)
            if any(lin) or any(quad.flat)
        ]


def holonomy(a: Cdga) -> HolonomyPresentation:
    n1 = a.dim(1)
    lin, quad = [], []
    if a.max_degree >= 2:
        mu = a.mul[(1, 1)]
        for k in range(a.dim(2)):
            lin.append(np.array(a.d[1][k, :], dtype=object))
            q = ex.zeros(n1, n1, a.field)
            for j in range(n1):
                for l in range(n1):
                    q[j, l] = Fraction(1, 2) * (mu[j, l, k] - mu[l, j, k])
            quad.append(q)
    return HolonomyPresentation(a.basis[1], tuple(lin), tuple(quad))


def flat_iff_holonomy_hom(a: Cdga, g: LieAlgebra, omega: FlatConnection) -> bool:
    """Whether ``x_j -> g_j`` (the ``g``-components of ``omega``) kills every holonomy relation."""
    pres = holonomy(a)
    comps = [omega.g_component(j) for j in range(a.dim(1))]
    n1 = len(comps)
    brackets = {}
    for lin, quad in pres.relations:
        acc = g.zero_vector()
        for j in range(n1):
            if lin[j]:
                acc = acc + lin[j] * comps[j]
        for j in range(n1):
            for l in range(n1):
                if quad[j, l]:
                    if (j, l) not in brackets:
                        brackets[(j, l)] = g.bracket(comps[j], comps[l])
                    acc = acc + quad[j, l] * brackets[(j, l)]
        if any(acc):
            return False
    return True


def variable_names(a: Cdga, g: LieAlgebra) -> list[str]:
    return [f"{x}_{y}" for x in a.basis[1] for y in g.basis]


def mc_equations(a: Cdga, g: LieAlgebra) -> list[ex.MultiPoly]:
    """Coefficients of ``d omega + 1/2 [omega, omega]`` in the generic connection.

    Variables are ``{A^1 name}_{g name}``; equations are ordered by ``A^2``
    basis element, then ``g`` basis element.
    """
    names = variable_names(a, g)
    generic = np.empty((a.dim(1), g.dim), dtype=object)
    for j in range(a.dim(1)):
        for k in range(g.dim):
            generic[j, k] = ex.MultiPoly.var(names, names[j * g.dim + k])
    res = mc_residual(a, g, generic)
    zero = ex.MultiPoly(names)
    return [zero + x for x in res.flat]


def mc_check(a: Cdga, g: LieAlgebra, omega: FlatConnection) -> bool:
    return all(not x for x in mc_residual(a, g, omega.coeffs).flat)


class TruncatedCoefficients:
    """The local Artin ring ``k[vars] / (all monomials of degree >= order)``."""

    def __init__(self, variables: Sequence[str], order: int, field: str = "rational"):
        if order < 1:
            raise ValueError("order must be at least 1")
        self.variables = tuple(variables)
        self.order = order
        self.field = field

    def __repr__(self):
        return f"TruncatedCoefficients({list(self.variables)}, order={self.order})"

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedCoefficients)
            and self.variables == other.variables
            and self.order == other.order
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.variables, self.order, self.field))

    def monomials(self, degree: int) -> list[tuple[int, ...]]:
        return [e for e in ex.all_exponents(len(self.variables), degree) if sum(e) == degree]

    def element(self, terms: Mapping[tuple[int, ...], object]) -> "TruncElem":
        return TruncElem(self, terms)

    def const(self, c) -> "TruncElem":
        return TruncElem(self, {(0,) * len(self.variables): ex.to_scalar(c, self.field)})

    def var(self, name: str, coeff=1) -> "TruncElem":
        e = [0] * len(self.variables)
        e[self.variables.index(name)] = 1
        return TruncElem(self, {tuple(e): ex.to_scalar(coeff, self.field)})

    def zero(self) -> "TruncElem":
        return TruncElem(self, {})

    def nilpotency_index(self) -> int:
        """Smallest ``N`` with ``m^N = 0``."""
        return self.order


class TruncElem:
    """Element of a :class:`TruncatedCoefficients` ring; immutable."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: TruncatedCoefficients, terms: Mapping[tuple[int, ...], object]):
        self.ring = ring
        self.terms = {tuple(e): c for e, c in terms.items() if c and sum(e) < ring.order}

    def _lift(self, other) -> "TruncElem":
        if isinstance(other, TruncElem):
            if other.ring != self.ring:
                raise ValueError("elements of different coefficient rings")
            return other
        return self.ring.const(other) if other else self.ring.zero()

    def __add__(self, other):
        try:
            o = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return TruncElem(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return TruncElem(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncElem):
            if isinstance(other, (int, Fraction, ex.Gaussian)):
                return TruncElem(self.ring, {e: c * other for e, c in self.terms.items()})
            return NotImplemented
        o = self._lift(other)
        n = self.ring.order
        t: dict = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in o.terms.items():
                if d1 + sum(e2) >= n:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return TruncElem(self.ring, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, ex.Gaussian)):
            inv = 1 / ex.to_scalar(other, "gaussian" if isinstance(other, ex.Gaussian) else "rational")
            return self * inv
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def constant_term(self):
        return self.terms.get((0,) * len(self.ring.variables), 0)

    def in_maximal_ideal(self) -> bool:
        return not self.constant_term()

    def homogeneous(self, degree: int) -> dict:
        return {e: c for e, c in self.terms.items() if sum(e) == degree}

    def low_degree(self) -> int:
        """Lowest degree of a nonzero term (``order`` for zero)."""
        return min((sum(e) for e in self.terms), default=self.ring.order)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            mon = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.ring.variables, e) if k
            )
            c = self.terms[e]
            parts.append(f"{c}*{mon}" if mon else str(c))
        return " + ".join(parts)


def _ring_array(ring: TruncatedCoefficients, shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = ring.zero()
    return out


def lift_scalars(ring: TruncatedCoefficients, arr, scale: TruncElem | None = None) -> np.ndarray:
    """Embed an exact-scalar array into the ring, optionally multiplying by ``scale``."""
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(*arr.shape):
        v = ring.const(arr[idx]) if arr[idx] else ring.zero()
        out[idx] = v * scale if scale is not None else v
    return out


@dataclass(frozen=True, eq=False)
class GaugeElement:
    """``alpha in A^0 (x) g (x) m``; ``coeffs`` has shape ``(dim A^0, dim g)``."""

    ring: TruncatedCoefficients
    coeffs: np.ndarray

    @classmethod
    def zero(cls, a: Cdga, g: LieAlgebra, ring: TruncatedCoefficients) -> "GaugeElement":
        return cls(ring, _ring_array(ring, (a.dim(0), g.dim)))

    def is_zero(self) -> bool:
        return all(not x for x in self.coeffs.flat)


def _as_ring(ring, x):
    return x if isinstance(x, TruncElem) else (ring.const(x) if x else ring.zero())


def _bracket_forms(a: Cdga, g: LieAlgebra, i: int, x: np.ndarray, j: int, y: np.ndarray) -> np.ndarray:
    """``[x, y]`` for ``x in A^i (x) g``, ``y in A^j (x) g`` with ring entries."""
    out = np.empty((a.dim(i + j), g.dim), dtype=object)
    out.fill(0)
    t = a.mul[(i, j)]
    for p in range(a.dim(i)):
        if not any(x[p]):
            continue
        for r in range(a.dim(j)):
            if not any(y[r]):
                continue
            col = [(k, s) for k, s in enumerate(t[p, r]) if s]
            if not col:
                continue
            br = g.bracket(x[p], y[r])
            for k, s in col:
                for m in range(g.dim):
                    if br[m]:
                        out[k, m] = out[k, m] + s * br[m]
    return out


def _d_forms(a: Cdga, i: int, x: np.ndarray, gdim: int) -> np.ndarray:
    out = np.empty((a.dim(i + 1), gdim), dtype=object)
    out.fill(0)
    di = a.d[i]
    for k in range(a.dim(i + 1)):
        for p in range(a.dim(i)):
            if di[k, p]:
                for m in range(gdim):
                    if x[p, m]:
                        out[k, m] = out[k, m] + di[k, p] * x[p, m]
    return out


def _normalize(ring, arr) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(*arr.shape):
        out[idx] = _as_ring(ring, arr[idx])
    return out


def gauge_act(
    a: Cdga,
    g: LieAlgebra,
    ring: TruncatedCoefficients,
    alpha: GaugeElement,
    omega: FlatConnection,
) -> FlatConnection:
    """``exp(alpha) . omega = omega + sum_{n>=0} ad(alpha)^n / (n+1)! ([alpha, omega] - d alpha)``."""
    for x in list(alpha.coeffs.flat) + list(omega.coeffs.flat):
        x = _as_ring(ring, x)
        if not x.in_maximal_ideal():
            raise ValueError("gauge data must lie in the maximal ideal")
    al = _normalize(ring, alpha.coeffs)
    om = _normalize(ring, omega.coeffs)
    term = _bracket_forms(a, g, 0, al, 1, om) - _d_forms(a, 0, al, g.dim)
    total = om.copy()
    for n in range(ring.nilpotency_index()):
        if not any(_as_ring(ring, x) for x in term.flat):
            break
        total = total + term * Fraction(1, factorial(n + 1))
        term = _bracket_forms(a, g, 0, al, 1, term)
    return FlatConnection(a, g, _normalize(ring, total))


@dataclass(frozen=True)
class LiftResult:
    lifted: FlatConnection | None
    obstruction: dict | None

    @property
    def ok(self) -> bool:
        return self.lifted is not None


def _order_part(ring, arr, degree) -> dict:
    """``{monomial: scalar array}`` of the degree-``degree`` part of a ring-valued array."""
    out: dict = {}
    for idx in np.ndindex(*arr.shape):
        x = _as_ring(ring, arr[idx])
        for e, c in x.homogeneous(degree).items():
            if e not in out:
                out[e] = ex.zeros(*arr.shape, ring.field)
            out[e][idx] = out[e][idx] + c
    return out


def mc_lift(
    a: Cdga, g: LieAlgebra, ring: TruncatedCoefficients, omega: FlatConnection
) -> LiftResult:
    """Correct ``omega`` (flat modulo ``m^(n-1)``) by a degree ``n - 1`` term so it is flat in ``ring``.

    The correction ``xi`` solves ``(d (x) id) xi = -r`` where ``r`` is the degree
    ``n - 1`` part of the MC residual.  If this linear system has no solution,
    ``r`` represents a nonzero class in ``H^2(A (x) g)`` and is returned as the
    obstruction ``{monomial: (dim A^2, dim g) array}``.
    """
    n = ring.order
    om = _normalize(ring, omega.coeffs)
    for x in om.flat:
        if not x.in_maximal_ideal():
            raise ValueError("connection must lie in the maximal ideal")
    res = mc_residual(a, g, om)
    res = _normalize(ring, res)
    top = n - 1
    for x in res.flat:
        if x.low_degree() < top:
            raise ValueError(f"input is not Maurer-Cartan modulo m^{top}")
    parts = _order_part(ring, res, top)
    d1 = a.d[1] if a.max_degree >= 2 else ex.zeros(0, a.dim(1), a.field)
    big = np.kron(d1, ex.identity(g.dim, a.field)).astype(object)
    corrected = om.copy()
    obstruction = {}
    for mono, r in parts.items():
        rhs = -r.reshape(-1)
        sol = ex.solve(big, rhs) if big.size else (None if any(rhs) else ex.zeros(a.dim(1) * g.dim, 1)[:, 0])
        if sol is None:
            obstruction[mono] = r
            continue
        sol = sol.reshape(a.dim(1), g.dim)
        for j in range(a.dim(1)):
            for m in range(g.dim):
                if sol[j, m]:
                    corrected[j, m] = corrected[j, m] + ring.element({mono: sol[j, m]})
    if obstruction:
        return LiftResult(None, obstruction)
    return LiftResult(FlatConnection(a, g, corrected), None)


def _alpha_from(ring, a, g, base: np.ndarray, unknowns, values) -> GaugeElement:
    al = base.copy()
    for (p, m, mono), v in zip(unknowns, values):
        if v:
            al[p, m] = al[p, m] + ring.element({mono: v})
    return GaugeElement(ring, al)


def _flatten_order(ring, arr, degree, monos) -> list:
    parts = _order_part(ring, arr, degree)
    vec = []
    for mono in monos:
        block = parts.get(mono)
        vec.extend(block.reshape(-1) if block is not None else [ex.to_scalar(0, ring.field)] * arr.size)
    return vec


def gauge_equivalent(
    a: Cdga,
    g: LieAlgebra,
    ring: TruncatedCoefficients,
    omega1: FlatConnection,
    omega2: FlatConnection,
    augmented: bool = False,
) -> GaugeElement | None:
    """A gauge element ``alpha`` with ``exp(alpha) . omega1 = omega2``, or ``None``.

    Solved degree by degree.  At degree ``k`` the unknowns are the degree-``k``
    part of ``alpha`` and a correction of its degree ``k - 1`` part inside
    ``ker d^0``; the degree-``k`` equation is affine in them.  Earlier choices are
    not revisited, so ``None`` is a certificate only when every step was
    uniquely determined (see ``README``).  With ``augmented`` the gauge group of
    the augmentation ideal is used, which is trivial for connected ``a``.
    """
    for om in (omega1, omega2):
        if any(mc_residual(a, g, _normalize(ring, om.coeffs)).flat):
            raise ValueError("both connections must be flat")
    o1 = _normalize(ring, omega1.coeffs)
    o2 = _normalize(ring, omega2.coeffs)
    zero = GaugeElement.zero(a, g, ring)
    if augmented:
        if a.dim(0) != 1:
            raise ValueError("augmented gauge group needs a connected algebra")
        return zero if all(x == y for x, y in zip(o1.flat, o2.flat)) else None
    ker0 = ex.kernel_basis(a.d[0]) if a.max_degree >= 1 else []
    alpha = zero.coeffs.copy()
    for k in range(1, ring.order):
        unknowns = [(p, m, mono) for mono in ring.monomials(k) for p in range(a.dim(0)) for m in range(g.dim)]
        n_new = len(unknowns)
        corr_dirs = []
        if k >= 2:
            for mono in ring.monomials(k - 1):
                for v in ker0:
                    for m in range(g.dim):
                        corr_dirs.append((v, m, mono))
        monos = ring.monomials(k)

        def evaluate(vals):
            al = alpha.copy()
            for (p, m, mono), x in zip(unknowns, vals[:n_new]):
                if x:
                    al[p, m] = al[p, m] + ring.element({mono: x})
            for (v, m, mono), x in zip(corr_dirs, vals[n_new:]):
                if x:
                    for p in range(a.dim(0)):
                        if v[p]:
                            al[p, m] = al[p, m] + ring.element({mono: x * v[p]})
            moved = gauge_act(a, g, ring, GaugeElement(ring, al), FlatConnection(a, g, o1)).coeffs
            return _flatten_order(ring, moved - o2, k, monos), al

        nvar = n_new + len(corr_dirs)
        zero_s = ex.to_scalar(0, ring.field)
        one_s = ex.to_scalar(1, ring.field)
        f0, _ = evaluate([zero_s] * nvar)
        cols = []
        for i in range(nvar):
            vals = [zero_s] * nvar
            vals[i] = one_s
            fi, _ = evaluate(vals)
            cols.append([x - y for x, y in zip(fi, f0)])
        rhs = ex.vector([-x for x in f0], ring.field)
        if nvar == 0 or not cols:
            if any(rhs):
                return None
            continue
        mat = np.array(cols, dtype=object).T
        sol = ex.solve(mat, rhs)
        if sol is None:
            return None
        _, alpha = evaluate(list(sol))
    result = GaugeElement(ring, alpha)
    moved = gauge_act(a, g, ring, result, FlatConnection(a, g, o1)).coeffs
    if all(_as_ring(ring, x) == _as_ring(ring, y) for x, y in zip(moved.flat, o2.flat)):
        return result
    return None
