"""Finite connected CDGAs truncated at a top degree, with resonance computations.

A :class:`Cdga` stores, for each degree ``0..max_degree``, an ordered list of
basis names, a dense product table ``mul[(i, j)]`` of shape
``(dim A^i, dim A^j, dim A^{i+j})`` for ``i + j <= max_degree`` and the
differentials ``d[i]: A^i -> A^{i+1}`` as ``(dim A^{i+1}, dim A^i)`` matrices
for ``i < max_degree``.  Nothing is known about the differential out of the
top degree, so top-degree cohomology is only an upper bound.

Connections ``omega in A^1 (x) g`` are coefficient matrices indexed by
(``A^1`` basis, ``g`` basis).  Their entries may be exact scalars or elements
of any commutative ring that accepts multiplication by scalars; this is how the
deformation module reuses the same code over truncated coefficient rings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import exact as ex
from .lie import LieAlgebra, LieRep, character, preset_lie

__all__ = [
    "Cdga",
    "CdgaMorphism",
    "Cohomology",
    "HirschData",
    "FlatConnection",
    "Connectivity",
    "ResonanceDecision",
    "validate",
    "cohomology",
    "cohomology_dim",
    "hirsch_extend",
    "mc_residual",
    "is_flat",
    "aomoto",
    "aomoto_cohomology",
    "resonance_membership",
    "scalar_resonance_dim",
    "rank_one_locus_membership",
    "pi_locus_membership",
    "rank_one_resonance_test",
    "morphism_connectivity",
    "pullback_connection",
    "exterior",
    "heisenberg",
    "surface",
    "wedge_of_circles",
    "punctured_sphere",
    "chevalley_eilenberg",
]


@dataclass(frozen=True, eq=False)
class Cdga:
    basis: tuple[tuple[str, ...], ...]
    mul: Mapping[tuple[int, int], np.ndarray]
    d: tuple[np.ndarray, ...]
    field: str = "rational"
    name: str = ""

    @property
    def max_degree(self) -> int:
        return len(self.basis) - 1

    def dim(self, i: int) -> int:
        return len(self.basis[i]) if 0 <= i <= self.max_degree else 0

    def index(self, name: str) -> tuple[int, int]:
        for deg, names in enumerate(self.basis):
            if name in names:
                return deg, names.index(name)
        raise KeyError(f"no basis element named {name!r}")

    def zero(self, i: int) -> np.ndarray:
        return ex.vector([0] * self.dim(i), self.field)

    def vec(self, i: int, coords) -> np.ndarray:
        """Degree-``i`` vector from a coordinate list or ``{name: scalar}``."""
        if isinstance(coords, Mapping):
            v = self.zero(i)
            for k, s in coords.items():
                v[self.basis[i].index(k)] = ex.to_scalar(s, self.field)
            return v
        v = ex.vector(coords, self.field)
        if len(v) != self.dim(i):
            raise ValueError(f"degree {i} vectors have length {self.dim(i)}")
        return v

    def product(self, i: int, x, j: int, y) -> np.ndarray:
        """Product of a degree-``i`` and a degree-``j`` vector (generic ring entries allowed)."""
        if i + j > self.max_degree:
            raise ValueError("product leaves the truncation")
        t = self.mul[(i, j)]
        out = np.empty(self.dim(i + j), dtype=object)
        out.fill(ex.to_scalar(0, self.field))
        for p in range(self.dim(i)):
            if not x[p]:
                continue
            for q in range(self.dim(j)):
                if not y[q]:
                    continue
                col = t[p, q]
                xy = x[p] * y[q]
                for k in range(len(col)):
                    if col[k]:
                        out[k] = out[k] + col[k] * xy
        return out

    def differential(self, i: int, x) -> np.ndarray:
        if i >= self.max_degree:
            raise ValueError("differential out of the top degree is not recorded")
        return self.d[i] @ np.asarray(x, dtype=object)

    def has_zero_differential(self) -> bool:
        return all(not s for m in self.d for s in m.flat)

    @classmethod
    def build(
        cls,
        basis: Sequence[Sequence[str]],
        products: Mapping[tuple[str, str], Mapping[str, object]] | None = None,
        differential: Mapping[str, Mapping[str, object]] | None = None,
        field: str = "rational",
        name: str = "",
        symmetrize: bool = True,
    ) -> "Cdga":
        """Assemble from sparse data.

        Products with the unit are filled in.  With ``symmetrize`` a product
        ``(a, b)`` given without ``(b, a)`` also defines ``b*a`` by graded
        commutativity; missing pairs are zero.
        """
        basis = tuple(tuple(b) for b in basis)
        q = len(basis) - 1
        if q < 0:
            raise ValueError("empty basis")
        where = {}
        for deg, names in enumerate(basis):
            for k, nm in enumerate(names):
                if nm in where:
                    raise ValueError(f"duplicate basis name {nm!r}")
                where[nm] = (deg, k)
        dims = [len(b) for b in basis]
        zero = ex.to_scalar(0, field)
        one = ex.to_scalar(1, field)
        mul = {}
        for i in range(q + 1):
            for j in range(q + 1 - i):
                t = np.empty((dims[i], dims[j], dims[i + j]), dtype=object)
                t.fill(zero)
                mul[(i, j)] = t
        if dims[0] >= 1:
            for j in range(q + 1):
                for k in range(dims[j]):
                    mul[(0, j)][0, k, k] = one
                    mul[(j, 0)][k, 0, k] = one
        products = dict(products or {})
        given = set(products)
        for (a, b), out in products.items():
            (i, p), (j, r) = where[a], where[b]
            if i + j > q:
                continue
            for c, s in out.items():
                deg, k = where[c]
                if deg != i + j:
                    raise ValueError(f"product {a}*{b} lands in the wrong degree")
                mul[(i, j)][p, r, k] = ex.to_scalar(s, field)
        if symmetrize:
            for a, b in given:
                if (b, a) in given:
                    continue
                (i, p), (j, r) = where[a], where[b]
                if i + j > q:
                    continue
                sign = -1 if (i * j) % 2 else 1
                mul[(j, i)][r, p, :] = sign * mul[(i, j)][p, r, :]
        d = []
        for i in range(q):
            d.append(ex.zeros(dims[i + 1], dims[i], field))
        for a, out in (differential or {}).items():
            i, p = where[a]
            for c, s in out.items():
                deg, k = where[c]
                if deg != i + 1:
                    raise ValueError(f"d({a}) must land in degree {i + 1}")
                if i < q:
                    d[i][k, p] = ex.to_scalar(s, field)
        return cls(basis, mul, tuple(d), field, name)


@dataclass(frozen=True)
class Cohomology:
    degree: int
    dim: int
    representatives: tuple[np.ndarray, ...]
    truncated: bool


def _mat_from_columns(cols, nrows, field) -> np.ndarray:
    if not cols:
        return ex.zeros(nrows, 0, field)
    return np.stack([np.asarray(c, dtype=object) for c in cols], axis=1)


def _cocycles(a: Cdga, i: int) -> tuple[list[np.ndarray], bool]:
    if i < a.max_degree:
        return ex.kernel_basis(a.d[i]), False
    n = a.dim(i)
    eye = ex.identity(n, a.field)
    return [eye[:, k] for k in range(n)], True


def _coboundaries(a: Cdga, i: int) -> np.ndarray:
    if i == 0:
        return ex.zeros(a.dim(0), 0, a.field)
    return a.d[i - 1]


def cohomology(a: Cdga, i: int) -> Cohomology:
    """``H^i(A)`` with cocycle representatives in row-echelon-derived normal form.

    At ``i == max_degree`` every top-degree element is treated as a cocycle, so
    the dimension is an upper bound and ``truncated`` is set.
    """
    if not 0 <= i <= a.max_degree:
        raise ValueError(f"degree {i} outside 0..{a.max_degree}")
    z, truncated = _cocycles(a, i)
    b = _coboundaries(a, i)
    cur = [list(r) for r in b.T]
    base = ex.rank(b) if b.size else 0
    reps = []
    for v in z:
        trial = cur + [list(v)]
        r = ex.rank(ex.matrix(trial, a.field)) if trial else 0
        if r > base:
            cur, base = trial, r
            reps.append(v)
    return Cohomology(i, len(reps), tuple(reps), truncated)


def cohomology_dim(a: Cdga, i: int) -> int:
    return cohomology(a, i).dim


def validate(a: Cdga) -> list[str]:
    """Every violated CDGA axiom within the truncation, with the offending basis data."""
    issues: list[str] = []
    q = a.max_degree
    if a.dim(0) != 1:
        issues.append(f"not connected: dim A^0 = {a.dim(0)}")
        return issues
    one = ex.to_scalar(1, a.field)
    for j in range(q + 1):
        for k in range(a.dim(j)):
            e = a.zero(j)
            e[k] = one
            if not ex.matrix_equal(a.mul[(0, j)][0, k], e) or not ex.matrix_equal(
                a.mul[(j, 0)][k, 0], e
            ):
                issues.append(f"unit does not act as identity on {a.basis[j][k]}")
    if q >= 1 and any(a.d[0].flat):
        issues.append("d(1) != 0")
    for i in range(1, q + 1):
        for j in range(1, q + 1 - i):
            sign = -1 if (i * j) % 2 else 1
            for p in range(a.dim(i)):
                for r in range(a.dim(j)):
                    if (i, p) > (j, r):
                        continue
                    lhs = a.mul[(i, j)][p, r]
                    rhs = a.mul[(j, i)][r, p]
                    if any(x - sign * y for x, y in zip(lhs, rhs)):
                        issues.append(
                            f"graded commutativity fails on ({a.basis[i][p]}, {a.basis[j][r]})"
                        )
    for i in range(1, q + 1):
        for j in range(1, q + 1 - i):
            for k in range(1, q + 1 - i - j):
                for p in range(a.dim(i)):
                    for r in range(a.dim(j)):
                        for s in range(a.dim(k)):
                            left = _basis_mul(a, i, p, j, r)
                            lhs = a.product(i + j, left, k, _unit(a, k, s))
                            right = _basis_mul(a, j, r, k, s)
                            rhs = a.product(i, _unit(a, i, p), j + k, right)
                            if not ex.matrix_equal(lhs, rhs):
                                issues.append(
                                    "associativity fails on ("
                                    f"{a.basis[i][p]}, {a.basis[j][r]}, {a.basis[k][s]})"
                                )
    for i in range(1, q):
        for j in range(1, q - i):
            sign = -1 if i % 2 else 1
            for p in range(a.dim(i)):
                for r in range(a.dim(j)):
                    x, y = _unit(a, i, p), _unit(a, j, r)
                    lhs = a.differential(i + j, a.product(i, x, j, y))
                    rhs = a.product(i + 1, a.differential(i, x), j, y) + sign * a.product(
                        i, x, j + 1, a.differential(j, y)
                    )
                    if not ex.matrix_equal(lhs, rhs):
                        issues.append(
                            f"Leibniz rule fails on ({a.basis[i][p]}, {a.basis[j][r]})"
                        )
    for i in range(q - 1):
        dd = a.d[i + 1] @ a.d[i]
        for col in range(dd.shape[1]):
            if any(dd[:, col]):
                issues.append(f"d^2 != 0 on {a.basis[i][col]}")
    return issues


def _unit(a: Cdga, i: int, k: int) -> np.ndarray:
    v = a.zero(i)
    v[k] = ex.to_scalar(1, a.field)
    return v


def _basis_mul(a: Cdga, i, p, j, r) -> np.ndarray:
    return np.array(a.mul[(i, j)][p, r], dtype=object)


@dataclass(frozen=True, eq=False)
class CdgaMorphism:
    """``maps[i]`` has shape ``(dim target^i, dim source^i)``."""

    source: Cdga
    target: Cdga
    maps: tuple[np.ndarray, ...]
    name: str = ""

    @property
    def max_degree(self) -> int:
        return min(self.source.max_degree, self.target.max_degree, len(self.maps) - 1)

    def validate(self) -> list[str]:
        issues = []
        s, t = self.source, self.target
        q = self.max_degree
        for i in range(q + 1):
            if self.maps[i].shape != (t.dim(i), s.dim(i)):
                issues.append(f"degree {i} map has shape {self.maps[i].shape}")
                return issues
        if s.dim(0) == 1 and t.dim(0) == 1 and self.maps[0][0, 0] != 1:
            issues.append("unit is not sent to unit")
        for i in range(q):
            lhs = self.maps[i + 1] @ s.d[i]
            rhs = t.d[i] @ self.maps[i]
            if not ex.matrix_equal(lhs, rhs):
                issues.append(f"does not commute with d in degree {i}")
        for i in range(1, q + 1):
            for j in range(1, q + 1 - i):
                for p in range(s.dim(i)):
                    for r in range(s.dim(j)):
                        lhs = self.maps[i + j] @ _basis_mul(s, i, p, j, r)
                        rhs = t.product(
                            i, self.maps[i][:, p], j, self.maps[j][:, r]
                        )
                        if not ex.matrix_equal(lhs, rhs):
                            issues.append(
                                f"product not preserved on ({s.basis[i][p]}, {s.basis[j][r]})"
                            )
        return issues


def identity_morphism(a: Cdga) -> CdgaMorphism:
    return CdgaMorphism(
        a, a, tuple(ex.identity(a.dim(i), a.field) for i in range(a.max_degree + 1)), "id"
    )


def induced_rank(phi: CdgaMorphism, i: int) -> tuple[int, int, int, bool]:
    """``(dim H^i(source), dim H^i(target), rank H^i(phi), truncated)``."""
    hs = cohomology(phi.source, i)
    ht = cohomology(phi.target, i)
    bt = _coboundaries(phi.target, i)
    imgs = [phi.maps[i] @ v for v in hs.representatives]
    stacked = np.concatenate([bt, _mat_from_columns(imgs, phi.target.dim(i), phi.target.field)], axis=1)
    base = ex.rank(bt) if bt.size else 0
    r = (ex.rank(stacked) if stacked.size else 0) - base
    return hs.dim, ht.dim, r, hs.truncated or ht.truncated


@dataclass(frozen=True)
class Connectivity:
    holds: bool
    q: int
    level: str
    truncated: bool
    details: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


def morphism_connectivity(phi: CdgaMorphism, q: int, level: str = "cohomology") -> Connectivity:
    """Whether ``phi`` is ``q``-connected: bijective through degree ``q``, injective in ``q + 1``.

    ``level="cohomology"`` tests ``H^*(phi)`` (a ``q``-equivalence);
    ``level="cochain"`` tests the underlying graded linear map.
    """
    if q + 1 > phi.max_degree:
        raise ValueError(f"truncation {phi.max_degree} too small to decide {q}-connectivity")
    details = []
    ok = True
    truncated = False
    for i in range(q + 2):
        if level == "cohomology":
            hs, ht, r, tr = induced_rank(phi, i)
            truncated = truncated or tr
        elif level == "cochain":
            hs, ht = phi.source.dim(i), phi.target.dim(i)
            r = ex.rank(phi.maps[i]) if phi.maps[i].size else 0
        else:
            raise ValueError(f"unknown level {level!r}")
        inj = r == hs
        bij = inj and r == ht
        good = bij if i <= q else inj
        details.append(
            f"degree {i}: source {hs}, target {ht}, rank {r}"
            + (" (truncated)" if level == "cohomology" and i == phi.max_degree else "")
        )
        ok = ok and good
    return Connectivity(ok, q, level, truncated, tuple(details))


@dataclass(frozen=True)
class HirschData:
    """New degree-1 generators and ``tau``: a ``(dim base A^2, #generators)`` matrix."""

    generators: tuple[str, ...]
    tau: np.ndarray

    @classmethod
    def from_terms(cls, base: Cdga, terms: Mapping[str, Mapping[str, object]]) -> "HirschData":
        gens = tuple(terms)
        cols = [base.vec(2, terms[g]) for g in gens]
        return cls(gens, _mat_from_columns(cols, base.dim(2), base.field))


def hirsch_extend(base: Cdga, h: HirschData, name: str = "") -> Cdga:
    """``base (x)_tau Lambda(U)`` truncated at ``base.max_degree``.

    The degree-``n`` basis is ordered by the number of new generators:
    base elements first, then base ``(n-1)`` times one generator, and so on,
    each block lexicographic in (base index, generator subset).
    """
    q = base.max_degree
    if q < 2:
        raise ValueError("base must reach degree 2")
    m = len(h.generators)
    tau = np.asarray(h.tau, dtype=object)
    if tau.shape != (base.dim(2), m):
        raise ValueError(f"tau must have shape {(base.dim(2), m)}")
    if q >= 3:
        dt = base.d[2] @ tau
        for col in range(m):
            if any(dt[:, col]):
                raise ValueError(f"tau({h.generators[col]}) is not a cocycle")
    elif not base.has_zero_differential():
        # d on the top degree is not recorded, so the cocycle condition is taken on trust
        pass
    clash = set(h.generators) & {n for b in base.basis for n in b}
    if clash:
        raise ValueError(f"generator names clash with base: {sorted(clash)}")

    labels: list[list[tuple[int, int, tuple[int, ...]]]] = []
    names: list[list[str]] = []
    for n in range(q + 1):
        lab, nm = [], []
        for s in range(0, min(n, m) + 1):
            for k in range(base.dim(n - s)):
                for subset in combinations(range(m), s):
                    lab.append((n - s, k, subset))
                    parts = [] if (n - s == 0) else [base.basis[n - s][k]]
                    parts += [h.generators[u] for u in subset]
                    nm.append("*".join(parts) if parts else base.basis[0][0])
        labels.append(lab)
        names.append(nm)
    where = [{lab: i for i, lab in enumerate(labels[n])} for n in range(q + 1)]

    zero = ex.to_scalar(0, base.field)
    mul = {}
    for i in range(q + 1):
        for j in range(q + 1 - i):
            t = np.empty((len(labels[i]), len(labels[j]), len(labels[i + j])), dtype=object)
            t.fill(zero)
            for p, (bi, x, sx) in enumerate(labels[i]):
                for r, (bj, y, sy) in enumerate(labels[j]):
                    if set(sx) & set(sy):
                        continue
                    sign = _merge_sign(sx, sy) * (-1 if (len(sx) * bj) % 2 else 1)
                    merged = tuple(sorted(sx + sy))
                    xy = base.mul[(bi, bj)][x, y]
                    for z, coef in enumerate(xy):
                        if coef:
                            t[p, r, where[i + j][(bi + bj, z, merged)]] = sign * coef
            mul[(i, j)] = t

    d = []
    for n in range(q):
        mat = ex.zeros(len(labels[n + 1]), len(labels[n]), base.field)
        for col, (p, x, sx) in enumerate(labels[n]):
            if p < q:
                dx = base.d[p][:, x]
                for z, coef in enumerate(dx):
                    if coef:
                        mat[where[n + 1][(p + 1, z, sx)], col] += coef
            xsign = -1 if p % 2 else 1
            for t_idx, u in enumerate(sx):
                rest = sx[:t_idx] + sx[t_idx + 1 :]
                sign = xsign * (-1 if t_idx % 2 else 1)
                xt = base.product(p, _unit(base, p, x), 2, tau[:, u])
                for z, coef in enumerate(xt):
                    if coef:
                        mat[where[n + 1][(p + 2, z, rest)], col] += sign * coef
        d.append(mat)
    return Cdga(tuple(tuple(n) for n in names), mul, tuple(d), base.field, name)


def _merge_sign(s: tuple[int, ...], t: tuple[int, ...]) -> int:
    inversions = sum(1 for a in s for b in t if a > b)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True, eq=False)
class FlatConnection:
    """``omega = sum_j a_j (x) sum_k coeffs[j, k] g_k``; flatness is not assumed."""

    cdga: Cdga
    lie: LieAlgebra
    coeffs: np.ndarray

    @classmethod
    def zero(cls, a: Cdga, lie: LieAlgebra) -> "FlatConnection":
        return cls(a, lie, ex.zeros(a.dim(1), lie.dim, a.field))

    @classmethod
    def from_terms(cls, a: Cdga, lie: LieAlgebra, terms: Mapping[str, Mapping[str, object]]):
        """``{"a": {"e": 1}, "b": {"f": 1}}`` means ``a (x) e + b (x) f``."""
        c = ex.zeros(a.dim(1), lie.dim, a.field)
        for x, gv in terms.items():
            j = a.basis[1].index(x)
            for y, s in gv.items():
                c[j, lie.basis.index(y)] = c[j, lie.basis.index(y)] + ex.to_scalar(s, a.field)
        return cls(a, lie, c)

    @classmethod
    def rank_one(cls, a: Cdga, lie: LieAlgebra, eta, g) -> "FlatConnection":
        eta = np.asarray(eta, dtype=object)
        g = np.asarray(g, dtype=object)
        return cls(a, lie, np.outer(eta, g).astype(object))

    def is_zero(self) -> bool:
        return all(not x for x in self.coeffs.flat)

    def g_component(self, j: int) -> np.ndarray:
        return np.array(self.coeffs[j, :], dtype=object)


def mc_residual(a: Cdga, lie: LieAlgebra, coeffs) -> np.ndarray:
    """Coefficients of ``d omega + 1/2 [omega, omega]`` as a ``(dim A^2, dim g)`` array."""
    coeffs = np.asarray(coeffs, dtype=object)
    n1, n2, ng = a.dim(1), a.dim(2), lie.dim
    out = np.empty((n2, ng), dtype=object)
    out.fill(ex.to_scalar(0, a.field))
    if a.max_degree < 2:
        return out
    d1 = a.d[1]
    for k in range(n2):
        for j in range(n1):
            if d1[k, j]:
                for m in range(ng):
                    out[k, m] = out[k, m] + d1[k, j] * coeffs[j, m]
    half = Fraction(1, 2)
    mu = a.mul[(1, 1)]
    for j in range(n1):
        for l in range(j + 1, n1):
            w = [(k, mu[j, l, k] - mu[l, j, k]) for k in range(n2)]
            w = [(k, s) for k, s in w if s]
            if not w:
                continue
            br = lie.bracket(coeffs[j], coeffs[l])
            for m in range(ng):
                if not _nonzero(br[m]):
                    continue
                for k, s in w:
                    out[k, m] = out[k, m] + (half * s) * br[m]
        if any(mu[j, j, k] for k in range(n2)):
            br = lie.bracket(coeffs[j], coeffs[j])
            for k in range(n2):
                if mu[j, j, k]:
                    for m in range(ng):
                        out[k, m] = out[k, m] + (half * mu[j, j, k]) * br[m]
    return out


def _nonzero(x) -> bool:
    return bool(x)


def is_flat(omega: FlatConnection) -> bool:
    return all(not x for x in mc_residual(omega.cdga, omega.lie, omega.coeffs).flat)


def _check_lie(theta: LieRep, omega: FlatConnection) -> None:
    a, b = theta.lie, omega.lie
    if a is b:
        return
    if a.basis != b.basis or not ex.matrix_equal(a.c.reshape(-1, 1), b.c.reshape(-1, 1)):
        raise ValueError("representation and connection use different Lie algebras")


def aomoto(a: Cdga, theta: LieRep, omega: FlatConnection) -> list[np.ndarray]:
    """Matrices of ``d_omega`` on ``A^i (x) V`` for ``i < max_degree``.

    ``d_omega(x (x) v) = dx (x) v + sum_j a_j x (x) theta(g_j) v`` with the
    connection multiplied on the left.  Row/column index ``b * dim V + v``.
    """
    _check_lie(theta, omega)
    nv = theta.dim_v
    thetas = [theta.of(omega.coeffs[j]) for j in range(a.dim(1))]
    out = []
    for i in range(a.max_degree):
        mat = ex.zeros(a.dim(i + 1) * nv, a.dim(i) * nv, a.field)
        di = a.d[i]
        for k in range(a.dim(i + 1)):
            for b in range(a.dim(i)):
                if di[k, b]:
                    for v in range(nv):
                        mat[k * nv + v, b * nv + v] += di[k, b]
        mu = a.mul[(1, i)]
        for j in range(a.dim(1)):
            th = thetas[j]
            if not any(th.flat):
                continue
            for b in range(a.dim(i)):
                for k in range(a.dim(i + 1)):
                    s = mu[j, b, k]
                    if s:
                        mat[k * nv : (k + 1) * nv, b * nv : (b + 1) * nv] += s * th
        out.append(mat)
    return out


def aomoto_cohomology(
    a: Cdga, theta: LieRep, omega: FlatConnection, i: int, check_flat: bool = True
) -> tuple[int, bool]:
    """``(dim H^i(A (x) V, d_omega), truncated)``; top degree gives an upper bound."""
    if not 0 <= i <= a.max_degree:
        raise ValueError(f"degree {i} outside 0..{a.max_degree}")
    if check_flat and not is_flat(omega):
        raise ValueError("connection is not flat")
    mats = aomoto(a, theta, omega)
    nv = theta.dim_v
    dim = a.dim(i) * nv
    out_rank = ex.rank(mats[i]) if i < a.max_degree and mats[i].size else 0
    in_rank = ex.rank(mats[i - 1]) if i >= 1 and mats[i - 1].size else 0
    return dim - out_rank - in_rank, i == a.max_degree


def resonance_membership(
    a: Cdga, theta: LieRep, omega: FlatConnection, i: int, r: int
) -> bool:
    """``dim H^i(A (x) V, d_omega) >= r`` by exact ranks."""
    h, _ = aomoto_cohomology(a, theta, omega, i)
    return h >= r


def scalar_resonance_dim(a: Cdga, eta, i: int) -> int:
    """``dim H^i(A, d + eta)`` for a closed ``eta in A^1`` (rank-one trivial coefficients)."""
    lie = preset_lie("abelian(1)", a.field)
    omega = FlatConnection.rank_one(a, lie, eta, [ex.to_scalar(1, a.field)])
    return aomoto_cohomology(a, character(lie, [1]), omega, i)[0]


def rank_one_locus_membership(a: Cdga, omega: FlatConnection):
    """``(eta, g)`` with ``omega = eta (x) g`` and ``d eta = 0``, else ``None``."""
    c = omega.coeffs
    zero_eta, zero_g = a.zero(1), omega.lie.zero_vector()
    rows = [j for j in range(c.shape[0]) if any(c[j])]
    if not rows:
        return zero_eta, zero_g
    g = np.array(c[rows[0]], dtype=object)
    m0 = next(m for m in range(len(g)) if g[m])
    eta = np.array([c[j, m0] / g[m0] for j in range(c.shape[0])], dtype=object)
    if not ex.matrix_equal(np.outer(eta, g), c):
        return None
    if a.max_degree >= 2 and any(a.d[1] @ eta):
        return None
    return eta, g


def pi_locus_membership(a: Cdga, theta: LieRep, omega: FlatConnection) -> bool:
    fac = rank_one_locus_membership(a, omega)
    if fac is None:
        return False
    return ex.det(theta.of(fac[1])) == 0


@dataclass(frozen=True)
class ResonanceDecision:
    member: bool
    method: str
    detail: str = ""

    def __bool__(self) -> bool:
        return self.member


def rank_one_resonance_test(
    a: Cdga, theta: LieRep, eta, g, i: int
) -> ResonanceDecision:
    """Whether ``eta (x) g`` lies in ``R^i_1(A, theta)`` without computing eigenvalues.

    For ``d = 0`` the answer is: ``theta(g)`` singular and ``b_i >= 1``, or
    ``theta(g)`` not nilpotent and ``eta in R^i_1(A)``.  For ``d != 0`` the
    criterion is unavailable and the Aomoto complex is ranked directly;
    ``method`` says which route was taken.
    """
    eta = np.asarray(eta, dtype=object)
    g = np.asarray(g, dtype=object)
    if a.max_degree >= 2 and any(a.d[1] @ eta):
        raise ValueError("eta is not closed")
    if not a.has_zero_differential():
        omega = FlatConnection.rank_one(a, theta.lie, eta, g)
        h, _ = aomoto_cohomology(a, theta, omega, i)
        return ResonanceDecision(h >= 1, "direct", "nonzero differential: eigenvalue-free test undecidable")
    nil, sing = ex.nilpotency_and_singularity(theta.of(g))
    if sing and cohomology_dim(a, i) >= 1:
        return ResonanceDecision(True, "eigenvalue-free", "theta(g) singular")
    if not nil and scalar_resonance_dim(a, eta, i) >= 1:
        return ResonanceDecision(True, "eigenvalue-free", "eta resonant, theta(g) not nilpotent")
    return ResonanceDecision(False, "eigenvalue-free")


def pullback_connection(phi: CdgaMorphism, omega_src: FlatConnection) -> FlatConnection:
    """``(phi (x) id) omega`` on the target of ``phi``."""
    if omega_src.cdga is not phi.source:
        if omega_src.cdga.basis != phi.source.basis:
            raise ValueError("connection does not live on the morphism's source")
    m = phi.maps[1]
    c = omega_src.coeffs
    out = np.empty((m.shape[0], c.shape[1]), dtype=object)
    for k in range(m.shape[0]):
        for col in range(c.shape[1]):
            acc = ex.to_scalar(0, phi.target.field)
            for j in range(m.shape[1]):
                if m[k, j] and _nonzero(c[j, col]):
                    acc = acc + m[k, j] * c[j, col]
            out[k, col] = acc
    return FlatConnection(phi.target, omega_src.lie, out)


def exterior(names: Sequence[str], max_degree: int = 2, field: str = "rational", name: str = "") -> Cdga:
    """Exterior algebra on degree-one generators, zero differential."""
    names = list(names)
    basis = [["1"]]
    for n in range(1, max_degree + 1):
        basis.append(["*".join(names[i] for i in s) for s in combinations(range(len(names)), n)])
    where = {}
    for n in range(1, max_degree + 1):
        for s in combinations(range(len(names)), n):
            where[s] = "*".join(names[i] for i in s)
    products = {}
    for n1 in range(1, max_degree + 1):
        for n2 in range(1, max_degree + 1 - n1):
            for s in combinations(range(len(names)), n1):
                for t in combinations(range(len(names)), n2):
                    if set(s) & set(t):
                        continue
                    products[(where[s], where[t])] = {
                        where[tuple(sorted(s + t))]: _merge_sign(s, t)
                    }
    return Cdga.build(basis, products, {}, field, name or f"exterior({','.join(names)})", symmetrize=False)


def heisenberg(field: str = "rational") -> Cdga:
    """``Lambda(a, b, p)`` with ``dp = ab``, truncated at degree 2."""
    base = exterior(["a", "b"], 2, field)
    return hirsch_extend(base, HirschData.from_terms(base, {"p": {"a*b": 1}}), "heisenberg")


def surface(genus: int, field: str = "rational") -> Cdga:
    """Cohomology ring of a closed orientable surface: ``a_i b_i = w``."""
    a1 = []
    products = {}
    for i in range(1, genus + 1):
        a1 += [f"a{i}", f"b{i}"]
        products[(f"a{i}", f"b{i}")] = {"w": 1}
    return Cdga.build([["1"], a1, ["w"]], products, {}, field, f"surface({genus})")


def wedge_of_circles(n: int, field: str = "rational") -> Cdga:
    return Cdga.build([["1"], [f"x{i + 1}" for i in range(n)], []], {}, {}, field, f"wedge({n})")


def punctured_sphere(k: int, field: str = "rational") -> Cdga:
    """``H^*`` of the sphere minus ``k`` points: ``k - 1`` classes, zero products."""
    return Cdga.build(
        [["1"], [f"c{i + 1}" for i in range(k - 1)], []], {}, {}, field, f"sphere-minus-{k}"
    )


def chevalley_eilenberg(lie: LieAlgebra, max_degree: int = 2) -> Cdga:
    """Cochains on ``lie``: the exterior algebra on the dual basis with ``d x = -x o [,]``."""
    ext = exterior(list(lie.basis), max_degree, lie.field)
    d = {}
    for k, xk in enumerate(lie.basis):
        terms = {}
        for i, j in combinations(range(lie.dim), 2):
            s = lie.c[i, j, k]
            if s:
                terms[f"{lie.basis[i]}*{lie.basis[j]}"] = -s
        if terms:
            d[xk] = terms
    if max_degree > 2:
        raise ValueError("Chevalley-Eilenberg cochains are built through degree 2 only")
    products = {}
    for (i, j), t in ext.mul.items():
        for p in range(t.shape[0]):
            for r in range(t.shape[1]):
                out = {ext.basis[i + j][z]: s for z, s in enumerate(t[p, r]) if s}
                if out and i and j:
                    products[(ext.basis[i][p], ext.basis[j][r])] = out
    return Cdga.build(ext.basis, products, d, lie.field, f"CE({lie.name})", symmetrize=False)
