"""Finite-dimensional Lie algebras over exact fields and their representations."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import exact as ex

__all__ = [
    "LieAlgebra",
    "LieRep",
    "preset_lie",
    "adjoint",
    "standard",
    "trivial_rep",
    "character",
    "classify_sl2_subalgebra",
    "lcs_free_lie",
]


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure constants ``c[i, j, k]``: ``[b_i, b_j] = sum_k c[i, j, k] b_k``."""

    basis: tuple[str, ...]
    c: np.ndarray
    field: str = "rational"
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_brackets(cls, basis, brackets, field="rational", name=""):
        """``brackets`` maps ``(x, y)`` name pairs to ``{z: scalar}``; antisymmetry is filled in."""
        basis = tuple(basis)
        n = len(basis)
        zero = ex.to_scalar(0, field)
        c = np.empty((n, n, n), dtype=object)
        c.fill(zero)
        idx = {b: i for i, b in enumerate(basis)}
        given = set()
        for (x, y), out in brackets.items():
            i, j = idx[x], idx[y]
            given.add((i, j))
            for z, s in out.items():
                c[i, j, idx[z]] = ex.to_scalar(s, field)
        for i, j in list(given):
            if (j, i) not in given:
                c[j, i, :] = -c[i, j, :]
        return cls(basis, c, field, name)

    def zero_vector(self) -> np.ndarray:
        return ex.vector([0] * self.dim, self.field)

    def unit(self, name: str) -> np.ndarray:
        v = self.zero_vector()
        v[self.basis.index(name)] = ex.to_scalar(1, self.field)
        return v

    def vec(self, coords) -> np.ndarray:
        """Vector from a coordinate list or a ``{name: scalar}`` mapping."""
        if isinstance(coords, dict):
            v = self.zero_vector()
            for k, s in coords.items():
                v[self.basis.index(k)] = ex.to_scalar(s, self.field)
            return v
        return ex.vector(coords, self.field)

    def bracket(self, x, y) -> np.ndarray:
        """Bracket of coordinate vectors; entries may lie in any commutative ring."""
        x = np.asarray(x, dtype=object)
        y = np.asarray(y, dtype=object)
        out = np.empty(self.dim, dtype=object)
        for k in range(self.dim):
            acc = 0
            for i in range(self.dim):
                if not _nz(x[i]):
                    continue
                for j in range(self.dim):
                    cijk = self.c[i, j, k]
                    if cijk and _nz(y[j]):
                        acc = acc + cijk * (x[i] * y[j])
            out[k] = acc
        return out

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad(x)`` acting on coordinate columns."""
        x = np.asarray(x, dtype=object)
        m = ex.zeros(self.dim, self.dim, self.field)
        for j in range(self.dim):
            for k in range(self.dim):
                m[k, j] = sum((x[i] * self.c[i, j, k] for i in range(self.dim)), m[k, j])
        return m

    def is_abelian(self) -> bool:
        return all(not s for s in self.c.flat)

    def validate(self) -> list[str]:
        """Antisymmetry and Jacobi violations over all basis pairs and triples."""
        issues = []
        n = self.dim
        for i in range(n):
            for j in range(n):
                if any(self.c[i, j, k] + self.c[j, i, k] for k in range(n)):
                    issues.append(f"antisymmetry fails on ({self.basis[i]}, {self.basis[j]})")
        units = [self.unit(b) for b in self.basis]
        for i, j, k in combinations(range(n), 3):
            x, y, z = units[i], units[j], units[k]
            s = (
                self.bracket(x, self.bracket(y, z))
                + self.bracket(y, self.bracket(z, x))
                + self.bracket(z, self.bracket(x, y))
            )
            if any(s):
                issues.append(
                    f"Jacobi fails on ({self.basis[i]}, {self.basis[j]}, {self.basis[k]})"
                )
        return issues


def _nz(x) -> bool:
    return bool(x)


@dataclass(frozen=True, eq=False)
class LieRep:
    """Representation ``theta``: one ``dim_v x dim_v`` matrix per basis element."""

    lie: LieAlgebra
    matrices: tuple[np.ndarray, ...]
    name: str = ""

    @property
    def dim_v(self) -> int:
        return self.matrices[0].shape[0] if self.matrices else 0

    def of(self, x) -> np.ndarray:
        """``theta(x)`` for a coordinate vector ``x``."""
        x = np.asarray(x, dtype=object)
        out = ex.zeros(self.dim_v, self.dim_v, self.lie.field)
        for i, m in enumerate(self.matrices):
            if x[i]:
                out = out + x[i] * m
        return out

    def validate(self) -> list[str]:
        issues = []
        lie = self.lie
        if len(self.matrices) != lie.dim:
            return [f"expected {lie.dim} matrices, got {len(self.matrices)}"]
        for i in range(lie.dim):
            for j in range(i + 1, lie.dim):
                lhs = self.of(lie.c[i, j, :])
                a, b = self.matrices[i], self.matrices[j]
                if not ex.matrix_equal(lhs, a @ b - b @ a):
                    issues.append(
                        f"theta([{lie.basis[i]},{lie.basis[j]}]) != [theta, theta]"
                    )
        return issues


def _sl2(field="rational") -> LieAlgebra:
    return LieAlgebra.from_brackets(
        ("h", "e", "f"),
        {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
        field,
        "sl2",
    )


def _borel2(field="rational") -> LieAlgebra:
    return LieAlgebra.from_brackets(("h", "e"), {("h", "e"): {"e": 2}}, field, "borel2")


def _abelian(n: int, field="rational") -> LieAlgebra:
    basis = tuple(f"x{i + 1}" for i in range(n))
    return LieAlgebra.from_brackets(basis, {}, field, f"abelian({n})")


def preset_lie(name: str, field: str = "rational") -> LieAlgebra:
    """``"sl2"``, ``"borel2"`` or ``"abelian(n)"``."""
    name = name.strip()
    if name == "sl2":
        return _sl2(field)
    if name == "borel2":
        return _borel2(field)
    if name.startswith("abelian(") and name.endswith(")"):
        return _abelian(int(name[8:-1]), field)
    raise ValueError(f"unknown Lie algebra preset {name!r}")


def adjoint(lie: LieAlgebra) -> LieRep:
    return LieRep(lie, tuple(lie.ad(lie.unit(b)) for b in lie.basis), "adjoint")


_STANDARD = {
    "h": [[1, 0], [0, -1]],
    "e": [[0, 1], [0, 0]],
    "f": [[0, 0], [1, 0]],
}


def standard(lie: LieAlgebra) -> LieRep:
    """Defining 2-dimensional representation of sl2 or of its Borel subalgebra."""
    if lie.name not in ("sl2", "borel2"):
        raise ValueError("standard representation is defined for sl2 and borel2")
    return LieRep(lie, tuple(ex.matrix(_STANDARD[b], lie.field) for b in lie.basis), "standard")


def trivial_rep(lie: LieAlgebra, dim_v: int = 1) -> LieRep:
    return LieRep(lie, tuple(ex.zeros(dim_v, dim_v, lie.field) for _ in lie.basis), "trivial")


def character(lie: LieAlgebra, values: Sequence) -> LieRep:
    """Rank-one representation of an abelian Lie algebra: ``x_i -> values[i]``."""
    if not lie.is_abelian():
        raise ValueError("characters need an abelian Lie algebra")
    return LieRep(
        lie, tuple(ex.matrix([[v]], lie.field) for v in values), "character"
    )


def classify_sl2_subalgebra(vectors: Sequence) -> str:
    """``"abelian"``, ``"borel"`` or ``"full"`` for a subalgebra of sl2 in (h, e, f) coordinates.

    A proper non-abelian subalgebra of sl2 is conjugate to the Borel subalgebra,
    so the answer depends only on dimension and commutativity.
    """
    sl2 = _sl2("gaussian" if _any_gaussian(vectors) else "rational")
    vs = [sl2.vec(list(v)) for v in vectors]
    if not vs:
        return "abelian"
    span = ex.matrix([list(v) for v in vs], sl2.field).T
    if ex.rank(span) != len(vs):
        raise ValueError("vectors are linearly dependent")
    commuting = True
    for x, y in combinations(vs, 2):
        b = sl2.bracket(x, y)
        if any(b):
            commuting = False
        if ex.solve(span, b) is None:
            raise ValueError("span is not closed under the bracket")
    if len(vs) == 3:
        return "full"
    return "abelian" if commuting else "borel"


def _any_gaussian(vectors) -> bool:
    return any(isinstance(x, ex.Gaussian) for v in vectors for x in v)


def lcs_free_lie(n_generators: int, k: int, field: str = "rational") -> LieAlgebra:
    """Free Lie algebra on ``n`` generators modulo the ``k``-th lower central series term.

    ``k = 2`` gives the abelian quotient; ``k = 3`` the free 2-step nilpotent
    algebra with Hall basis ``x_i`` and ``[x_i, x_j]`` for ``i < j``.
    """
    if k not in (2, 3):
        raise ValueError("only k in {2, 3} is supported")
    gens = [f"x{i + 1}" for i in range(n_generators)]
    if k == 2:
        return LieAlgebra.from_brackets(gens, {}, field, f"free({n_generators})/G2")
    comms = {(a, b): f"[{a},{b}]" for a, b in combinations(gens, 2)}
    basis = gens + list(comms.values())
    brackets = {pair: {name: 1} for pair, name in comms.items()}
    return LieAlgebra.from_brackets(basis, brackets, field, f"free({n_generators})/G3")


def heisenberg_lie(field: str = "rational") -> LieAlgebra:
    """Three-dimensional Heisenberg algebra ``[x, y] = z``."""
    return lcs_free_lie(2, 3, field)


