"""Finitely presented groups, their representations and twisted cohomology.

Words are tuples of signed generator indices: ``+(j + 1)`` for ``x_j`` and
``-(j + 1)`` for its inverse.  In text form a lowercase-initial name is a
generator and the same name with the first letter capitalized is its inverse,
so ``["x", "y", "X", "Y"]`` is the commutator ``x y x^-1 y^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Mapping, Sequence

import numpy as np

from . import exact as ex

__all__ = [
    "GroupPresentation",
    "Representation",
    "TwistedComplex",
    "free_reduce",
    "fox_jacobian",
    "twisted_h",
    "twisted_betti",
    "cv_membership",
    "rep_variety_system",
    "pullback_rep",
    "abelianization",
    "rank_one_rep",
]


def free_reduce(word: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for s in word:
        if s == 0:
            raise ValueError("letter index 0 is not allowed")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def _invert_name(name: str) -> str:
    return name[0].swapcase() + name[1:]


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        for g in self.generators:
            if not g or not g[0].islower():
                raise ValueError(f"generator {g!r} must start with a lowercase letter")
        m = len(self.generators)
        rels = []
        for r in self.relators:
            for s in r:
                if not 0 < abs(s) <= m:
                    raise ValueError(f"letter {s} out of range for {m} generators")
            rels.append(free_reduce(r))
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def r(self) -> int:
        return len(self.relators)

    def parse_word(self, letters: Sequence[str]) -> tuple[int, ...]:
        idx = {g: i + 1 for i, g in enumerate(self.generators)}
        inv = {_invert_name(g): -(i + 1) for i, g in enumerate(self.generators)}
        out = []
        for a in letters:
            if a in idx:
                out.append(idx[a])
            elif a in inv:
                out.append(inv[a])
            else:
                raise ValueError(f"unknown letter {a!r}")
        return tuple(out)

    def format_word(self, word: Sequence[int]) -> list[str]:
        return [
            self.generators[s - 1] if s > 0 else _invert_name(self.generators[-s - 1])
            for s in word
        ]

    @classmethod
    def from_words(cls, generators: Sequence[str], relators: Sequence[Sequence[str]]):
        shell = cls(tuple(generators), ())
        return cls(tuple(generators), tuple(shell.parse_word(r) for r in relators))

    @classmethod
    def free(cls, n: int, prefix: str = "x"):
        names = ("x", "y") if n == 2 and prefix == "x" else tuple(f"{prefix}{i + 1}" for i in range(n))
        return cls(names, ())

    @classmethod
    def free_abelian(cls, n: int):
        names = tuple(f"x{i + 1}" for i in range(n)) if n != 2 else ("x", "y")
        rels = [(i + 1, j + 1, -(i + 1), -(j + 1)) for i in range(n) for j in range(i + 1, n)]
        return cls(names, tuple(rels))


@dataclass(frozen=True, eq=False)
class Representation:
    """Matrices for the generators; invertibility and relators are checked on construction."""

    presentation: GroupPresentation
    matrices: tuple[np.ndarray, ...]
    field: str = "rational"

    def __post_init__(self):
        p = self.presentation
        if len(self.matrices) != p.m:
            raise ValueError(f"expected {p.m} matrices, got {len(self.matrices)}")
        mats = tuple(np.asarray(a, dtype=object) for a in self.matrices)
        n = mats[0].shape[0] if mats else 0
        for g, a in zip(p.generators, mats):
            if a.shape != (n, n):
                raise ValueError(f"matrix for {g} has shape {a.shape}, expected {(n, n)}")
            if not ex.det(a):
                raise ValueError(f"matrix for {g} is not invertible")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "_inverses", tuple(ex.inverse(a) for a in mats))
        object.__setattr__(self, "_dim", n)
        for r in p.relators:
            if not ex.matrix_equal(self.word(r), ex.identity(n, self.field)):
                raise ValueError(f"relator {''.join(p.format_word(r))} is not sent to the identity")

    @property
    def dim_v(self) -> int:
        return self._dim

    def letter(self, s: int) -> np.ndarray:
        return self.matrices[s - 1] if s > 0 else self._inverses[-s - 1]

    def word(self, w: Sequence[int]) -> np.ndarray:
        out = ex.identity(self.dim_v, self.field)
        for s in w:
            out = out @ self.letter(s)
        return out

    @classmethod
    def trivial(cls, p: GroupPresentation, dim_v: int = 1, field: str = "rational"):
        return cls(p, tuple(ex.identity(dim_v, field) for _ in p.generators), field)


def rank_one_rep(p: GroupPresentation, values: Sequence, field: str = "rational") -> Representation:
    """Character sending generator ``j`` to the scalar ``values[j]``."""
    return Representation(p, tuple(ex.matrix([[v]], field) for v in values), field)


@dataclass(frozen=True, eq=False)
class TwistedComplex:
    """Cochains ``V -> V^m -> V^r`` of the presentation 2-complex with coefficients in ``rho``."""

    d0: np.ndarray
    d1: np.ndarray
    dim_v: int
    m: int
    r: int


def _fox_blocks(rho: Representation, word: Sequence[int]) -> list[np.ndarray]:
    n = rho.dim_v
    blocks = [ex.zeros(n, n, rho.field) for _ in range(rho.presentation.m)]
    prefix = ex.identity(n, rho.field)
    for s in word:
        j = abs(s) - 1
        if s > 0:
            blocks[j] = blocks[j] + prefix
        else:
            blocks[j] = blocks[j] - prefix @ rho.letter(s)
        prefix = prefix @ rho.letter(s)
    return blocks


def fox_jacobian(p: GroupPresentation, rho: Representation) -> TwistedComplex:
    if rho.presentation != p:
        raise ValueError("representation belongs to a different presentation")
    n, m, r = rho.dim_v, p.m, p.r
    eye = ex.identity(n, rho.field)
    d0 = ex.zeros(m * n, n, rho.field)
    for j in range(m):
        d0[j * n:(j + 1) * n, :] = rho.matrices[j] - eye
    d1 = ex.zeros(r * n, m * n, rho.field)
    for i, rel in enumerate(p.relators):
        for j, block in enumerate(_fox_blocks(rho, rel)):
            d1[i * n:(i + 1) * n, j * n:(j + 1) * n] = block
    if r and m and n:
        if any(x for x in (d1 @ d0).flat):
            raise AssertionError("Fox identity d1 d0 = 0 failed")
    return TwistedComplex(d0, d1, n, m, r)


def _rank(a: np.ndarray) -> int:
    return 0 if 0 in a.shape else ex.rank(a)


def twisted_betti(p: GroupPresentation, rho: Representation) -> tuple[int, int, int]:
    c = fox_jacobian(p, rho)
    r0, r1 = _rank(c.d0), _rank(c.d1)
    n = c.dim_v
    return n - r0, c.m * n - r1 - r0, c.r * n - r1


def twisted_h(p: GroupPresentation, rho: Representation, i: int) -> int:
    """``dim H^i`` of the presentation 2-complex with local coefficients ``rho``."""
    if i not in (0, 1, 2):
        raise ValueError("degree must be 0, 1 or 2")
    return twisted_betti(p, rho)[i]


def cv_membership(p: GroupPresentation, rho: Representation, i: int, r: int) -> bool:
    if i not in (0, 1):
        raise ValueError("membership is decided for i <= 1")
    return twisted_h(p, rho, i) >= r


def _poly_matrix_inverse_2x2(x):
    return [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]


def _poly_det(x, variables):
    n = len(x)
    if n == 1:
        return x[0][0]
    total = ex.MultiPoly.constant(variables, 0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in x[1:]]
        term = x[0][j] * _poly_det(minor, variables)
        total = total + term if j % 2 == 0 else total - term
    return total


def _poly_adjugate(x, variables):
    n = len(x)
    if n == 1:
        return [[ex.MultiPoly.constant(variables, 1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(x) if k != i]
            c = _poly_det(minor, variables)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


def _poly_matmul(a, b, variables):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ex.MultiPoly.constant(variables, 0)
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def rep_variety_system(p: GroupPresentation, target: str = "SL2", n: int | None = None,
                       field: str = "rational"):
    """Polynomial equations cutting out ``Hom(p, G)`` in the matrix entries.

    ``target`` is ``"SL2"``, ``"upper-triangular-SL2"`` or ``"GL_n"`` (with ``n``).
    Entry variables are named ``"{gen}_{row}{col}"`` (1-based); for ``GL_n`` each
    generator also gets ``"t_{gen}"`` with ``det * t = 1``.
    Returns ``(variables, equations)``.
    """
    if target in ("SL2", "upper-triangular-SL2"):
        n = 2
    elif target == "GL_n":
        if not n or n < 1:
            raise ValueError("GL_n needs a positive n")
    else:
        raise ValueError(f"unknown target group {target!r}")
    variables = []
    for g in p.generators:
        variables += [f"{g}_{i + 1}{j + 1}" for i in range(n) for j in range(n)]
        if target == "GL_n":
            variables.append(f"t_{g}")
    variables = tuple(variables)

    def v(name):
        return ex.MultiPoly.var(variables, name)

    one = ex.MultiPoly.constant(variables, ex.to_scalar(1, field))
    mats, invs, eqs = [], [], []
    for g in p.generators:
        x = [[v(f"{g}_{i + 1}{j + 1}") for j in range(n)] for i in range(n)]
        det = _poly_det(x, variables)
        if target == "GL_n":
            t = v(f"t_{g}")
            eqs.append(det * t - one)
            inv = [[t * e for e in row] for row in _poly_adjugate(x, variables)]
        else:
            eqs.append(det - one)
            inv = _poly_matrix_inverse_2x2(x)
            if target == "upper-triangular-SL2":
                eqs.append(x[1][0])
        mats.append(x)
        invs.append(inv)
    for rel in p.relators:
        acc = [[one if i == j else one * 0 for j in range(n)] for i in range(n)]
        for s in rel:
            acc = _poly_matmul(acc, mats[s - 1] if s > 0 else invs[-s - 1], variables)
        for i in range(n):
            for j in range(n):
                eqs.append(acc[i][j] - (one if i == j else 0))
    return variables, eqs


def rep_point(rho: Representation, target: str = "SL2") -> dict:
    """Coordinates of ``rho`` in the variables of :func:`rep_variety_system`."""
    point = {}
    for g, a in zip(rho.presentation.generators, rho.matrices):
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                point[f"{g}_{i + 1}{j + 1}"] = a[i, j]
        if target == "GL_n":
            point[f"t_{g}"] = 1 / ex.det(a)
    return point


def pullback_rep(source: GroupPresentation, images: Mapping[str, Sequence[str]],
                 rho_target: Representation) -> Representation:
    """``rho_target`` composed with the map sending each source generator to a target word.

    Surjectivity of the map is not checked.  Raises ``ValueError`` when some
    source relator is not killed by the composite.
    """
    tp = rho_target.presentation
    missing = [g for g in source.generators if g not in images]
    if missing:
        raise ValueError(f"no image given for generators {missing}")
    mats = tuple(rho_target.word(tp.parse_word(images[g])) for g in source.generators)
    return Representation(source, mats, rho_target.field)


def _smith_diagonal(a: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form of an integer matrix."""
    a = [row[:] for row in a]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not entries:
                return diag
            _, i, j = min(entries)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            for j in range(t + 1, cols):
                q = a[t][j] // p
                for row in a:
                    row[j] -= q * row[t]
            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
    return diag


def abelianization(p: GroupPresentation):
    """``(free_rank, torsion, projection)`` of the abelianized group.

    ``projection`` is an integer ``free_rank x m`` matrix; its rows are
    primitive vectors spanning, over the rationals, the homomorphisms to ``Z``
    (vectors orthogonal to every relator's exponent sums).
    """
    m = p.m
    expo = [[sum(1 if s == j + 1 else -1 if s == -(j + 1) else 0 for s in r) for j in range(m)]
            for r in p.relators]
    diag = _smith_diagonal(expo) if expo else []
    torsion = [d for d in diag if d > 1]
    free_rank = m - len(diag)
    proj = _integer_kernel_rows(expo, m)
    if len(proj) != free_rank:
        raise AssertionError("kernel rank disagrees with Smith form")
    return free_rank, torsion, proj


def _integer_kernel_rows(expo: list[list[int]], m: int) -> list[list[int]]:
    if not expo:
        return [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    basis = ex.kernel_basis(ex.matrix(expo))
    rows = []
    for v in basis:
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        rows.append([x // g for x in ints] if g else ints)
    return rows
