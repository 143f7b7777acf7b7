"""Central hyperplane arrangements, their Orlik-Solomon algebras and multinets.

Hyperplanes are given by normal covectors with exact entries.  The
Orlik-Solomon algebra is built through degree 2 only: ``e_a e_b`` modulo the
relations ``e_b e_c - e_a e_c + e_a e_b`` for every triple inside a rank-2
flat.  The degree-2 basis is the set of pairs that are not pivots of the
relation matrix in reduced row echelon form.

Multinet search is exhaustive over sub-arrangements and class partitions.  Two
hyperplanes whose common flat (inside the sub-arrangement) has fewer than
``k`` members cannot lie in different classes, since such a flat would have to
meet every class; those pairs are merged before partitions are enumerated.
Practical limits are about 12 hyperplanes, ``k <= 4`` and multiplicities ``<= 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import exact as ex
from .cdga import Cdga, CdgaMorphism, exterior, punctured_sphere, scalar_resonance_dim

__all__ = [
    "Arrangement",
    "Rank2Flat",
    "Multinet",
    "NotAPencilError",
    "AdmissibleModel",
    "ResonanceComponent",
    "ResonanceVerificationError",
    "boolean",
    "braid",
    "concurrent_lines",
    "b3",
    "generic",
    "rank2_flats",
    "os_algebra",
    "multinet_enumerate",
    "multinet_to_pencil",
    "admissible_morphism",
    "boolean_morphism",
    "resonance_components",
    "verify_components",
    "reduce_to_rank3",
    "is_isotropic",
    "in_span",
]


@dataclass(frozen=True, eq=False)
class Arrangement:
    normals: tuple[tuple, ...]
    labels: tuple[str, ...]
    field: str = "rational"
    name: str = ""

    def __post_init__(self):
        if len(self.labels) != len(self.normals):
            raise ValueError("one label per hyperplane required")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")
        dims = {len(v) for v in self.normals}
        if len(dims) > 1:
            raise ValueError("covectors have different lengths")
        for i, v in enumerate(self.normals):
            if not any(v):
                raise ValueError(f"hyperplane {self.labels[i]} has zero covector")
        for i, j in combinations(range(len(self.normals)), 2):
            if ex.rank(ex.matrix([self.normals[i], self.normals[j]], self.field)) < 2:
                raise ValueError(
                    f"hyperplanes {self.labels[i]} and {self.labels[j]} are proportional"
                )

    @classmethod
    def from_rows(cls, rows, labels=None, field="rational", name=""):
        norm = tuple(tuple(ex.to_scalar(x, field) for x in r) for r in rows)
        labels = tuple(labels) if labels is not None else tuple(str(i + 1) for i in range(len(norm)))
        return cls(norm, labels, field, name)

    def __len__(self) -> int:
        return len(self.normals)

    @property
    def ambient_dim(self) -> int:
        return len(self.normals[0]) if self.normals else 0

    @property
    def rank(self) -> int:
        return ex.rank(ex.matrix(self.normals, self.field)) if self.normals else 0

    def generator_names(self) -> list[str]:
        return [f"e{lab}" for lab in self.labels]

    def covector_matrix(self) -> np.ndarray:
        return ex.matrix(self.normals, self.field)


def boolean(n: int, field: str = "rational") -> Arrangement:
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return Arrangement.from_rows(rows, None, field, f"boolean({n})")


def braid(n: int = 4, field: str = "rational", essential: bool = True) -> Arrangement:
    """``x_i - x_j`` for ``i < j <= n``; ``essential`` sets ``x_n = 0``."""
    dim = n - 1 if essential else n
    rows, labels = [], []
    for i, j in combinations(range(n), 2):
        v = [0] * n
        v[i], v[j] = 1, -1
        rows.append(v[:dim])
        labels.append(f"{i + 1}{j + 1}")
    return Arrangement.from_rows(rows, labels, field, f"braid({n})")


def concurrent_lines(k: int = 3, field: str = "rational") -> Arrangement:
    """``k`` lines through the origin of the plane: ``x``, ``y``, ``x + y``, ``x + 2y`` ..."""
    rows = [[1, 0], [0, 1]] + [[1, j] for j in range(1, k - 1)]
    return Arrangement.from_rows(rows[:k], None, field, f"pencil({k})")


def b3(field: str = "rational") -> Arrangement:
    rows = [
        [1, 0, 0], [0, 1, 0], [0, 0, 1],
        [1, 1, 0], [1, -1, 0], [1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1],
    ]
    labels = ["x", "y", "z", "x+y", "x-y", "x+z", "x-z", "y+z", "y-z"]
    return Arrangement.from_rows(rows, labels, field, "B3")


def generic(n: int, dim: int = 3, field: str = "rational") -> Arrangement:
    """``n`` hyperplanes in general position (rows of a Vandermonde matrix)."""
    rows = [[(i + 1) ** p for p in range(dim)] for i in range(n)]
    return Arrangement.from_rows(rows, None, field, f"generic({n},{dim})")


@dataclass(frozen=True)
class Rank2Flat:
    members: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


def _flats_of(arr: Arrangement, subset: Sequence[int]) -> list[tuple[int, ...]]:
    subset = list(subset)
    covered: set[tuple[int, int]] = set()
    flats = []
    for i, j in combinations(subset, 2):
        if (i, j) in covered:
            continue
        basis = ex.matrix([arr.normals[i], arr.normals[j]], arr.field)
        members = [
            h for h in subset
            if h in (i, j) or ex.rank(np.vstack([basis, ex.matrix([arr.normals[h]], arr.field)])) == 2
        ]
        for p, q in combinations(members, 2):
            covered.add((p, q))
        flats.append(tuple(members))
    return flats


def rank2_flats(arr: Arrangement) -> list[Rank2Flat]:
    """Maximal sets of at least two hyperplanes spanning a rank-2 space, in order of first pair."""
    return [Rank2Flat(m) for m in _flats_of(arr, range(len(arr)))]


def os_algebra(arr: Arrangement) -> Cdga:
    n = len(arr)
    names = arr.generator_names()
    pairs = list(combinations(range(n), 2))
    col = {p: i for i, p in enumerate(pairs)}
    rows = []
    for fl in rank2_flats(arr):
        for a, b, c in combinations(fl.members, 3):
            r = [0] * len(pairs)
            r[col[(b, c)]] += 1
            r[col[(a, c)]] -= 1
            r[col[(a, b)]] += 1
            rows.append(r)
    if rows:
        red, piv = ex.rref(ex.matrix(rows, arr.field))
    else:
        red, piv = ex.zeros(0, len(pairs), arr.field), []
    free = [i for i in range(len(pairs)) if i not in set(piv)]
    deg2 = [f"{names[pairs[i][0]]}*{names[pairs[i][1]]}" for i in free]
    products = {}
    for idx, (a, b) in enumerate(pairs):
        if idx in free:
            out = {deg2[free.index(idx)]: 1}
        else:
            r = piv.index(idx)
            out = {deg2[k]: -red[r, f] for k, f in enumerate(free) if red[r, f]}
        if out:
            products[(names[a], names[b])] = out
            products[(names[b], names[a])] = {k: -v for k, v in out.items()}
    return Cdga.build([["1"], names, deg2], products, {}, arr.field, f"OS({arr.name})")


@dataclass(frozen=True)
class Multinet:
    """Classes are tuples of hyperplane indices; ``mult`` is aligned with ``base``."""

    base: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    mult: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.classes)

    def m(self, h: int) -> int:
        return self.mult[self.base.index(h)]

    def weight(self) -> int:
        return sum(self.m(h) for h in self.classes[0])

    def is_local(self, arr: Arrangement) -> bool:
        """Whether all base hyperplanes contain a common codimension-2 subspace."""
        return ex.rank(ex.matrix([arr.normals[h] for h in self.base], arr.field)) <= 2

    def describe(self, arr: Arrangement) -> dict:
        return {
            "k": self.k,
            "classes": [[arr.labels[h] for h in c] for c in self.classes],
            "mult": {arr.labels[h]: self.m(h) for h in self.base},
            "local": self.is_local(arr),
        }


class NotAPencilError(ValueError):
    pass


def _axioms_hold(classes, weights: dict, flats) -> bool:
    sums = {sum(weights[h] for h in c) for c in classes}
    if len(sums) != 1:
        return False
    cls_of = {h: i for i, c in enumerate(classes) for h in c}
    k = len(classes)
    for fl in flats:
        hit = {cls_of[h] for h in fl}
        if len(hit) < 2:
            continue
        if len(hit) < k:
            return False
        n_x = [0] * k
        for h in fl:
            n_x[cls_of[h]] += weights[h]
        if len(set(n_x)) != 1:
            return False
    return True


def _flats_meet_all_or_one(classes, flats) -> bool:
    cls_of = {h: i for i, c in enumerate(classes) for h in c}
    for fl in flats:
        hit = len({cls_of[h] for h in fl})
        if 1 < hit < len(classes):
            return False
    return True


def _set_partitions(items: list, k: int):
    """Partitions of ``items`` into exactly ``k`` blocks, as restricted growth strings."""
    n = len(items)

    def rec(i, labels, used):
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                yield list(labels)
            return
        for b in range(min(used + 1, k)):
            labels.append(b)
            yield from rec(i + 1, labels, max(used, b + 1))
            labels.pop()

    yield from rec(0, [], 0)


def _components(base, flats, k):
    parent = {h: h for h in base}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for fl in flats:
        if len(fl) < k:
            for h in fl[1:]:
                ra, rb = find(fl[0]), find(h)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups: dict = {}
    for h in base:
        groups.setdefault(find(h), []).append(h)
    return sorted((tuple(sorted(g)) for g in groups.values()), key=lambda g: g[0])


def multinet_enumerate(arr: Arrangement, k: int, max_mult: int = 1) -> list[Multinet]:
    """All ``k``-multinets on sub-arrangements, multiplicities ``1..max_mult`` with gcd 1.

    Ordered by base (lexicographic on index tuples), then by partition.  Each
    result passes the weighted axioms and :func:`multinet_to_pencil`.
    """
    if k < 3:
        raise ValueError("multinets need k >= 3")
    n = len(arr)
    bases = sorted(
        (b for size in range(k, n + 1) for b in combinations(range(n), size))
    )
    out = []
    for base in bases:
        flats = _flats_of(arr, base)
        comps = _components(base, flats, k)
        if len(comps) < k:
            continue
        found = []
        for labels in _set_partitions(comps, k):
            classes = [[] for _ in range(k)]
            for comp, lab in zip(comps, labels):
                classes[lab].extend(comp)
            classes = tuple(sorted((tuple(sorted(c)) for c in classes), key=lambda c: c[0]))
            if not _flats_meet_all_or_one(classes, flats):
                continue
            for ms in product(range(1, max_mult + 1), repeat=len(base)):
                if reduce(gcd, ms) != 1:
                    continue
                weights = dict(zip(base, ms))
                if not _axioms_hold(classes, weights, flats):
                    continue
                net = Multinet(tuple(base), classes, tuple(ms))
                try:
                    multinet_to_pencil(net, arr)
                except NotAPencilError:
                    continue
                found.append(net)
        out.extend(found)
    return out


def _covector_poly(arr: Arrangement, h: int, variables):
    acc = ex.MultiPoly(variables)
    for i, c in enumerate(arr.normals[h]):
        if c:
            acc = acc + ex.MultiPoly.var(variables, variables[i], c)
    return acc


@dataclass(frozen=True)
class Pencil:
    constants: dict
    polys: tuple

    def residuals(self) -> list:
        q1, q2 = self.polys[0], self.polys[1]
        return [
            self.polys[i - 1] - (a * q1 + b * q2) for i, (a, b) in self.constants.items()
        ]


def multinet_to_pencil(net: Multinet, arr: Arrangement) -> Pencil:
    """Constants ``(a_i, b_i)``, ``i = 3..k``, with ``Q_i = a_i Q_1 + b_i Q_2``."""
    variables = [f"x{i + 1}" for i in range(arr.ambient_dim)]
    polys = []
    for c in net.classes:
        q = ex.MultiPoly.constant(variables, ex.to_scalar(1, arr.field))
        for h in c:
            q = q * (_covector_poly(arr, h, variables) ** net.m(h))
        polys.append(q)
    q1, q2 = polys[0], polys[1]
    constants = {}
    for i in range(2, net.k):
        qi = polys[i]
        monos = sorted(set(q1.terms) | set(q2.terms) | set(qi.terms))
        zero = ex.to_scalar(0, arr.field)
        mat = ex.matrix([[q1.terms.get(e, zero), q2.terms.get(e, zero)] for e in monos], arr.field)
        rhs = ex.vector([qi.terms.get(e, zero) for e in monos], arr.field)
        sol = ex.solve(mat, rhs)
        if sol is None:
            raise NotAPencilError(f"class {i + 1} is not in the pencil of classes 1 and 2")
        constants[i + 1] = (sol[0], sol[1])
    pencil = Pencil(constants, tuple(polys))
    if any(not r.is_zero() for r in pencil.residuals()):
        raise NotAPencilError("pencil residual is not zero")
    return pencil


def class_vectors(net: Multinet, arr: Arrangement) -> list[np.ndarray]:
    """``u_i = sum_{H in class i} m_H e_H`` in the degree-1 OS basis."""
    out = []
    for c in net.classes:
        v = ex.vector([0] * len(arr), arr.field)
        for h in c:
            v[h] = ex.to_scalar(net.m(h), arr.field)
        out.append(v)
    return out


@dataclass(frozen=True, eq=False)
class AdmissibleModel:
    multinet: Multinet
    target: Cdga
    morphism: CdgaMorphism
    image: tuple[np.ndarray, ...]


def admissible_morphism(net: Multinet, arr: Arrangement, os: Cdga | None = None) -> AdmissibleModel:
    """Degree-1 model of the pencil map: ``c_i -> u_i - u_k`` into the OS algebra."""
    multinet_to_pencil(net, arr)
    os = os if os is not None else os_algebra(arr)
    src = punctured_sphere(net.k, arr.field)
    u = class_vectors(net, arr)
    cols = [u[i] - u[-1] for i in range(net.k - 1)]
    m1 = np.stack(cols, axis=1)
    maps = (
        ex.identity(1, arr.field),
        m1,
        ex.zeros(os.dim(2), 0, arr.field),
    )
    phi = CdgaMorphism(src, os, maps, "admissible")
    if not is_isotropic(os, cols):
        raise ValueError("admissible morphism does not respect products (image not isotropic)")
    issues = phi.validate()
    if issues:
        raise ValueError("; ".join(issues))
    return AdmissibleModel(net, src, phi, tuple(cols))


def boolean_morphism(arr: Arrangement, os: Cdga | None = None) -> CdgaMorphism:
    """``Lambda(x_H) -> OS``: identity on degree-1 labels."""
    os = os if os is not None else os_algebra(arr)
    n = len(arr)
    src = exterior(arr.generator_names(), 2, arr.field, "boolean-model")
    m2 = ex.zeros(os.dim(2), src.dim(2), arr.field)
    for col, (a, b) in enumerate(combinations(range(n), 2)):
        m2[:, col] = os.mul[(1, 1)][a, b]
    maps = (ex.identity(1, arr.field), ex.identity(n, arr.field), m2)
    return CdgaMorphism(src, os, maps, "boolean")


def is_isotropic(a: Cdga, vectors: Sequence) -> bool:
    for x, y in combinations(vectors, 2):
        if any(a.product(1, x, 1, y)):
            return False
    return True


def in_span(basis: Sequence, v) -> bool:
    if not basis:
        return not any(v)
    m = np.stack([np.asarray(b, dtype=object) for b in basis], axis=1)
    return ex.solve(m, np.asarray(v, dtype=object)) is not None


@dataclass(frozen=True, eq=False)
class ResonanceComponent:
    kind: str
    basis: tuple[np.ndarray, ...]
    origin: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return in_span(self.basis, v)


class ResonanceVerificationError(RuntimeError):
    def __init__(self, message, failures):
        super().__init__(message)
        self.failures = failures


def _span_basis(vectors, field) -> tuple:
    if not vectors:
        return ()
    red, piv = ex.rref(ex.matrix([list(v) for v in vectors], field))
    return tuple(np.array(red[i], dtype=object) for i in range(len(piv)))


def resonance_components(
    arr: Arrangement,
    ks: Iterable[int] = (3, 4),
    max_mult: int = 1,
    multinets: Sequence[Multinet] | None = None,
    samples: int = 0,
    seed: int = 0,
) -> list[ResonanceComponent]:
    """Local components (one per flat of size >= 3) and one component per non-local multinet.

    Subspaces contained in another listed subspace are dropped.  With
    ``samples > 0`` the list is checked pointwise and
    :class:`ResonanceVerificationError` is raised on any failure.
    """
    comps: list[ResonanceComponent] = []
    for fl in rank2_flats(arr):
        if fl.multiplicity >= 3:
            m0 = fl.members[0]
            vecs = []
            for h in fl.members[1:]:
                v = ex.vector([0] * len(arr), arr.field)
                v[m0], v[h] = ex.to_scalar(1, arr.field), ex.to_scalar(-1, arr.field)
                vecs.append(v)
            comps.append(ResonanceComponent("local", _span_basis(vecs, arr.field), tuple(fl.members)))
    if multinets is None:
        multinets = [m for k in ks for m in multinet_enumerate(arr, k, max_mult)]
    for net in multinets:
        u = class_vectors(net, arr)
        vecs = [u[i] - u[-1] for i in range(net.k - 1)]
        kind = "local" if net.is_local(arr) else "essential"
        comps.append(ResonanceComponent(kind, _span_basis(vecs, arr.field), (net,)))
    kept: list[ResonanceComponent] = []
    for c in comps:
        if any(all(o.contains(v) for v in c.basis) for o in kept):
            continue
        kept = [o for o in kept if not all(c.contains(v) for v in o.basis)]
        kept.append(c)
    if samples:
        failures = verify_components(arr, kept, samples, seed)
        if failures:
            raise ResonanceVerificationError(f"{len(failures)} membership checks failed", failures)
    return kept


def random_rational_vector(rng: np.random.Generator, n: int, field: str = "rational", bound: int = 5):
    vals = rng.integers(-bound, bound + 1, size=n)
    if field == "gaussian":
        ims = rng.integers(-bound, bound + 1, size=n)
        return ex.vector([ex.Gaussian(int(a), int(b)) for a, b in zip(vals, ims)], field)
    return ex.vector([int(a) for a in vals], field)


def verify_components(
    arr: Arrangement, comps: Sequence[ResonanceComponent], samples: int, seed: int, os: Cdga | None = None
) -> list[dict]:
    """Random points on each component must be resonant; random points off all components must not."""
    os = os if os is not None else os_algebra(arr)
    rng = np.random.default_rng(seed)
    failures = []
    for ci, c in enumerate(comps):
        for _ in range(samples):
            coeffs = random_rational_vector(rng, c.dim, arr.field)
            v = sum((x * b for x, b in zip(coeffs, c.basis)), ex.vector([0] * len(arr), arr.field))
            if any(v) and scalar_resonance_dim(os, v, 1) < 1:
                failures.append({"component": ci, "point": [ex.format_scalar(x) for x in v], "expected": "resonant"})
    for _ in range(samples):
        v = random_rational_vector(rng, len(arr), arr.field)
        if not any(v) or any(c.contains(v) for c in comps):
            continue
        if scalar_resonance_dim(os, v, 1) >= 1:
            failures.append({"component": None, "point": [ex.format_scalar(x) for x in v], "expected": "not resonant"})
    return failures


def _flat_signature(arr: Arrangement) -> list[tuple[int, ...]]:
    return sorted(f.members for f in rank2_flats(arr))


def reduce_to_rank3(arr: Arrangement, seed: int = 0, attempts: int = 50) -> Arrangement:
    """Restrict to a random rational 3-dimensional subspace preserving the rank-2 flats."""
    if arr.ambient_dim <= 3:
        return arr
    rng = np.random.default_rng(seed)
    target = _flat_signature(arr)
    cov = arr.covector_matrix()
    for _ in range(attempts):
        proj = ex.matrix(rng.integers(-9, 10, size=(arr.ambient_dim, 3)).tolist(), arr.field)
        rows = cov @ proj
        try:
            cand = Arrangement.from_rows(rows.tolist(), arr.labels, arr.field, f"{arr.name}|3")
        except ValueError:
            continue
        if _flat_signature(cand) == target:
            return cand
    raise RuntimeError("no generic 3-section found")
