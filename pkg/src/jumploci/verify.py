"""Sampling verifiers for decompositions of flat-connection and resonance loci.

Each verifier draws exact rational sample points from a seeded PCG64 generator
and records, per check, how many points passed and a witness for every point
that failed.  Reports serialize to JSON with sorted keys, so equal inputs and
seed give byte-identical output.  Wall time is kept outside the JSON.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import exact as ex
from .arrangements import (
    Arrangement,
    Multinet,
    admissible_morphism,
    boolean_morphism,
    os_algebra,
    random_rational_vector,
    reduce_to_rank3,
    resonance_components,
    verify_components,
)
from .cdga import (
    Cdga,
    CdgaMorphism,
    FlatConnection,
    HirschData,
    aomoto_cohomology,
    hirsch_extend,
    mc_residual,
    pullback_connection,
    rank_one_locus_membership,
    rank_one_resonance_test,
)
from .deform import mc_check
from .lie import LieAlgebra, LieRep

__all__ = [
    "Check",
    "VerificationReport",
    "verify_arrangement_decomposition",
    "verify_hirsch",
    "RNG_NAME",
]

RNG_NAME = "PCG64"


@dataclass
class Check:
    name: str
    samples: int = 0
    passes: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, witness=None) -> bool:
        self.samples += 1
        if ok:
            self.passes += 1
        else:
            self.failures.append(witness)
        return ok

    def as_dict(self) -> dict:
        return {"name": self.name, "samples": self.samples, "passes": self.passes, "failures": self.failures}


@dataclass
class VerificationReport:
    command: str
    inputs: dict
    seed: int
    checks: list[Check]
    details: dict = field(default_factory=dict)
    rng: str = RNG_NAME
    wall_time: float = 0.0

    @property
    def verdict(self) -> str:
        return "pass" if all(not c.failures for c in self.checks) else "fail"

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "seed": self.seed,
            "rng": self.rng,
            "checks": [c.as_dict() for c in self.checks],
            "details": self.details,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def summary(self) -> str:
        lines = [f"{self.command}: {self.verdict.upper()} (seed {self.seed}, {self.wall_time:.2f}s)"]
        for c in self.checks:
            lines.append(f"  {c.name}: {c.passes}/{c.samples} passed")
        return "\n".join(lines)


def _fmt(arr) -> list:
    arr = np.asarray(arr, dtype=object)
    if arr.ndim == 1:
        return [ex.format_scalar(x) for x in arr]
    return [_fmt(row) for row in arr]


def _random_lie_vector(rng, lie: LieAlgebra, bound: int = 3) -> np.ndarray:
    return random_rational_vector(rng, lie.dim, lie.field, bound)


def _singular_element(rng, lie: LieAlgebra, theta: LieRep) -> np.ndarray:
    """A random ``g`` with ``det theta(g) = 0``."""
    for _ in range(8):
        g = _random_lie_vector(rng, lie)
        if any(g) and not ex.det(theta.of(g)):
            return g
    if lie.name == "sl2":
        # nilpotent cone: (h, e, f) = (a, b, -a^2/b)
        a = ex.to_scalar(int(rng.integers(-3, 4)), lie.field)
        b = ex.to_scalar(int(rng.choice([-3, -2, -1, 1, 2, 3])), lie.field)
        g = lie.vec([a, b, -a * a / b])
        if not ex.det(theta.of(g)):
            return g
    singular = [lie.unit(x) for x in lie.basis if not ex.det(theta.of(lie.unit(x)))]
    if not singular:
        raise ValueError("no singular element found for this representation")
    c = ex.to_scalar(int(rng.choice([-3, -2, -1, 1, 2, 3])), lie.field)
    return c * singular[int(rng.integers(len(singular)))]


def _columns_in_span(coeffs: np.ndarray, basis) -> bool:
    if not basis:
        return not any(coeffs.flat)
    m = np.stack([np.asarray(b, dtype=object) for b in basis], axis=1)
    return ex.solve(m, coeffs) is not None


def _in_pieces(omega: FlatConnection, pieces) -> str | None:
    for label, basis in pieces:
        if _columns_in_span(omega.coeffs, basis):
            return label
    return None


def _h1(a: Cdga, theta: LieRep, omega: FlatConnection) -> int:
    return aomoto_cohomology(a, theta, omega, 1, check_flat=False)[0]


def _combo(rng, basis, n, field_):
    out = ex.vector([0] * n, field_)
    for b in basis:
        out = out + ex.to_scalar(int(rng.integers(-3, 4)), field_) * b
    return out


def _product_kernel(a: Cdga, u) -> list[np.ndarray]:
    """Basis of ``{v in A^1 : u v = 0}``."""
    n = a.dim(1)
    cols = [a.product(1, u, 1, ex.vector([1 if j == i else 0 for j in range(n)], a.field)) for i in range(n)]
    if a.dim(2) == 0:
        return [ex.vector([1 if j == i else 0 for j in range(n)], a.field) for i in range(n)]
    return ex.kernel_basis(np.stack(cols, axis=1))


def _pool_point(rng, a: Cdga, lie: LieAlgebra) -> FlatConnection | None:
    """``u (x) g1 + v (x) g2`` with ``u`` a sparse sign vector and ``u v = 0``."""
    n = a.dim(1)
    entries = [0] * n
    size = int(rng.integers(2, min(n, 4) + 1)) if n >= 2 else n
    for pos in rng.choice(n, size=size, replace=False):
        entries[int(pos)] = int(rng.choice([-1, 1]))
    u = ex.vector(entries, a.field)
    if not any(u):
        return None
    v = _combo(rng, _product_kernel(a, u), n, a.field)
    coeffs = np.outer(u, _random_lie_vector(rng, lie)).astype(object)
    coeffs = coeffs + np.outer(v, _random_lie_vector(rng, lie)).astype(object)
    return FlatConnection(a, lie, coeffs)


def _random_candidate(rng, a: Cdga, lie: LieAlgebra) -> FlatConnection:
    n = a.dim(1)
    coeffs = np.outer(random_rational_vector(rng, n, a.field, 2), _random_lie_vector(rng, lie)).astype(object)
    coeffs = coeffs + np.outer(random_rational_vector(rng, n, a.field, 2), _random_lie_vector(rng, lie)).astype(object)
    return FlatConnection(a, lie, coeffs)


def _flat_net(members) -> Multinet:
    return Multinet(tuple(members), tuple((h,) for h in members), tuple(1 for _ in members))


def verify_arrangement_decomposition(
    arr: Arrangement,
    lie: LieAlgebra,
    theta: LieRep,
    samples: int = 100,
    seed: int = 0,
    multinets=None,
    ks=(3, 4),
    max_mult: int = 1,
    inputs: dict | None = None,
) -> VerificationReport:
    """Two-sided sample checks of

    ``F(OS, g) = F1 U (union over maps f of f^! F(target_f, g))`` and
    ``R^1_1(OS, theta) = Pi U (same union)``,

    where the maps are the degree-1 models of the pencil maps attached to the
    resonance components (local flats and multinets).  Each piece ``f^! F`` is
    ``U_f (x) g`` with ``U_f`` the component spanned by ``u_i - u_k``.
    """
    start = time.perf_counter()
    if lie.is_abelian():
        raise ValueError("the decomposition needs a non-abelian Lie algebra")
    if arr.ambient_dim > 3:
        arr = reduce_to_rank3(arr, seed)
    rng = np.random.default_rng(seed)
    os = os_algebra(arr)
    n = os.dim(1)
    checks = {
        name: Check(name)
        for name in (
            "multinets valid",
            "resonance components",
            "F1 in F",
            "pullbacks in F",
            "boolean pullback is F1",
            "Pi in R11",
            "pullbacks in R11",
            "F in F1 u pullbacks",
            "R11 in Pi u pullbacks",
        )
    }

    morphisms: list[tuple[str, CdgaMorphism, tuple]] = []
    if multinets is not None:
        for net in multinets:
            try:
                model = admissible_morphism(net, arr, os)
            except ValueError as err:
                checks["multinets valid"].record(False, {"multinet": net.describe(arr), "error": str(err)})
                continue
            checks["multinets valid"].record(True)
            morphisms.append((_net_label(net, arr), model.morphism, model.image))
        comps = resonance_components(arr, multinets=[m for m in multinets if _is_valid(m, arr, os)])
    else:
        comps = resonance_components(arr, ks=ks, max_mult=max_mult)
    seen = {lbl for lbl, _, _ in morphisms}
    for comp in comps:
        origin = comp.origin[0]
        net = origin if isinstance(origin, Multinet) else _flat_net(comp.origin)
        lbl = _net_label(net, arr)
        if lbl in seen:
            continue
        model = admissible_morphism(net, arr, os)
        checks["multinets valid"].record(True)
        seen.add(lbl)
        morphisms.append((lbl, model.morphism, model.image))
    pieces = [(lbl, image) for lbl, _, image in morphisms]

    for f in verify_components(arr, comps, samples, seed, os):
        checks["resonance components"].record(False, f)
    checks["resonance components"].samples += samples * (len(comps) + 1)
    checks["resonance components"].passes = checks["resonance components"].samples - len(
        checks["resonance components"].failures
    )

    def rhs_f(omega):
        if rank_one_locus_membership(os, omega) is not None:
            return "F1"
        return _in_pieces(omega, pieces)

    def rhs_r(omega):
        fac = rank_one_locus_membership(os, omega)
        if fac is not None and not ex.det(theta.of(fac[1])):
            return "Pi"
        return _in_pieces(omega, pieces)

    def both_directions(omega, source):
        flat = mc_check(os, lie, omega)
        witness = {"omega": _fmt(omega.coeffs), "source": source}
        if not flat:
            return False
        if rank_one_locus_membership(os, omega) is None:
            counts["non-rank-one flat points"] += 1
        checks["F in F1 u pullbacks"].record(rhs_f(omega) is not None, witness)
        if _h1(os, theta, omega) >= 1:
            checks["R11 in Pi u pullbacks"].record(rhs_r(omega) is not None, witness)
        return True

    boolean = boolean_morphism(arr, os)
    counts = {"pool points": 0, "pool non-rank-one": 0, "random candidates rejected": 0,
              "random candidates flat": 0, "support points": 0, "non-rank-one flat points": 0}
    for s in range(samples):
        eta = random_rational_vector(rng, n, os.field, 3)
        g = _random_lie_vector(rng, lie)
        omega = FlatConnection.rank_one(os, lie, eta, g)
        checks["F1 in F"].record(mc_check(os, lie, omega), {"omega": _fmt(omega.coeffs)})
        both_directions(omega, "rank-one")

        src_omega = FlatConnection.rank_one(boolean.source, lie, eta, g)
        pb = pullback_connection(boolean, src_omega)
        ok = ex.matrix_equal(pb.coeffs, omega.coeffs) and rank_one_locus_membership(os, pb) is not None
        checks["boolean pullback is F1"].record(ok, {"omega": _fmt(pb.coeffs)})

        gs = _singular_element(rng, lie, theta)
        pi_point = FlatConnection.rank_one(os, lie, eta, gs)
        direct = _h1(os, theta, pi_point) >= 1
        fast = bool(rank_one_resonance_test(os, theta, eta, gs, 1))
        checks["Pi in R11"].record(direct and fast, {"omega": _fmt(pi_point.coeffs), "direct": direct, "criterion": fast})

        for lbl, phi, _ in morphisms:
            k1 = phi.source.dim(1)
            src = FlatConnection(
                phi.source, lie,
                np.array([[ex.to_scalar(int(x), os.field) for x in row]
                          for row in rng.integers(-3, 4, size=(k1, lie.dim))], dtype=object),
            )
            pb = pullback_connection(phi, src)
            w = {"map": lbl, "omega": _fmt(pb.coeffs)}
            checks["pullbacks in F"].record(mc_check(os, lie, pb), w)
            checks["pullbacks in R11"].record(_h1(os, theta, pb) >= 1, w)

        for lbl, image in pieces:
            if len(image) < 2:
                continue
            coeffs = sum(
                (np.outer(u, _random_lie_vector(rng, lie)).astype(object) for u in image),
                ex.zeros(n, lie.dim, os.field),
            )
            if both_directions(FlatConnection(os, lie, coeffs), f"support {lbl}"):
                counts["support points"] += 1

        pool = _pool_point(rng, os, lie)
        if pool is not None:
            if both_directions(pool, "pool"):
                counts["pool points"] += 1
                if rank_one_locus_membership(os, pool) is None:
                    counts["pool non-rank-one"] += 1

        cand = _random_candidate(rng, os, lie)
        if both_directions(cand, "random"):
            counts["random candidates flat"] += 1
        else:
            counts["random candidates rejected"] += 1

    details = {
        "arrangement": arr.name,
        "hyperplanes": len(arr),
        "lie": lie.name,
        "representation": theta.name,
        "components": [{"kind": c.kind, "dim": c.dim} for c in comps],
        "maps": [lbl for lbl, _, _ in morphisms],
        "branch": "F = F1" if not any(len(im) >= 2 for _, im in pieces) else "mixed",
        **counts,
    }
    report = VerificationReport("verify decomposition", dict(inputs or {}), seed, list(checks.values()), details)
    report.wall_time = time.perf_counter() - start
    return report


def _is_valid(net: Multinet, arr: Arrangement, os: Cdga) -> bool:
    try:
        admissible_morphism(net, arr, os)
    except ValueError:
        return False
    return True


def _net_label(net: Multinet, arr: Arrangement) -> str:
    classes = "|".join(",".join(arr.labels[h] for h in c) for c in net.classes)
    if any(m != 1 for m in net.mult):
        classes += " mult " + ",".join(str(m) for m in net.mult)
    return classes


def _inclusion(base: Cdga, total: Cdga) -> CdgaMorphism:
    maps = []
    for i in range(base.max_degree + 1):
        m = ex.zeros(total.dim(i), base.dim(i), base.field)
        for j in range(base.dim(i)):
            m[j, j] = ex.to_scalar(1, base.field)
        maps.append(m)
    return CdgaMorphism(base, total, tuple(maps), "inclusion")


def _solve_generator_part(rng, total: Cdga, base: Cdga, lie: LieAlgebra, x: np.ndarray, ngen: int):
    """Random ``y`` making ``(x, y)`` satisfy every residual row that is affine in ``y``.

    Rows indexed by products of two new generators are quadratic in ``y`` and
    are left to the final flatness check.  Returns ``None`` when the affine
    rows are inconsistent.
    """
    nb1, ng = base.dim(1), lie.dim
    rows = base.dim(2) + nb1 * ngen
    nvar = ngen * ng

    def residual(yflat):
        coeffs = np.empty((total.dim(1), ng), dtype=object)
        coeffs[:nb1] = x
        coeffs[nb1:] = np.asarray(yflat, dtype=object).reshape(ngen, ng)
        return mc_residual(total, lie, coeffs)[:rows].reshape(-1)

    zero = [ex.to_scalar(0, base.field)] * nvar
    r0 = residual(zero)
    cols = []
    for t in range(nvar):
        e = list(zero)
        e[t] = ex.to_scalar(1, base.field)
        cols.append(residual(e) - r0)
    if nvar == 0:
        return np.empty((0, ng), dtype=object)
    lin = np.stack(cols, axis=1)
    part = ex.solve(lin, -r0)
    if part is None:
        return None
    y = np.asarray(part, dtype=object)
    for k in ex.kernel_basis(lin):
        y = y + ex.to_scalar(int(rng.integers(-2, 3)), base.field) * k
    return y.reshape(ngen, ng)


def verify_hirsch(
    base: Cdga,
    h: HirschData,
    lie: LieAlgebra,
    samples: int = 100,
    seed: int = 0,
    inputs: dict | None = None,
) -> VerificationReport:
    """Sample checks of ``F(A_M, g) = F1(A_M, g) U (Phi (x) id) F(A_N, g)``.

    ``A_N`` is ``base`` (zero differential expected), ``A_M`` its Hirsch
    extension by ``h`` and ``Phi`` the inclusion.  Flat points of ``A_M`` are
    produced by choosing the base part ``x`` (rank-one, isotropic-pool or
    random) and solving for the new-generator part.
    """
    start = time.perf_counter()
    if lie.is_abelian():
        raise ValueError("the decomposition needs a non-abelian Lie algebra")
    rng = np.random.default_rng(seed)
    total = hirsch_extend(base, h, "hirsch")
    phi = _inclusion(base, total)
    issues = phi.validate()
    if issues:
        raise ValueError("; ".join(issues))
    nb1, ngen = base.dim(1), len(h.generators)
    closed = ex.kernel_basis(total.d[1]) if total.max_degree >= 2 else []
    checks = {name: Check(name) for name in ("F1 in F", "pullbacks in F", "F in F1 u pullbacks")}
    counts = {"candidates": 0, "flat": 0, "rejected": 0, "pullback branch non-rank-one": 0}

    for _ in range(samples):
        eta = _combo(rng, closed, total.dim(1), total.field)
        omega = FlatConnection.rank_one(total, lie, eta, _random_lie_vector(rng, lie))
        checks["F1 in F"].record(mc_check(total, lie, omega), {"omega": _fmt(omega.coeffs)})

        pool = _pool_point(rng, base, lie)
        for src in [pool] if pool is not None else []:
            if mc_check(base, lie, src):
                pb = pullback_connection(phi, src)
                checks["pullbacks in F"].record(mc_check(total, lie, pb), {"omega": _fmt(pb.coeffs)})

        xs = [
            ("rank-one", np.outer(random_rational_vector(rng, nb1, base.field, 3),
                                  _random_lie_vector(rng, lie)).astype(object)),
            ("random", _random_candidate(rng, base, lie).coeffs),
        ]
        if pool is not None:
            xs.append(("pool", pool.coeffs))
        for source, x in xs:
            counts["candidates"] += 1
            y = _solve_generator_part(rng, total, base, lie, x, ngen)
            if y is None:
                counts["rejected"] += 1
                continue
            coeffs = np.concatenate([x, y], axis=0) if ngen else x
            omega = FlatConnection(total, lie, coeffs)
            if not mc_check(total, lie, omega):
                counts["rejected"] += 1
                continue
            counts["flat"] += 1
            in_f1 = rank_one_locus_membership(total, omega) is not None
            in_pb = not any(y.flat) and mc_check(base, lie, FlatConnection(base, lie, x))
            if in_pb and not in_f1:
                counts["pullback branch non-rank-one"] += 1
            checks["F in F1 u pullbacks"].record(in_f1 or in_pb, {"omega": _fmt(coeffs), "source": source})

    details = {
        "generators": list(h.generators),
        "tau": _fmt(h.tau),
        "lie": lie.name,
        "branch": "F = F1" if counts["pullback branch non-rank-one"] == 0 else "mixed",
        **counts,
    }
    report = VerificationReport("verify hirsch", dict(inputs or {}), seed, list(checks.values()), details)
    report.wall_time = time.perf_counter() - start
    return report
