"""Acceptance criteria 1-7.  Each test prints one PASS/FAIL line."""
import json
import time
from fractions import Fraction

import numpy as np

from jumploci import arrangements as ar
from jumploci import cdga as cd
from jumploci import deform as df
from jumploci import exact as ex
from jumploci import groups as gr
from jumploci import io
from jumploci import lie as L
from jumploci.cli import EXIT_FAIL, EXIT_OK, main
from jumploci.verify import verify_arrangement_decomposition

from conftest import DATA
from oracles import as_key, koszul_h1, oracle_multinets, os_h1

H = np.array([[1, 0], [0, -1]], dtype=object)
E = np.array([[0, 1], [0, 0]], dtype=object)
F = np.array([[0, 0], [1, 0]], dtype=object)


def run_json(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def sl2():
    return L.preset_lie("sl2")


def mat(v):
    return v[0] * H + v[1] * E + v[2] * F


def comm(x, y):
    mx, my = mat(x), mat(y)
    return mx @ my - my @ mx


def coords(m):
    return [m[0, 0], m[0, 1], m[1, 0]]


def ints(rng, n, bound=3):
    return [int(x) for x in rng.integers(-bound, bound + 1, size=n)]


def ring_row(ring, rng, n, top):
    """Random ``sum_{k=1}^{top-1} c_k t^k`` entries."""
    out = []
    for _ in range(n):
        terms = {(k,): Fraction(c) for k, c in zip(range(1, top), ints(rng, top - 1)) if c}
        out.append(ring.element(terms))
    return out


def ring_flat(ring, a, g, coeffs):
    return not any(df._normalize(ring, cd.mc_residual(a, g, coeffs)).flat)


def same(x, y):
    return all(u == v for u, v in zip(x.coeffs.flat, y.coeffs.flat))


# 1 ----------------------------------------------------------------------------

def test_criterion_1_braid_multinets_and_components(criterion, capsys):
    with criterion(1, "braid arrangement: 5 multinets (4 local, 1 essential), 5 two-dim components"):
        start = time.perf_counter()
        code, data = run_json(capsys, "multinets", "--arr", DATA / "braid_a3.json", "--k", 3, "--max-mult", 1)
        assert code == EXIT_OK and data["count"] == 5
        assert sorted(m["local"] for m in data["multinets"]) == [False] + [True] * 4
        arr = io.arrangement_from_json(io.read_json(DATA / "braid_a3.json"))
        nets = io.multinets_from_json(data, arr)
        # raises on any failed on/off membership check
        comps = ar.resonance_components(arr, ks=(3,), samples=100, seed=2024)
        assert len(comps) == 5 and all(c.dim == 2 for c in comps)
        assert sorted(c.kind for c in comps) == ["essential"] + ["local"] * 4
        assert ar.verify_components(arr, comps, 100, 7) == []
        assert time.perf_counter() - start < 60

        assert {as_key(n) for n in nets} == oracle_multinets(arr, 3)
        rng = np.random.default_rng(1)
        for c in comps:
            for _ in range(20):
                v = sum((x * b for x, b in zip(ints(rng, 2, 5), c.basis)), ex.vector([0] * 6))
                if any(v):
                    assert os_h1(arr, list(v)) >= 1
        off = 0
        while off < 100:
            v = ex.vector(ints(rng, 6, 5))
            if not any(v) or any(c.contains(v) for c in comps):
                continue
            assert os_h1(arr, list(v)) == 0
            off += 1


# 2 ----------------------------------------------------------------------------

def test_criterion_2_braid_decomposition(criterion, capsys):
    with criterion(2, "verify decomposition on the braid arrangement (sl2/adjoint, borel2/standard)"):
        for lie, rep in (("sl2", "adjoint"), ("borel2", "standard")):
            start = time.perf_counter()
            code, data = run_json(capsys, "verify", "decomposition", "--arr", DATA / "braid_a3.json",
                                  "--lie", lie, "--rep", rep, "--samples", 100, "--seed", 7)
            assert time.perf_counter() - start < 120
            assert code == EXIT_OK and data["verdict"] == "pass"
            checks = {c["name"]: c for c in data["checks"]}
            for name in ("F in F1 u pullbacks", "R11 in Pi u pullbacks", "F1 in F", "pullbacks in F",
                         "Pi in R11", "pullbacks in R11"):
                assert checks[name]["failures"] == [] and checks[name]["samples"] > 0
            assert len(data["details"]["components"]) == 5


# 3 ----------------------------------------------------------------------------

def test_criterion_3_boolean(criterion):
    with criterion(3, "Boolean arrangements n <= 6: R^1_1 = {0}, decomposition is F = F1"):
        rng = np.random.default_rng(3)
        for n in range(2, 7):
            arr = ar.boolean(n)
            os = ar.os_algebra(arr)
            for _ in range(20):
                eta = ints(rng, n, 4)
                if not any(eta):
                    continue
                assert koszul_h1(n, eta) == 0
                assert cd.scalar_resonance_dim(os, ex.vector(eta), 1) == 0
            assert ar.resonance_components(arr, samples=20, seed=n) == []
            rep = verify_arrangement_decomposition(arr, sl2(), L.adjoint(sl2()), 20, n)
            assert rep.ok, rep.summary()
            assert rep.details["branch"] == "F = F1"


# 4 ----------------------------------------------------------------------------

FLAT_WITNESSES = [
    ([0, 0, 0], [0, 0, 0], [0, 0, 0]),
    ([1, 0, 0], [2, 0, 0], [0, 0, 0]),
    ([0, 1, 0], [0, -1, 0], [0, 0, 0]),
    ([0, 0, 1], [0, 0, 3], [0, 0, 0]),
    ([1, 1, 0], [3, 3, 0], [0, 0, 0]),
    ([0, 1, 0], [0, 0, 0], [0, 0, 0]),
    ([0, 0, 0], [0, 0, 1], [0, 0, 0]),
    ([1, 2, 3], [-2, -4, -6], [0, 0, 0]),
    ([2, 0, 1], [0, 0, 0], [0, 0, 0]),
    ([1, -1, 1], [1, -1, 1], [0, 0, 0]),
]
NON_FLAT_WITNESSES = [
    ([0, 1, 0], [0, 0, 1], [-1, 0, 0]),
    ([0, 1, 0], [0, 0, 1], [0, 0, 0]),
    ([1, 0, 0], [0, 1, 0], [0, -2, 0]),
    ([0, 0, 0], [0, 0, 0], [1, 0, 0]),
    ([0, 1, 0], [0, 1, 0], [0, 1, 0]),
    ([1, 0, 0], [0, 0, 0], [1, 0, 0]),
    ([0, 0, 1], [0, 1, 0], [1, 0, 0]),
    ([0, 1, 0], [0, 2, 0], [0, 0, 1]),
    ([1, 0, 0], [1, 0, 0], [0, 1, 0]),
    ([0, 1, 1], [1, 0, 0], [0, 0, 0]),
]


def test_criterion_4_hirsch_heisenberg(criterion, capsys):
    with criterion(4, "Hirsch extension of Lambda(a,b) by tau(p)=ab and the Heisenberg relation system"):
        code, data = run_json(capsys, "verify", "hirsch", "--base", DATA / "exterior_ab.json",
                              "--tau", DATA / "tau_heisenberg.json", "--samples", 100, "--seed", 0)
        assert code == EXIT_OK and data["verdict"] == "pass"
        assert data["details"]["branch"] == "F = F1"
        assert all(c["samples"] > 0 for c in data["checks"])

        a, g = cd.heisenberg(), sl2()
        for witnesses, expected in ((FLAT_WITNESSES, True), (NON_FLAT_WITNESSES, False)):
            for ga, gb, gp in witnesses:
                # [g_a, g_b] = -g_p, [g_a, g_p] = [g_b, g_p] = 0 with 2x2 matrices
                relations = (not any((comm(ga, gb) + mat(gp)).flat)
                             and not any(comm(ga, gp).flat) and not any(comm(gb, gp).flat))
                assert relations == expected
                omega = cd.FlatConnection(a, g, ex.matrix([ga, gb, gp]))
                assert df.mc_check(a, g, omega) == expected
                assert df.flat_iff_holonomy_hom(a, g, omega) == expected
        code, data = run_json(capsys, "mc", "check", "--cdga", DATA / "heisenberg.json",
                              "--omega", DATA / "omega_heis_ef_minus_h.json")
        assert code == EXIT_FAIL and data == {"flat": False}


# 5 ----------------------------------------------------------------------------

def test_criterion_5_topological(criterion, capsys):
    with criterion(5, "twisted cohomology of F2, Z2 and Z; non-surjective pullback regression"):
        for pres, rep, degree, dim in (("pres_f2.json", "rep_21.json", 1, 1),
                                       ("pres_z2.json", "rep_21.json", 1, 0)):
            code, data = run_json(capsys, "twisted-h", "--pres", DATA / pres, "--rep", DATA / rep,
                                  "--degree", degree)
            assert code == EXIT_OK and data["dim"] == dim
        f2 = gr.GroupPresentation.free(2)
        z2 = gr.GroupPresentation.free_abelian(2)
        z = gr.GroupPresentation.free(1)
        assert gr.cv_membership(f2, gr.rank_one_rep(f2, [2, 1]), 1, 1)
        assert not gr.cv_membership(z2, gr.rank_one_rep(z2, [2, 1]), 1, 1)
        for p, betti in ((f2, (1, 2)), (z2, (1, 2)), (z, (1, 1))):
            for n in (1, 2, 3):
                rho = gr.Representation.trivial(p, n)
                assert [gr.twisted_h(p, rho, i) for i in (0, 1)] == [betti[0] * n, betti[1] * n]
        # Z -> F2 onto the first factor: jump loci are not preserved
        rho = gr.rank_one_rep(f2, [2, 1])
        back = gr.pullback_rep(z, {"x1": ["x"]}, rho)
        assert gr.twisted_h(f2, rho, 1) == 1
        assert gr.twisted_h(z, back, 1) == 0
        assert not gr.cv_membership(z, back, 1, 1)


# 6 ----------------------------------------------------------------------------

def _flat_over_ring(rng, ring, g):
    kind = int(rng.integers(0, 3))
    if kind == 0:
        a = cd.exterior(["a", "b"])
        row = ring_row(ring, rng, 3, ring.order)
        lam = ints(rng, 2)
        rows = [[r * lam[0] for r in row], [r * lam[1] for r in row]]
    elif kind == 1:
        a = cd.heisenberg()
        row = ring_row(ring, rng, 3, ring.order)
        lam = ints(rng, 1)[0]
        rows = [row, [r * lam for r in row], [ring.zero()] * 3]
    else:
        a = ar.os_algebra(ar.concurrent_lines(3))
        row = ring_row(ring, rng, 3, ring.order)
        eta = ints(rng, 3)
        rows = [[r * x for r in row] for x in eta]
    out = np.empty((len(rows), 3), dtype=object)
    for i, r in enumerate(rows):
        out[i] = r
    return a, cd.FlatConnection(a, g, out)


def _gauge(rng, ring, g):
    out = np.empty((1, g.dim), dtype=object)
    out[0] = ring_row(ring, rng, g.dim, ring.order)
    return df.GaugeElement(ring, out)


def _flat_point(rng, a, g, which):
    n = a.dim(1)
    if which == "heisenberg":
        x = ints(rng, 3)
        lam = ints(rng, 2)
        mode = int(rng.integers(0, 3))
        if mode == 0:
            return ex.matrix([x, [lam[0] * v for v in x], [0, 0, 0]])
        if mode == 1:
            y = ints(rng, 3)
            return ex.matrix([x, y, [-v for v in coords(comm(x, y))]])
        return ex.matrix([x, ints(rng, 3), ints(rng, 3)])
    mode = int(rng.integers(0, 2))
    if mode == 0:
        x = ints(rng, 3)
        return ex.matrix([[c * v for v in x] for c in ints(rng, n)])
    return ex.matrix([ints(rng, 3) for _ in range(n)])


def test_criterion_6_property_suites(criterion):
    with criterion(6, "gauge, holonomy, Fox, Euler, Aomoto and naturality property suites"):
        rng = np.random.default_rng(6)
        g = sl2()

        ring = df.TruncatedCoefficients(["t"], 4)
        for _ in range(200):
            a, omega = _flat_over_ring(rng, ring, g)
            assert ring_flat(ring, a, g, omega.coeffs)
            out = df.gauge_act(a, g, ring, _gauge(rng, ring, g), omega)
            assert ring_flat(ring, a, g, out.coeffs)

        for _ in range(50):
            a, o1 = _flat_over_ring(rng, ring, g)
            o2 = df.gauge_act(a, g, ring, _gauge(rng, ring, g), o1)
            alpha = df.gauge_equivalent(a, g, ring, o1, o2)
            assert alpha is not None
            assert same(df.gauge_act(a, g, ring, alpha, o1), o2)

        algebras = {"heisenberg": cd.heisenberg(), "pencil": ar.os_algebra(ar.concurrent_lines(3)),
                    "surface2": cd.surface(2)}
        seen = set()
        for trial in range(500):
            which = list(algebras)[trial % 3]
            a = algebras[which]
            omega = cd.FlatConnection(a, g, _flat_point(rng, a, g, which))
            flat = df.mc_check(a, g, omega)
            assert df.flat_iff_holonomy_hom(a, g, omega) == flat
            seen.add((which, flat))
        assert len(seen) == 6

        cases = [(io.presentation_from_json(io.read_json(DATA / p)), r)
                 for p in ("pres_f2.json", "pres_z2.json", "pres_z.json")
                 for r in ("rep_21.json", "rep_trivial2.json")]
        reps = []
        for p, r in cases:
            try:
                reps.append((p, io.group_rep_from_json(io.read_json(DATA / r), p)))
            except (ValueError, io.InputError):
                pass
        for _ in range(100):
            m = int(rng.integers(1, 4))
            relators = []
            for _ in range(int(rng.integers(0, 3))):
                u = [int(rng.integers(1, m + 1)) * int(rng.choice([-1, 1])) for _ in range(2)]
                v = [int(rng.integers(1, m + 1)) * int(rng.choice([-1, 1])) for _ in range(2)]
                relators.append(tuple(u + v + [-x for x in reversed(u)] + [-x for x in reversed(v)]))
            p = gr.GroupPresentation(tuple(f"g{i}" for i in range(m)), tuple(relators))
            vals = [Fraction(int(rng.integers(1, 5)) * int(rng.choice([-1, 1]))) for _ in range(2 * m)]
            if rng.integers(0, 2):
                reps.append((p, gr.rank_one_rep(p, vals[:m])))
            else:
                reps.append((p, gr.Representation(p, tuple(ex.matrix([[vals[i], 0], [0, vals[m + i]]])
                                                           for i in range(m)))))
        assert len(reps) > 100
        for p, rho in reps:
            c = gr.fox_jacobian(p, rho)
            if c.d1.size and c.d0.size:
                assert not any((c.d1 @ c.d0).flat)
            h0, h1, h2 = gr.twisted_betti(p, rho)
            assert h0 - h1 + h2 == (1 - p.m + p.r) * rho.dim_v

        braid_os = ar.os_algebra(ar.braid())
        comps = ar.resonance_components(ar.braid(), ks=(3,))
        pools = [("heisenberg", cd.heisenberg()), ("braid", braid_os), ("surface2", cd.surface(2))]
        for trial in range(500):
            which, a = pools[trial % 3]
            theta = L.adjoint(g) if rng.integers(0, 2) else L.standard(g)
            if which == "braid":
                c = comps[int(rng.integers(0, len(comps)))]
                coeffs = sum(np.outer(c.basis[i], ex.vector(ints(rng, 3))) for i in range(2))
                omega = cd.FlatConnection(a, g, coeffs.astype(object))
            elif which == "heisenberg":
                x, lam = ints(rng, 3), ints(rng, 1)[0]
                omega = cd.FlatConnection(a, g, ex.matrix([x, [lam * v for v in x], [0, 0, 0]]))
            else:
                x = ints(rng, 3)
                omega = cd.FlatConnection(a, g, ex.matrix([[c * v for v in x] for c in ints(rng, a.dim(1))]))
            assert cd.is_flat(omega)
            d0, d1 = cd.aomoto(a, theta, omega)
            assert not any((d1 @ d0).flat)

        morphisms = []
        for arr in (ar.braid(), ar.concurrent_lines(3)):
            os = ar.os_algebra(arr)
            morphisms += [(os, ar.admissible_morphism(n, arr, os).morphism) for n in ar.multinet_enumerate(arr, 3)]
        assert len(morphisms) == 6
        for os, phi in morphisms:
            assert cd.morphism_connectivity(phi, 0)
            for _ in range(50):
                theta = L.adjoint(g) if rng.integers(0, 2) else L.standard(g)
                omega = cd.FlatConnection(phi.source, g, ex.matrix([ints(rng, 3) for _ in range(phi.source.dim(1))]))
                out = cd.pullback_connection(phi, omega)
                assert cd.is_flat(out)
                h0s = cd.aomoto_cohomology(phi.source, theta, omega, 0)[0]
                h0t = cd.aomoto_cohomology(os, theta, out, 0)[0]
                h1s = cd.aomoto_cohomology(phi.source, theta, omega, 1)[0]
                h1t = cd.aomoto_cohomology(os, theta, out, 1)[0]
                assert h0s == h0t and h1t >= h1s


# 7 ----------------------------------------------------------------------------

def test_criterion_7_validation(criterion):
    with criterion(7, "shipped CDGAs validate, preset Lie algebras satisfy Jacobi, multinets give pencils"):
        algebras = []
        for path in sorted(DATA.glob("*.json")):
            data = io.read_json(path)
            if "product" in data and "basis" in data:
                algebras.append(io.cdga_from_json(data, path.stem))
        assert len(algebras) >= 4
        algebras += [cd.heisenberg(), cd.exterior(["a", "b", "c"], 3)]
        algebras += [cd.surface(gn) for gn in (1, 2, 3)]
        algebras += [cd.wedge_of_circles(n) for n in (1, 2, 4)]
        algebras += [cd.punctured_sphere(k) for k in (2, 3, 5)]
        algebras += [cd.chevalley_eilenberg(L.preset_lie(x)) for x in ("sl2", "borel2")]
        algebras += [cd.chevalley_eilenberg(L.heisenberg_lie())]
        algebras += [ar.os_algebra(x) for x in (ar.boolean(4), ar.concurrent_lines(4), ar.braid(), ar.b3(),
                                                 ar.generic(5))]
        for base_file, tau_file in (("exterior_ab.json", "tau_heisenberg.json"),
                                    ("exterior_abc.json", "tau_abc.json"),
                                    ("surface2.json", "tau_surface2.json"),
                                    ("exterior_ab.json", "tau_zero.json")):
            base = io.cdga_from_json(io.read_json(DATA / base_file))
            algebras.append(cd.hirsch_extend(base, io.hirsch_from_json(io.read_json(DATA / tau_file), base)))
        for a in algebras:
            assert cd.validate(a) == [], a.name

        lies = [L.preset_lie(x) for x in ("sl2", "borel2", "abelian(1)", "abelian(3)")]
        lies += [L.lcs_free_lie(n, k) for n in (2, 3, 4) for k in (2, 3)] + [L.heisenberg_lie()]
        for lie in lies:
            assert lie.validate() == [], lie.name
            assert L.adjoint(lie).validate() == []
        for lie in lies[:2]:
            assert L.standard(lie).validate() == []

        count = 0
        for arr, ks, mult in ((ar.braid(), (3,), 1), (ar.concurrent_lines(3), (3,), 1),
                              (ar.concurrent_lines(4), (3, 4), 1), (ar.b3(), (3, 4), 2)):
            for k in ks:
                for net in ar.multinet_enumerate(arr, k, mult):
                    assert all(r.is_zero() for r in ar.multinet_to_pencil(net, arr).residuals())
                    count += 1
        assert count >= 5 + 1 + 37
