from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jumploci import arrangements as ar
from jumploci import cdga as cd
from jumploci import exact as ex
from jumploci import lie as L

from oracles import as_key, oracle_flats, oracle_multinets, oracle_os_dim2

ARRANGEMENTS = {
    "boolean3": ar.boolean(3),
    "pencil3": ar.concurrent_lines(3),
    "braid": ar.braid(),
    "b3": ar.b3(),
    "generic5": ar.generic(5),
}


# rank-2 flats -----------------------------------------------------------------

class TestFlats:
    def test_examples(self):
        assert sorted(f.multiplicity for f in ar.rank2_flats(ar.boolean(3))) == [2, 2, 2]
        assert sorted(f.multiplicity for f in ar.rank2_flats(ar.braid())) == [2, 2, 2, 3, 3, 3, 3]
        assert [f.multiplicity for f in ar.rank2_flats(ar.concurrent_lines(3))] == [3]

    @pytest.mark.parametrize("name", sorted(ARRANGEMENTS))
    def test_against_brute_force(self, name):
        arr = ARRANGEMENTS[name]
        assert {frozenset(f.members) for f in ar.rank2_flats(arr)} == oracle_flats(arr)

    @pytest.mark.parametrize("name", sorted(ARRANGEMENTS))
    def test_pairs_partitioned(self, name):
        arr = ARRANGEMENTS[name]
        seen = [p for f in ar.rank2_flats(arr) for p in combinations(sorted(f.members), 2)]
        assert sorted(seen) == sorted(combinations(range(len(arr)), 2))


class TestArrangementInput:
    def test_zero_covector(self):
        with pytest.raises(ValueError):
            ar.Arrangement.from_rows([[1, 0], [0, 0]])

    def test_proportional(self):
        with pytest.raises(ValueError):
            ar.Arrangement.from_rows([[1, 2], [2, 4]])

    def test_duplicate_labels(self):
        with pytest.raises(ValueError):
            ar.Arrangement.from_rows([[1, 0], [0, 1]], ["a", "a"])


# Orlik-Solomon ----------------------------------------------------------------

class TestOrlikSolomon:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_boolean_is_exterior(self, n):
        a = ar.os_algebra(ar.boolean(n))
        assert a.dim(2) == comb(n, 2)
        assert cd.validate(a) == []

    def test_examples(self):
        assert ar.os_algebra(ar.concurrent_lines(3)).dim(2) == 2
        braid = ar.os_algebra(ar.braid())
        assert (braid.dim(1), braid.dim(2)) == (6, 11)

    @pytest.mark.parametrize("name", sorted(ARRANGEMENTS))
    def test_dims_against_oracles(self, name):
        arr = ARRANGEMENTS[name]
        a = ar.os_algebra(arr)
        assert cd.validate(a) == []
        lattice = sum(f.multiplicity - 1 for f in ar.rank2_flats(arr))
        assert a.dim(2) == lattice == oracle_os_dim2(arr)


# multinets --------------------------------------------------------------------

class TestMultinets:
    def test_pencil(self):
        nets = ar.multinet_enumerate(ar.concurrent_lines(3), 3)
        assert len(nets) == 1 and nets[0].classes == ((0,), (1,), (2,))

    def test_braid(self):
        arr = ar.braid()
        nets = ar.multinet_enumerate(arr, 3)
        assert sum(n.is_local(arr) for n in nets) == 4
        essential = [n for n in nets if not n.is_local(arr)]
        assert len(essential) == 1
        labels = {frozenset(arr.labels[h] for h in c) for c in essential[0].classes}
        assert labels == {frozenset({"12", "34"}), frozenset({"13", "24"}), frozenset({"14", "23"})}

    def test_boolean_empty(self):
        assert ar.multinet_enumerate(ar.boolean(3), 3, max_mult=2) == []

    @pytest.mark.parametrize("name", ["pencil3", "braid", "boolean3", "generic5"])
    def test_against_exhaustive_oracle(self, name):
        arr = ARRANGEMENTS[name]
        got = {as_key(n) for n in ar.multinet_enumerate(arr, 3)}
        assert got == oracle_multinets(arr, 3)

    def test_b3_against_exhaustive_oracle(self):
        arr = ar.b3()
        got = {as_key(n) for n in ar.multinet_enumerate(arr, 3)}
        assert got == oracle_multinets(arr, 3)

    def test_deterministic(self):
        arr = ar.braid()
        assert ar.multinet_enumerate(arr, 3) == ar.multinet_enumerate(arr, 3)

    def test_describe(self):
        arr = ar.concurrent_lines(3)
        d = ar.multinet_enumerate(arr, 3)[0].describe(arr)
        assert d["k"] == 3 and d["local"] is True


class TestPencil:
    def test_concurrent_lines(self):
        arr = ar.concurrent_lines(3)
        p = ar.multinet_to_pencil(ar.multinet_enumerate(arr, 3)[0], arr)
        assert p.constants == {3: (1, 1)}

    def test_braid_net(self):
        arr = ar.braid()
        net = next(n for n in ar.multinet_enumerate(arr, 3) if not n.is_local(arr))
        p = ar.multinet_to_pencil(net, arr)
        # (x1-x2)(x3-x4) - (x1-x3)(x2-x4) + (x1-x4)(x2-x3) = 0
        sign = {frozenset({"12", "34"}): 1, frozenset({"13", "24"}): -1, frozenset({"14", "23"}): 1}
        s = [sign[frozenset(arr.labels[h] for h in c)] for c in net.classes]
        assert p.constants[3] == (Fraction(-s[0], s[2]), Fraction(-s[1], s[2]))
        assert all(r.is_zero() for r in p.residuals())

    def test_not_a_pencil(self):
        arr = ar.braid()
        idx = {l: i for i, l in enumerate(arr.labels)}
        bad = ar.Multinet(
            tuple(range(6)),
            ((idx["12"], idx["13"]), (idx["24"], idx["34"]), (idx["14"], idx["23"])),
            (1,) * 6,
        )
        with pytest.raises(ar.NotAPencilError):
            ar.multinet_to_pencil(bad, arr)

    @pytest.mark.parametrize("name", ["braid", "pencil3", "b3"])
    def test_residuals_vanish(self, name):
        arr = ARRANGEMENTS[name]
        for net in ar.multinet_enumerate(arr, 3, max_mult=2 if name == "b3" else 1):
            assert all(r.is_zero() for r in ar.multinet_to_pencil(net, arr).residuals())


# admissible and Boolean morphisms ---------------------------------------------

class TestMorphisms:
    def test_pencil_image(self):
        arr = ar.concurrent_lines(3)
        model = ar.admissible_morphism(ar.multinet_enumerate(arr, 3)[0], arr)
        span = [ex.vector([1, -1, 0]), ex.vector([0, 1, -1])]
        assert all(ar.in_span(model.image, v) for v in span)
        assert len(model.image) == 2 and model.morphism.validate() == []

    def test_braid_essential_image(self):
        arr = ar.braid()
        os = ar.os_algebra(arr)
        net = next(n for n in ar.multinet_enumerate(arr, 3) if not n.is_local(arr))
        model = ar.admissible_morphism(net, arr, os)
        assert ex.rank(np.stack(model.image, axis=1)) == 2
        assert ar.is_isotropic(os, model.image)
        for x in range(1, 4):
            v = model.image[0] + x * model.image[1]
            assert cd.scalar_resonance_dim(os, v, 1) >= 1

    def test_local_image(self):
        arr = ar.braid()
        net = next(n for n in ar.multinet_enumerate(arr, 3) if n.is_local(arr))
        model = ar.admissible_morphism(net, arr)
        for v in model.image:
            assert sum(v) == 0
            assert all(v[h] == 0 for h in range(len(arr)) if h not in net.base)

    @pytest.mark.parametrize("name", ["braid", "pencil3", "b3"])
    def test_all_images_isotropic(self, name):
        arr = ARRANGEMENTS[name]
        os = ar.os_algebra(arr)
        for net in ar.multinet_enumerate(arr, 3):
            model = ar.admissible_morphism(net, arr, os)
            assert ar.is_isotropic(os, model.image)
            assert cd.morphism_connectivity(model.morphism, 0)

    def test_boolean_identity(self):
        arr = ar.boolean(3)
        phi = ar.boolean_morphism(arr)
        for m in phi.maps:
            assert ex.matrix_equal(m, ex.identity(m.shape[0]))

    @pytest.mark.parametrize("name,kernel", [("pencil3", 1), ("braid", 4)])
    def test_boolean_kernel(self, name, kernel):
        arr = ARRANGEMENTS[name]
        phi = ar.boolean_morphism(arr)
        assert phi.validate() == []
        m2 = phi.maps[2]
        assert m2.shape[1] - ex.rank(m2) == kernel
        assert ex.rank(m2) == m2.shape[0]
        assert ex.rank(phi.maps[1]) == len(arr)


# resonance components ---------------------------------------------------------

class TestResonanceComponents:
    def test_boolean(self):
        assert ar.resonance_components(ar.boolean(3), samples=10) == []

    def test_pencil(self):
        comps = ar.resonance_components(ar.concurrent_lines(3), samples=10)
        assert [c.dim for c in comps] == [2]

    def test_braid(self):
        comps = ar.resonance_components(ar.braid(), ks=(3,), samples=20, seed=3)
        assert len(comps) == 5 and all(c.dim == 2 for c in comps)
        assert sorted(c.kind for c in comps) == ["essential"] + ["local"] * 4

    def test_bogus_component_detected(self):
        arr = ar.boolean(3)
        bogus = ar.ResonanceComponent("local", (ex.vector([1, 0, 0]),), ())
        assert ar.verify_components(arr, [bogus], 5, 0)

    def test_missing_component_detected(self):
        # random points with coordinate sum zero are resonant but covered by no listed component
        failures = ar.verify_components(ar.concurrent_lines(3), [], 200, 0)
        assert failures and all(f["expected"] == "not resonant" for f in failures)

    @given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
    def test_membership_matches_direct_rank(self, v):
        arr = ar.braid()
        os = ar.os_algebra(arr)
        comps = ar.resonance_components(arr, ks=(3,))
        v = ex.vector(v)
        if not any(v):
            return
        assert any(c.contains(v) for c in comps) == (cd.scalar_resonance_dim(os, v, 1) >= 1)


# reduction --------------------------------------------------------------------

class TestReduction:
    def test_non_essential_braid(self):
        arr = ar.braid(4, essential=False)
        assert arr.ambient_dim == 4
        red = ar.reduce_to_rank3(arr, seed=1)
        assert red.ambient_dim == 3
        assert sorted(f.members for f in ar.rank2_flats(red)) == sorted(f.members for f in ar.rank2_flats(arr))
        assert ar.os_algebra(red).dim(2) == 11

    def test_rank3_unchanged(self):
        arr = ar.braid()
        assert ar.reduce_to_rank3(arr) is arr


# naturality under admissible morphisms ----------------------------------------

class TestNaturality:
    @given(st.lists(st.integers(-3, 3), min_size=6, max_size=6), st.booleans())
    def test_pullback_along_essential_net(self, coords, adj):
        arr = ar.braid()
        os = ar.os_algebra(arr)
        net = next(n for n in ar.multinet_enumerate(arr, 3) if not n.is_local(arr))
        phi = ar.admissible_morphism(net, arr, os).morphism
        g = L.preset_lie("sl2")
        theta = L.adjoint(g) if adj else L.standard(g)
        omega = cd.FlatConnection(phi.source, g, ex.matrix([coords[:3], coords[3:]]))
        assert cd.is_flat(omega)
        out = cd.pullback_connection(phi, omega)
        assert cd.is_flat(out)
        h0s = cd.aomoto_cohomology(phi.source, theta, omega, 0)[0]
        h0t = cd.aomoto_cohomology(os, theta, out, 0)[0]
        assert h0s == h0t
        h1s = cd.aomoto_cohomology(phi.source, theta, omega, 1)[0]
        h1t = cd.aomoto_cohomology(os, theta, out, 1)[0]
        assert h1t >= h1s
