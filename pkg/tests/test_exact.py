from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from jumploci import exact as ex
from jumploci.exact import Gaussian

small = st.integers(-6, 6)
fractions = st.builds(Fraction, small, st.integers(1, 4))
gaussians = st.builds(Gaussian, fractions, fractions)


def int_matrix(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def shaped_matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(lambda c: int_matrix(r, c))
    )


def sympy_rank(rows):
    return sympy.Matrix(rows).rank()


class TestScalars:
    def test_parse_fraction_and_integer(self):
        assert ex.parse_scalar("3/4") == Fraction(3, 4)
        assert ex.parse_scalar("-2") == Fraction(-2)
        assert ex.parse_scalar(5) == Fraction(5)

    def test_parse_gaussian_pair(self):
        assert ex.parse_scalar(["1/2", "-3"], "gaussian") == Gaussian(Fraction(1, 2), -3)

    @pytest.mark.parametrize("bad", ["0.5", 0.5, "1e3", "abc"])
    def test_parse_rejects_inexact(self, bad):
        with pytest.raises((ValueError, TypeError)):
            ex.parse_scalar(bad)

    def test_to_scalar_rejects_float(self):
        with pytest.raises((ValueError, TypeError)):
            ex.to_scalar(0.25)

    def test_format_round_trip(self):
        for x in [Fraction(-7, 3), Fraction(0), Fraction(5)]:
            assert ex.parse_scalar(ex.format_scalar(x)) == x
        g = Gaussian(Fraction(1, 3), -2)
        assert ex.parse_scalar(ex.format_scalar(g), "gaussian") == g

    def test_gaussian_i_squared(self):
        i = Gaussian(0, 1)
        assert i * i == -1
        assert (1 + i) * (1 - i) == 2
        assert 1 / i == -i


class TestGaussianProperties:
    @given(gaussians, gaussians)
    def test_conjugation_is_ring_automorphism(self, x, y):
        assert (x * y).conjugate() == x.conjugate() * y.conjugate()
        assert (x + y).conjugate() == x.conjugate() + y.conjugate()
        assert x.conjugate().conjugate() == x

    @given(gaussians)
    def test_inverse(self, x):
        if x:
            assert x * (1 / x) == 1

    @given(gaussians, fractions)
    def test_mixed_arithmetic(self, x, q):
        assert x * q == q * x
        assert x + q - q == x


class TestLinearAlgebra:
    def test_rank_examples(self):
        assert ex.rank(ex.matrix([[1, 2], [2, 4]])) == 1
        assert ex.rank(ex.identity(4)) == 4
        assert ex.rank(ex.zeros(3, 2)) == 0

    def test_gaussian_rank(self):
        i = Gaussian(0, 1)
        assert ex.rank(ex.matrix([[1, i], [i, -1]], "gaussian")) == 1

    def test_rref_first_nonzero_pivot(self):
        r, piv = ex.rref(ex.matrix([[0, 2, 4], [1, 1, 1]]))
        assert piv == [0, 1]
        assert ex.matrix_equal(r, ex.matrix([[1, 0, -1], [0, 1, 2]]))

    @given(shaped_matrices())
    def test_rank_matches_sympy(self, rows):
        assert ex.rank(ex.matrix(rows)) == sympy_rank(rows)

    @given(shaped_matrices())
    def test_rank_nullity(self, rows):
        m = ex.matrix(rows)
        ker = ex.kernel_basis(m)
        assert ex.rank(m) + len(ker) == m.shape[1]
        for v in ker:
            assert not any(m @ v)

    @given(shaped_matrices(4, 4), st.lists(small, min_size=4, max_size=4))
    def test_solve_consistent(self, rows, coeffs):
        m = ex.matrix(rows)
        x = ex.vector(coeffs[: m.shape[1]])
        sol = ex.solve(m, m @ x)
        assert sol is not None
        assert ex.matrix_equal((m @ sol).reshape(-1, 1), (m @ x).reshape(-1, 1))

    def test_solve_inconsistent(self):
        assert ex.solve(ex.matrix([[1, 1], [1, 1]]), ex.vector([0, 1])) is None

    @given(int_matrix(3, 3))
    def test_det_matches_sympy(self, rows):
        assert ex.det(ex.matrix(rows)) == sympy.Matrix(rows).det()

    @given(int_matrix(3, 3))
    def test_inverse(self, rows):
        m = ex.matrix(rows)
        if ex.det(m):
            assert ex.matrix_equal(m @ ex.inverse(m), ex.identity(3))

    def test_nilpotency_and_singularity(self):
        assert ex.nilpotency_and_singularity(ex.matrix([[0, 1], [0, 0]])) == (True, True)
        assert ex.nilpotency_and_singularity(ex.matrix([[1, 0], [0, -1]])) == (False, False)
        assert ex.nilpotency_and_singularity(ex.matrix([[1, 0], [0, 0]])) == (False, True)


class TestMultiPoly:
    names = ("x", "y")

    def test_basic_arithmetic(self):
        x = ex.MultiPoly.var(self.names, "x")
        y = ex.MultiPoly.var(self.names, "y")
        p = (x + y) ** 2 - x * x - 2 * x * y
        assert p == y * y
        assert p.degree() == 2
        assert (x - x).is_zero()

    @given(
        st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=5),
        st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=5),
        fractions,
        fractions,
    )
    def test_evaluation_is_a_homomorphism(self, t1, t2, a, b):
        p = ex.MultiPoly(self.names, {e: Fraction(c) for e, c in t1.items()})
        q = ex.MultiPoly(self.names, {e: Fraction(c) for e, c in t2.items()})
        pt = {"x": a, "y": b}
        assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
        assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)

    def test_evaluate_matches_sympy(self):
        x = ex.MultiPoly.var(self.names, "x")
        y = ex.MultiPoly.var(self.names, "y")
        p = 3 * x * x * y - Fraction(1, 2) * y + 7
        sx, sy = sympy.symbols("x y")
        sp = 3 * sx**2 * sy - sympy.Rational(1, 2) * sy + 7
        for a, b in [(1, 2), (Fraction(-1, 3), 5), (0, 0)]:
            assert p.evaluate({"x": a, "y": b}) == sp.subs({sx: a, sy: b})


def test_numpy_object_arrays_stay_exact():
    m = ex.matrix([["1/3", 0], [0, "1/3"]])
    assert m.dtype == object
    assert (m @ m)[0, 0] == Fraction(1, 9)
    assert isinstance(np.sum(m), Fraction)
