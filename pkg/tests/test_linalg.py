from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taubessel import linalg

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def as_matrix(rows):
    return np.array(rows, dtype=object)


class TestSolve:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda n: st.tuples(
        st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n),
        st.lists(small, min_size=n, max_size=n),
    )))
    def test_exact_solve_roundtrip(self, data):
        rows, rhs = data
        a = as_matrix(rows) + linalg.identity(len(rows)) * 20  # diagonally dominant
        b = np.array(rhs, dtype=object)
        x = linalg.solve(a, b)
        assert all(isinstance(v, Fraction) for v in x)
        assert list(a @ x) == list(b)

    def test_singular_raises(self):
        a = as_matrix([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
        with pytest.raises(linalg.SingularMatrixError):
            linalg.solve(a, np.array([Fraction(1), Fraction(1)], dtype=object))

    def test_mpf_solve_needs_pivoting(self):
        with mpmath.workdps(50):
            a = linalg.to_mpf(as_matrix([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(1)]]))
            x = linalg.solve(a, np.array([mpmath.mpf(2), mpmath.mpf(3)], dtype=object))
            assert x[0] == 1 and x[1] == 2

    def test_inverse_and_matpow(self):
        a = as_matrix([[Fraction(2), Fraction(1)], [Fraction(0), Fraction(3)]])
        inv = linalg.inverse(a)
        assert (a @ inv == linalg.identity(2)).all()
        assert (linalg.matpow(a, 3) == a @ a @ a).all()
        assert (linalg.matpow(a, 0) == linalg.identity(2)).all()


class TestConversions:
    def test_to_fraction_is_exact(self):
        assert linalg.to_fraction("0.1") == Fraction(1, 10)
        assert linalg.to_fraction(mpmath.mpf(0.5)) == Fraction(1, 2)
        assert linalg.to_fraction(3) == 3
        assert linalg.to_fraction(mpmath.mpf(-22)) == -22
        assert linalg.to_fraction(mpmath.mpf("-0.375")) == Fraction(-3, 8)
        with pytest.raises(ValueError):
            linalg.to_fraction(mpmath.inf)

    def test_as_mpf_divides_exactly(self):
        with mpmath.workdps(40):
            assert abs(linalg.as_mpf(Fraction(1, 3)) * 3 - 1) < mpmath.mpf(10) ** -39

    def test_is_exact(self):
        assert linalg.is_exact(as_matrix([Fraction(1), 2]))
        assert not linalg.is_exact(as_matrix([mpmath.mpf(1)]))

    def test_norm_inf(self):
        assert linalg.norm_inf([Fraction(-3), 2]) == 3
        assert linalg.norm_inf([]) == 0
