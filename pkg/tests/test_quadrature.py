import mpmath
import pytest

from taubessel.quadrature import gauss_legendre, integrate


class TestGaussLegendre:
    @pytest.mark.parametrize("n", [1, 2, 5, 8, 13])
    def test_exact_for_degree_2n_minus_1(self, n):
        dps = 40
        with mpmath.workdps(dps):
            for k in range(2 * n):
                got = integrate(lambda x: x**k, 0, 1, n, dps)
                assert abs(got - mpmath.mpf(1) / (k + 1)) < mpmath.mpf(10) ** (-dps + 3)

    def test_weights_sum_to_two_and_nodes_symmetric(self):
        xs, ws = gauss_legendre(9, 50)
        with mpmath.workdps(50):
            assert abs(mpmath.fsum(ws) - 2) < mpmath.mpf(10) ** -48
            for a, b in zip(xs, reversed(xs)):
                assert abs(a + b) < mpmath.mpf(10) ** -48

    def test_smooth_integrand(self):
        with mpmath.workdps(50):
            got = integrate(mpmath.exp, 0, 1, 30, 50)
            assert abs(got - (mpmath.e - 1)) < mpmath.mpf(10) ** -45

    def test_rejects_zero_nodes(self):
        with pytest.raises(ValueError):
            gauss_legendre(0, 30)
