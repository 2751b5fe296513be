"""Small hand-checkable instances of each building block."""

from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from taubessel import linalg
from taubessel.approx import error_bound, project_function, project_polynomial
from taubessel.basis import BasisSpec, build_change_matrices, coeffs_to_monomial, eval_basis, monomial_to_coeffs
from taubessel.newton import solve_problem
from taubessel.opmat import build_c_tilde, build_moment, build_opmatrices, build_v_tilde
from taubessel.problems import build_problem
from taubessel.quadrature import integrate
from taubessel.taucore import (
    AlgebraicSystem,
    BoundaryCondition,
    TauProblem,
    Unknown,
    apply_bcs,
    flatten,
    known_from,
    known_polynomial,
    residual_at,
)

UNIT = BasisSpec(2)


def mat(rows):
    return [[F(v) for v in row] for row in rows]


def as_lists(a):
    return [list(row) for row in a]


class TestChangeOfBasis:
    def test_inverse_n2(self):
        assert as_lists(build_change_matrices(UNIT).m_inv) == mat([[1, 0, 2], [0, 2, 0], [0, 0, 8]])

    @pytest.mark.parametrize("n,a,b", [(4, 0, 1), (6, 1, 3)])
    def test_triangular_structure(self, n, a, b):
        ch = build_change_matrices(BasisSpec(n, a, b))
        for i in range(n + 1):
            assert ch.y_mat[i, i] != 0 and ch.s_mat[i, i] != 0
            for j in range(i):
                assert ch.y_mat[i, j] == 0
                assert ch.s_mat[j, i] == 0


class TestDerivative:
    def test_d_n2(self):
        assert as_lists(build_opmatrices(UNIT).d_mat) == mat([[0, -1, 0], ["1/2", 0, 1], [0, "1/2", 0]])

    def test_constant_has_zero_derivative(self):
        c = np.array([F(1), F(0), F(2)], dtype=object)
        assert list(build_opmatrices(UNIT).d_mat.T @ c) == [0, 0, 0]

    def test_high_powers_vanish(self):
        d = build_opmatrices(BasisSpec(3)).d_mat
        assert all(v == 0 for v in linalg.matpow(d, 4).reshape(-1))


class TestMomentsAndGram:
    def test_hilbert(self):
        h = build_moment(BasisSpec(3))
        assert all(h[i, j] == F(1, i + j + 1) for i in range(4) for j in range(4))

    def test_symmetric_interval_odd_moment(self):
        assert build_moment(BasisSpec(2, -1, 1))[0, 1] == 0

    def test_k_n1(self):
        assert as_lists(build_opmatrices(BasisSpec(1)).k_mat) == mat([[1, "1/4"], ["1/4", "1/12"]])

    def test_k_positive_definite(self):
        k = build_opmatrices(BasisSpec(6, 0, 3)).k_mat
        rng = np.random.default_rng(3)
        for _ in range(20):
            x = np.array([F(int(v)) for v in rng.integers(-5, 6, 7)], dtype=object)
            if any(x):
                assert x @ k @ x > 0


class TestIntegral:
    def test_l_n2(self):
        assert as_lists(build_opmatrices(UNIT).l_mat) == mat([[0, 1, 0], [0, 0, "1/2"], ["1/60", "-1/5", "1/2"]])

    def test_integral_of_q1(self):
        # int_0^x Q1 = x^2 / 4 = 2 Q2
        assert list(build_opmatrices(UNIT).i_mat[1]) == [0, 0, 2]

    def test_top_row_residual_orthogonal(self):
        spec = BasisSpec(4, 1, 2)
        top = build_opmatrices(spec).l_mat[4]
        n = 4
        # x^(N+1)/(N+1) - a^(N+1)/(N+1) minus its representation
        diff = [-c for c in top] + [F(1, n + 1)]
        diff[0] -= spec.a ** (n + 1) / (n + 1)
        from taubessel.opmat import moment

        for i in range(n + 1):
            assert sum(c * moment(spec, i + m) for m, c in enumerate(diff)) == 0

    def test_integral_from_left_end_nearly_vanishes(self):
        spec = BasisSpec(8)
        i_mat = build_opmatrices(spec).i_mat
        q0 = eval_basis(spec, 0)
        c = np.array([F(k + 1, 3) for k in range(9)], dtype=object)
        with spec.workdps():
            val = mpmath.fsum(linalg.as_mpf(v) * q for v, q in zip(i_mat.T @ c, q0))
        assert abs(val) < mpmath.mpf("1e-6")


class TestProductMatrices:
    def test_v_tilde_of_one(self):
        assert as_lists(build_v_tilde(UNIT, [F(1), F(0), F(0)])) == as_lists(linalg.identity(3))

    def test_v_tilde_of_x(self):
        assert as_lists(build_v_tilde(BasisSpec(1), [F(0), F(1)])) == mat([[0, 1], ["-1/6", 1]])

    def test_v_tilde_scalar(self):
        assert as_lists(build_v_tilde(UNIT, [F(3), F(0), F(0)])) == as_lists(3 * linalg.identity(3))

    def test_c_tilde_of_one(self):
        one = monomial_to_coeffs(BasisSpec(3), [1])
        assert as_lists(build_c_tilde(BasisSpec(3), one)) == as_lists(linalg.identity(4))

    def test_linearity(self):
        spec = BasisSpec(3)
        c1 = np.array([F(1), F(2), F(0), F(-1)], dtype=object)
        c2 = np.array([F(0), F(1, 2), F(3), F(1)], dtype=object)
        lhs = build_c_tilde(spec, 2 * c1 - 3 * c2)
        rhs = 2 * build_c_tilde(spec, c1) - 3 * build_c_tilde(spec, c2)
        assert as_lists(lhs) == as_lists(rhs)


class TestProjections:
    def test_x_is_two_q1(self):
        assert list(project_polynomial(UNIT, [0, 1]).coeffs.coeffs) == [0, 2, 0]

    def test_basis_member_projects_to_unit_vector(self):
        spec = BasisSpec(5)
        q3 = list(build_change_matrices(spec).m_mat[3])
        assert list(project_polynomial(spec, q3).coeffs.coeffs) == [0, 0, 0, 1, 0, 0]

    def test_cube_matches_top_integral_row(self):
        ops, ch = build_opmatrices(UNIT), build_change_matrices(UNIT)
        expected = ch.m_inv.T @ ops.l_mat[2]
        assert list(project_polynomial(UNIT, [0, 0, 0, F(1, 3)]).coeffs.coeffs) == list(expected)

    def test_sin_at_twenty_points(self):
        spec = BasisSpec(10)
        res = project_function(spec, mpmath.sin)
        with spec.workdps():
            worst = max(abs(res.coeffs(x) - mpmath.sin(x)) for x in mpmath.linspace(0, 1, 20))
        assert worst < mpmath.mpf("1e-11")

    def test_zero_function(self):
        res = project_function(BasisSpec(4), lambda x: mpmath.mpf(0))
        assert all(c == 0 for c in res.coeffs.coeffs) and res.residual_norm == 0

    def test_orthogonality_and_idempotence(self):
        spec = BasisSpec(5)
        res = project_polynomial(spec, [1, 0, 0, 0, 0, 0, 0, 1])
        again = project_polynomial(spec, list(coeffs_to_monomial(spec, res.coeffs.coeffs)))
        assert list(again.coeffs.coeffs) == list(res.coeffs.coeffs)
        resid = [F(1), 0, 0, 0, 0, 0, 0, F(1)]
        for k, c in enumerate(coeffs_to_monomial(spec, res.coeffs.coeffs)):
            resid[k] -= c
        from taubessel.opmat import moment

        for i in range(6):
            assert sum(c * moment(spec, i + m) for m, c in enumerate(resid)) == 0

    def test_error_bound_values(self):
        with mpmath.workdps(30):
            assert abs(error_bound(0, 1, 1) - 1 / mpmath.sqrt(3)) < mpmath.mpf(10) ** -25
            for n in range(6):
                ratio = error_bound(n + 1, 1, 1) / error_bound(n, 1, 1)
                assert abs(ratio - mpmath.sqrt(mpmath.mpf(2 * n + 3) / (2 * n + 5)) / (n + 2)) < mpmath.mpf(10) ** -25


class TestFlattenExamples:
    def test_unknown_is_identity(self):
        c = [F(1), F(2), F(3)]
        assert list(flatten(UNIT, Unknown("f"), {"f": c})) == c

    def test_derivative_of_known_constant(self):
        assert list(flatten(UNIT, known_from(np.array([F(1), F(0), F(2)], dtype=object)).diff(1), {})) == [0, 0, 0]

    def test_x_times_x(self):
        spec = BasisSpec(3)
        x = known_polynomial(spec, [0, 1])
        assert list(flatten(spec, x * x, {})) == list(monomial_to_coeffs(spec, [0, 0, 1]))

    def test_linear_jacobian_is_constant(self):
        spec = BasisSpec(3)
        a = Unknown("a")
        system = AlgebraicSystem(TauProblem(spec, ("a",), (a.diff(2),)))
        d2 = linalg.matpow(build_opmatrices(spec).d_mat, 2).T
        for state in ([0] * 4, [1, -2, 3, 5]):
            jac = system.jacobian(state)
            assert all(abs(j - linalg.as_mpf(e)) < mpmath.mpf(10) ** -50
                       for j, e in zip(jac.reshape(-1), d2.reshape(-1)))


class TestBcSplicing:
    def test_bc_row_at_left_end(self):
        bc = BoundaryCondition("f", 0, F(1, 10))
        assert list(bc.row(UNIT)) == [1, 0, 0]

    def test_no_bcs_leaves_system_unchanged(self):
        f = Unknown("f")
        system = AlgebraicSystem(TauProblem(UNIT, ("f",), (f.diff(1),)))
        assert apply_bcs(system, ()).replaced == {}

    def test_squeezing_flow_block_counts(self):
        from taubessel.taucore import tau_project

        system = tau_project(build_problem("squeezing-flow", 6))
        rows = sorted(system.replaced)
        assert rows == [3, 4, 5, 6, 12, 13]


class TestTabulatedResiduals:
    def test_squeezing_flow_at_0_2(self):
        problem = build_problem("squeezing-flow")
        report = solve_problem(problem)
        r = residual_at(problem, report.state, F(1, 5))[0]
        assert abs(abs(r) / mpmath.mpf("1.39535e-12") - 1) < mpmath.mpf("1e-3")

    def test_troesch_at_0_1(self):
        problem = build_problem("troesch")
        report = solve_problem(problem)
        r = residual_at(problem, report.state, F(1, 10))[0]
        assert abs(abs(r) / mpmath.mpf("3.18e-13") - 1) < mpmath.mpf("1e-2")
