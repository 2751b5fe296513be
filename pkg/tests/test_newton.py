from fractions import Fraction

import mpmath
import pytest

from taubessel import linalg
from taubessel.basis import BasisSpec, coeffs_to_monomial
from taubessel.newton import (
    NewtonConfig,
    NotConverged,
    SingularJacobian,
    bc_interpolant_init,
    solve,
    solve_problem,
)
from taubessel.taucore import BoundaryCondition, TauProblem, Unknown, known_polynomial, tau_project

SPEC = BasisSpec(4)
u = Unknown("u")


def affine_problem():
    # u'' = 2 + 6x with u(0) = 0, u(1) = 2: u = x^2 + x^3
    return TauProblem(
        SPEC, ("u",), (u.diff(2) - known_polynomial(SPEC, [2, 6]),),
        bcs=(BoundaryCondition("u", 0, 0), BoundaryCondition("u", 1, 2)),
    )


def sqrt_problem(target=2):
    return TauProblem(SPEC, ("u",), (u * u - known_polynomial(SPEC, [target]),))


class TestConfig:
    def test_defaults(self):
        cfg = NewtonConfig()
        assert cfg.max_iter == 50 and cfg.init == "bc" and cfg.tol is None

    @pytest.mark.parametrize("kwargs", [dict(max_iter=0), dict(tol=0), dict(tol=-1)])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            NewtonConfig(**kwargs)


class TestNewton:
    def test_affine_problem_solves_in_one_step(self):
        report = solve_problem(affine_problem(), NewtonConfig(init="zero"))
        assert report.converged and report.iterations == 1
        mono = coeffs_to_monomial(SPEC, report.state["u"])
        with SPEC.workdps():
            for got, want in zip(mono, [0, 0, 1, 1, 0]):
                assert abs(got - want) < mpmath.mpf(10) ** -50

    def test_default_tolerance_follows_precision(self):
        report = solve_problem(affine_problem())
        with SPEC.workdps():
            assert abs(report.tol / mpmath.mpf(10) ** (15 - SPEC.precision_digits) - 1) < mpmath.mpf(10) ** -50
        assert report.residual_norm <= report.tol

    def test_quadratic_convergence(self):
        problem = sqrt_problem()
        start = {"u": [mpmath.mpf(1)] + [mpmath.mpf(0)] * 4}
        report = solve_problem(problem, NewtonConfig(init=start, tol=mpmath.mpf(10) ** -60))
        with SPEC.workdps():
            assert abs(report.state["u"][0] - mpmath.sqrt(2)) < mpmath.mpf(10) ** -55
            h = report.residual_norm_history
            # e_{k+1} <= C e_k^2 once the iteration is close
            for a, b in zip(h[2:], h[3:]):
                if b > 0:
                    assert b <= 10 * a**2
        assert report.init == "given"

    def test_zero_start_is_singular_for_squares(self):
        with pytest.raises(SingularJacobian):
            solve_problem(sqrt_problem(), NewtonConfig(init="zero"))

    def test_not_converged_carries_report(self):
        start = {"u": [mpmath.mpf(100)] + [mpmath.mpf(0)] * 4}
        with pytest.raises(NotConverged) as info:
            solve_problem(sqrt_problem(), NewtonConfig(init=start, max_iter=2))
        assert info.value.report.iterations == 2
        assert len(info.value.report.residual_norm_history) == 3

    def test_flat_init_length_checked(self):
        with pytest.raises(ValueError):
            solve_problem(affine_problem(), NewtonConfig(init=[1, 2]))

    def test_unknown_init_mode(self):
        with pytest.raises(ValueError):
            solve_problem(affine_problem(), NewtonConfig(init="random"))

    def test_condition_estimate_reported(self):
        report = solve(tau_project(affine_problem()))
        assert report.condition_estimate > 1


class TestBcInit:
    def test_interpolant_meets_conditions(self):
        problem = TauProblem(
            SPEC, ("u",), (u,),
            bcs=(BoundaryCondition("u", 0, 1), BoundaryCondition("u", 0, 2, deriv_order=1),
                 BoundaryCondition("u", 1, 0)),
        )
        state = bc_interpolant_init(problem)
        mono = coeffs_to_monomial(SPEC, [linalg.to_fraction(v) for v in state["u"]])
        # 1 + 2x - 3x^2
        assert [round(float(m), 12) for m in mono] == [1, 2, -3, 0, 0]

    def test_bc_init_is_default(self):
        report = solve_problem(affine_problem())
        assert report.init == "bc"

    def test_singular_hermite_drops_derivatives(self):
        problem = TauProblem(
            SPEC, ("u",), (u,),
            bcs=(BoundaryCondition("u", 0, 1, deriv_order=1), BoundaryCondition("u", 1, 1, deriv_order=1)),
        )
        state = bc_interpolant_init(problem)
        assert all(v == 0 for v in state["u"])

    def test_unconstrained_unknown_starts_at_zero(self):
        state = bc_interpolant_init(sqrt_problem())
        assert all(v == 0 for v in state["u"])
