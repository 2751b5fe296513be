"""Cross-module properties of the built-in problems."""

import mpmath
import pytest

from taubessel.basis import coeffs_to_monomial
from taubessel.newton import bc_interpolant_init, solve_problem
from taubessel.problems import PROBLEMS, build_problem, nusselt
from taubessel.taucore import Add, Deriv, Integ, Known, Mul, Scale, Unknown, tau_project, walk

NODE_TYPES = (Add, Deriv, Integ, Known, Mul, Scale, Unknown)


@pytest.fixture(scope="module")
def solved():
    out = {}
    for name in PROBLEMS:
        problem = build_problem(name)
        out[name] = (problem, solve_problem(problem))
    return out


class TestSolutions:
    @pytest.mark.parametrize("name", list(PROBLEMS))
    def test_converged_within_tolerance(self, solved, name):
        _, report = solved[name]
        assert report.converged and report.residual_norm <= report.tol

    @pytest.mark.parametrize("name", ["squeezing-flow", "troesch"])
    def test_bc_rows_hold_to_tolerance(self, solved, name):
        problem, report = solved[name]
        system = tau_project(problem)
        res = system.residual(problem.join(report.state))
        for r in system.replaced:
            assert abs(res[r]) <= report.tol

    @pytest.mark.parametrize("name", ["squeezing-flow", "lane-emden-type"])
    def test_residual_history_monotone_where_it_holds(self, solved, name):
        h = solved[name][1].residual_norm_history
        assert all(b <= a for a, b in zip(h, h[1:]))

    @pytest.mark.xfail(strict=True, reason=(
        "the line search tests the simplified Newton correction in the weighted L2 function norm; "
        "the coefficient sup-norm of R may grow on intermediate steps"))
    @pytest.mark.parametrize("name", ["abel", "lane-emden-standard", "troesch"])
    def test_residual_history_monotone_everywhere(self, solved, name):
        h = solved[name][1].residual_norm_history
        assert all(b <= a for a, b in zip(h, h[1:]))

    def test_reproducible(self, solved):
        problem, report = solved["troesch"]
        again = solve_problem(build_problem("troesch"))
        with problem.basis.workdps():
            assert [mpmath.nstr(v, 60) for v in report.state["y"]] == [mpmath.nstr(v, 60) for v in again.state["y"]]


class TestEmbeddedInitialValues:
    @pytest.mark.xfail(strict=True, reason=(
        "the integral matrix's top row is a least-squares projection that does not vanish at x = a, "
        "so y(a) = 1 holds only to projection accuracy"))
    @pytest.mark.parametrize("name", ["lane-emden-type", "lane-emden-standard"])
    def test_initial_value_is_an_identity(self, name):
        problem = build_problem(name, 6)
        state = {"a": [mpmath.mpf(k + 1) for k in range(7)]}
        with problem.basis.workdps():
            assert problem.expansion(state, "y")(0) == 1

    def test_abel_initial_value_converges(self):
        gaps = []
        for n in (6, 10, 14):
            problem = build_problem("abel", n)
            report = solve_problem(problem)
            with problem.basis.workdps():
                gaps.append(abs(problem.expansion(report.state, "y")(0)))
        assert gaps[0] > gaps[1] > gaps[2]


class TestTrees:
    @pytest.mark.parametrize("name", list(PROBLEMS))
    def test_only_polynomial_nodes(self, name):
        problem = build_problem(name, 6)
        for eq in problem.equations:
            assert all(isinstance(node, NODE_TYPES) for node in walk(eq))

    def test_troesch_series_has_odd_powers_only(self):
        problem = build_problem("troesch", 6, params={"sinh_order": "7"})
        eq = problem.equations[0]

        def degrees(node):
            if isinstance(node, Unknown):
                return {1}
            if isinstance(node, Known):
                return {0}
            if isinstance(node, Mul):
                return {a + b for a in degrees(node.left) for b in degrees(node.right)}
            if isinstance(node, Add):
                return set().union(*(degrees(t) for t in node.terms))
            return degrees(node.child)

        depths = degrees(eq)
        assert depths == {1, 3, 5, 7}


class TestInitialGuess:
    def test_troesch_starts_from_line(self):
        problem = build_problem("troesch", 6)
        state = bc_interpolant_init(problem)
        with problem.basis.workdps():
            mono = coeffs_to_monomial(problem.basis, state["y"])
            assert abs(mono[1] - 1) < mpmath.mpf(10) ** -50
            assert all(abs(m) < mpmath.mpf(10) ** -50 for i, m in enumerate(mono) if i != 1)

    def test_integral_formulations_start_at_zero(self):
        state = bc_interpolant_init(build_problem("lane-emden-standard", 6))
        assert all(v == 0 for v in state["a"])


class TestNusselt:
    def test_linear_in_theta(self, solved):
        problem, report = solved["squeezing-flow"]
        with problem.basis.workdps():
            doubled = dict(report.state)
            doubled["theta"] = 2 * report.state["theta"]
            assert abs(nusselt(problem, doubled) - 2 * nusselt(problem, report.state)) < mpmath.mpf(10) ** -50


class TestParameterContinuity:
    @pytest.mark.parametrize("key,values", [
        ("A", ("-0.5", "-0.25", "0", "0.25", "0.5")),
        ("S", ("-1", "-0.5", "0", "0.5", "1")),
    ])
    def test_squeezing_flow_sweeps(self, key, values):
        samples = []
        for v in values:
            problem = build_problem("squeezing-flow", 15, params={key: v})
            report = solve_problem(problem)
            with problem.basis.workdps():
                samples.append((problem.expansion(report.state, "df")(0.5), problem.expansion(report.state, "theta")(0.5)))
        # neighbouring parameter values give neighbouring profiles
        for (f1, t1), (f2, t2) in zip(samples, samples[1:]):
            assert abs(f1 - f2) < 0.5 and abs(t1 - t2) < 0.05
