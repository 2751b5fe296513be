from fractions import Fraction

import mpmath
import pytest

from taubessel.newton import NewtonConfig, solve_problem
from taubessel.problems import PROBLEMS, build_problem, nusselt, reference_tables, table
from taubessel.problems.lane_emden import exact_lane_emden_type
from taubessel.problems.squeezing_flow import build_squeezing_flow
from taubessel.problems.troesch import build_troesch
from taubessel.taucore import residual_at

EPS = mpmath.mpf(10) ** -40


class TestRegistry:
    def test_ids(self):
        assert set(PROBLEMS) == {"squeezing-flow", "lane-emden-type", "abel", "lane-emden-standard", "troesch"}

    def test_unknown_problem(self):
        with pytest.raises(KeyError):
            build_problem("heat")

    def test_min_order(self):
        with pytest.raises(ValueError):
            build_problem("squeezing-flow", 3)

    @pytest.mark.parametrize("name", ["abel", "lane-emden-type", "lane-emden-standard"])
    def test_parameterless_problems_reject_params(self, name):
        with pytest.raises(KeyError):
            build_problem(name, 4, params={"x": "1"})

    def test_default_orders_match_tables(self):
        for tbl in reference_tables():
            assert PROBLEMS[tbl.problem].default_n == tbl.n


class TestInitialValues:
    @staticmethod
    def ic_gap(name, n):
        problem = build_problem(name, n)
        report = solve_problem(problem)
        with problem.basis.workdps():
            y0 = problem.expansion(report.state, "y")(0)
            dy0 = problem.expansion(report.state, "dy")(0)
            return max(abs(y0 - 1), abs(dy0))

    @pytest.mark.parametrize("name", ["lane-emden-type", "lane-emden-standard"])
    def test_embedded_conditions_converge_with_n(self, name):
        # the integral matrix's top row is a projection, so y(0) = 1 is not exact
        gaps = [self.ic_gap(name, n) for n in (8, 12, 16)]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_embedded_conditions_at_table_order(self):
        assert self.ic_gap("lane-emden-standard", 12) < mpmath.mpf("1e-9")

    def test_lane_emden_type_converges_to_exp(self):
        problem = build_problem("lane-emden-type", 16)
        report = solve_problem(problem)
        with problem.basis.workdps():
            y = problem.expansion(report.state, "y")
            err = max(abs(y(x) / exact_lane_emden_type(x) - 1) for x in ("0.5", "1", "2"))
        assert err < mpmath.mpf("1e-2")


class TestTroesch:
    def test_gamma_zero_gives_line(self):
        problem = build_troesch(6, gamma=0)
        report = solve_problem(problem)
        with problem.basis.workdps():
            y = problem.expansion(report.state, "y")
            for x in ("0.1", "0.5", "0.9"):
                assert abs(y(x) - mpmath.mpf(x)) < EPS

    def test_linear_truncation_solves_in_one_step(self):
        problem = build_troesch(8, sinh_order=1)
        report = solve_problem(problem, NewtonConfig(init="zero"))
        assert report.iterations == 1

    @pytest.mark.parametrize("kwargs", [dict(sinh_order=2), dict(sinh_order=0), dict(gamma=-1)])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            build_troesch(6, **kwargs)

    def test_residual_uses_true_sinh(self):
        problem = build_troesch(10)
        report = solve_problem(problem)
        with problem.basis.workdps():
            r = residual_at(problem, report.state, mpmath.mpf("0.9"))[0]
        # truncating sinh at order 5 leaves a visible gap near x = 1
        assert mpmath.mpf("1e-8") < abs(r) < mpmath.mpf("1e-5")


class TestSqueezingFlow:
    def test_no_prandtl_gives_linear_temperature(self):
        problem = build_squeezing_flow({"Pr": 0}, n=8)
        report = solve_problem(problem)
        with problem.basis.workdps():
            theta = problem.expansion(report.state, "theta")
            for x in ("0.2", "0.7"):
                assert abs(theta(x) - (1 - mpmath.mpf(x))) < EPS
            assert abs(nusselt(problem, report.state) - 1) < EPS

    def test_boundary_values(self):
        problem = build_squeezing_flow(n=8)
        report = solve_problem(problem)
        with problem.basis.workdps():
            f = problem.expansion(report.state, "f")
            df = problem.expansion(report.state, "df")
            assert abs(f(0) - mpmath.mpf("0.1")) < EPS and abs(f(1) - mpmath.mpf("0.5")) < EPS
            assert abs(df(0)) < EPS and abs(df(1)) < EPS

    def test_float_params_become_exact(self):
        problem = build_squeezing_flow({"S": 0.3}, n=6)
        assert problem.params["S"] == Fraction(3, 10)

    @pytest.mark.parametrize("params", [{"Pr": -1}, {"Ec": -0.1}, {"Q": 1}])
    def test_validation(self, params):
        with pytest.raises((ValueError, KeyError)):
            build_squeezing_flow(params, n=6)


class TestReferenceTables:
    def test_seven_tables(self):
        assert [t.table for t in reference_tables()] == list(range(1, 8))

    def test_lookup(self):
        assert table(7).problem == "troesch"
        with pytest.raises(KeyError):
            table(8)

    def test_sources_and_values_parse(self):
        for tbl in reference_tables():
            assert "present" in tbl.sources()
            for row in tbl.rows:
                mpmath.mpf(row.value)
                if row.x is not None:
                    Fraction(row.x)

    def test_known_entries(self):
        assert table(1).column("present")[0].value == "0.384801280290557"
        assert table(7).params["gamma"] == "0.5"
        assert len(table(7).column("present")) == 9

    def test_nusselt_rows_carry_parameters(self):
        for row in table(3).column("present"):
            assert dict(row.params)
