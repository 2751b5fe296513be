"""Golden-table and property checks, shared by the test-suite and ``taubessel verify``.

Every check returns a :class:`CriterionResult`; :func:`run_criteria` runs a
filtered subset and never lets one failure stop the rest.
"""

from __future__ import annotations

import functools
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import linalg
from .approx import error_bound, project_function, project_polynomial
from .basis import BasisSpec, build_change_matrices, coeffs_to_monomial, eval_basis, monomial_to_coeffs
from .newton import NewtonConfig, SolveReport, solve
from .opmat import build_c_tilde, build_opmatrices
from .problems import (
    build_problem,
    exact_lane_emden_type,
    nusselt,
    table,
)
from .problems.reference import ReferenceTable
from .quadrature import gauss_legendre
from .taucore import (
    AlgebraicSystem,
    BoundaryCondition,
    TauProblem,
    Unknown,
    known_polynomial,
    residual_at,
    tau_project,
)


@dataclass
class Sample:
    x: object
    computed: mpmath.mpf
    reference: mpmath.mpf
    diff: mpmath.mpf
    residual: mpmath.mpf | None = None


@dataclass
class ComparisonReport:
    """Computed values against one reference column."""

    samples: list[Sample]
    tolerance: mpmath.mpf
    converged: bool = True
    relative: bool = False

    @property
    def max_abs_diff(self) -> mpmath.mpf:
        return max((s.diff for s in self.samples), default=mpmath.mpf(0))

    @property
    def max_abs_residual(self) -> mpmath.mpf | None:
        res = [abs(s.residual) for s in self.samples if s.residual is not None]
        return max(res) if res else None

    @property
    def passed(self) -> bool:
        return self.converged and self.max_abs_diff <= self.tolerance


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.key:<22} {self.title}: {self.detail} [{self.seconds:.1f}s]"


def _mp(x) -> mpmath.mpf:
    return linalg.as_mpf(linalg.to_fraction(x))


def _fmt(x, digits: int = 3) -> str:
    return mpmath.nstr(x, digits)


def solve_reference(tbl: ReferenceTable, precision: int = 60, params: dict | None = None) -> tuple[TauProblem, SolveReport]:
    merged = dict(tbl.params)
    merged.update(params or {})
    problem = build_problem(tbl.problem, tbl.n, precision, merged)
    return problem, solve(tau_project(problem), NewtonConfig())


def compare_table(
    problem: TauProblem,
    report: SolveReport,
    tbl: ReferenceTable,
    source: str = "present",
    tolerance="1e-12",
    *,
    relative: bool = False,
    quantity: str | None = None,
    residuals: bool = True,
) -> ComparisonReport:
    """Sample ``quantity`` at the rows of ``tbl[source]`` and diff against them."""
    quantity = quantity or tbl.quantity
    spec = problem.basis
    out = []
    with spec.workdps():
        expansion = problem.expansion(report.state, quantity)
        index = 0 if quantity in ("f", "df") else 1
        for row in tbl.column(source):
            x = _mp(row.x)
            ref = _mp(row.value)
            val = expansion(x)
            diff = abs(val - ref) / abs(ref) if relative else abs(val - ref)
            res = None
            if residuals:
                per_eq = residual_at(problem, report.state, x)
                res = per_eq[index] if len(per_eq) > 1 else per_eq[0]
            out.append(Sample(row.x, val, ref, diff, res))
        return ComparisonReport(out, _mp(tolerance), report.converged, relative)


# ---------------------------------------------------------------------------
# golden tables


def _table4(n: int, tolerance: str):
    def run():
        tbl = table(4)
        problem = build_problem("lane-emden-type", n, 60)
        report = solve(tau_project(problem))
        with problem.basis.workdps():
            exact = ReferenceTable(4, tbl.problem, "y", n, tuple(
                type(r)(r.x, mpmath.nstr(exact_lane_emden_type(_mp(r.x)), problem.basis.working_digits), "exact")
                for r in tbl.column("exact")
            ))
        cmp = compare_table(problem, report, exact, "exact", tolerance, relative=True, residuals=False)
        worst = max(cmp.samples, key=lambda s: s.diff)
        return cmp.passed, f"N={n}: max rel error {_fmt(cmp.max_abs_diff)} at x={worst.x} (limit {tolerance})", {
            "max_rel_error": cmp.max_abs_diff
        }

    return run


def _tables12():
    problem, report = solve_reference(table(1))
    parts, ok = [], True
    data = {}
    for num, qty in ((1, "df"), (2, "theta")):
        cmp = compare_table(problem, report, table(num), "present", "1e-12", quantity=qty)
        res_ok = cmp.max_abs_residual <= _mp("1e-11")
        ok = ok and cmp.passed and res_ok
        parts.append(f"{qty} max diff {_fmt(cmp.max_abs_diff)}, max |Res| {_fmt(cmp.max_abs_residual)}")
        data[qty] = cmp
    return ok, "; ".join(parts) + " (limits 1e-12, 1e-11)", data


@functools.lru_cache(maxsize=1)
def nusselt_rows(precision: int = 60) -> tuple:
    """``(row, -theta'(0), -theta'(1))`` for every present-method row of Table 3."""
    tbl = table(3)
    out = []
    for row in tbl.column("present"):
        params = dict(tbl.params)
        params.update(dict(row.params))
        problem = build_problem("squeezing-flow", tbl.n, precision, params)
        report = solve(tau_project(problem))
        with problem.basis.workdps():
            out.append((row, -problem.expansion(report.state, "dtheta")(0), nusselt(problem, report.state)))
    return tuple(out)


def _table3(identification: str):
    def run():
        worst, pr0 = mpmath.mpf(0), None
        for row, lower, upper in nusselt_rows():
            nu = lower if identification == "lower" else upper
            worst = max(worst, abs(nu - _mp(row.value)))
            if dict(row.params)["Pr"] == "0.0":
                pr0 = abs(nu - 1)
        ok = worst <= _mp("1e-10") and pr0 <= _mp("1e-14")
        formula = "-theta'(0)" if identification == "lower" else "-theta'(1)"
        return ok, f"Nu = {formula}: max diff {_fmt(worst)} over 9 rows, |Nu(Pr=0) - 1| = {_fmt(pr0)} (limits 1e-10, 1e-14)", {
            "max_diff": worst
        }

    return run


def _table5():
    problem, report = solve_reference(table(5))
    cmp = compare_table(problem, report, table(5), "present", "1e-9")
    res = {s.x: abs(s.residual) for s in cmp.samples}
    ratio = res["0.4"] / _mp("7.35610e-6")
    ok = cmp.passed and cmp.max_abs_residual <= _mp("1e-4") and 1 / mpmath.mpf(3) <= ratio <= 3
    return ok, (
        f"max diff {_fmt(cmp.max_abs_diff)} (limit 1e-9), max |Res| {_fmt(cmp.max_abs_residual)} (limit 1e-4), "
        f"|Res(0.4)| = {_fmt(res['0.4'])} ({_fmt(ratio)}x printed)"
    ), {"cmp": cmp}


def _table6():
    problem, report = solve_reference(table(6))
    tbl = table(6)
    horedt = compare_table(problem, report, tbl, "Horedt", "5e-8", residuals=False)
    present = compare_table(problem, report, tbl, "present", "1e-12", residuals=False)
    ok = horedt.passed and present.passed
    return ok, (
        f"vs Horedt max diff {_fmt(horedt.max_abs_diff)} (limit 5e-8), "
        f"vs 15-digit column {_fmt(present.max_abs_diff)} (limit 1e-12)"
    ), {"horedt": horedt, "present": present}


def _table7():
    problem, report = solve_reference(table(7))
    tbl = table(7)
    cmp = compare_table(problem, report, tbl, "present", "1e-12")
    printed = {r.x: _mp(r.value) for r in tbl.column("residual")}
    worst_ratio = max(abs(s.residual) / printed[s.x] for s in cmp.samples)
    ok = cmp.passed and worst_ratio <= 10
    return ok, f"max diff {_fmt(cmp.max_abs_diff)} (limit 1e-12), worst |Res|/printed {_fmt(worst_ratio)} (limit 10)", {
        "cmp": cmp
    }


# ---------------------------------------------------------------------------
# properties

INTERVALS = ((0, 1), (0, 3), (1, 2))


def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def check_exactness(max_n: int = 12, seed: int = 0) -> list[str]:
    """D- and I-exactness on random rational polynomials; returns failure messages."""
    rng = random.Random(seed)
    failures = []
    for a, b in INTERVALS:
        for n in range(max_n + 1):
            spec = BasisSpec(n, a, b)
            ops = build_opmatrices(spec)
            mono = [_rand_fraction(rng) for _ in range(n + 1)]
            c = monomial_to_coeffs(spec, mono)
            deriv = coeffs_to_monomial(spec, ops.d_mat.T @ c)
            want = [k * mono[k] for k in range(1, n + 1)] + [Fraction(0)]
            if list(deriv) != want:
                failures.append(f"D on N={n} [{a},{b}]")
            if n >= 1:
                low = mono[:n] + [Fraction(0)]
                integ = coeffs_to_monomial(spec, ops.i_mat.T @ monomial_to_coeffs(spec, low))
                anti = [Fraction(0)] + [low[k] / (k + 1) for k in range(n)]
                anti[0] = -sum(anti[k] * Fraction(a) ** k for k in range(1, n + 1))
                if list(integ) != anti:
                    failures.append(f"I on N={n} [{a},{b}]")
            change = build_change_matrices(spec)
            p_pow = linalg.matpow(ops.p_mat, 3)
            if not np.array_equal(linalg.matpow(ops.d_mat, 3), change.m_mat @ p_pow @ change.m_inv):
                failures.append(f"D^3 on N={n} [{a},{b}]")
    return failures


def product_oracle(spec: BasisSpec, c, d) -> np.ndarray:
    """Coefficients of the projected product, by multiplying monomials and projecting exactly."""
    pc = coeffs_to_monomial(spec, c)
    pd = coeffs_to_monomial(spec, d)
    prod = [Fraction(0)] * (2 * spec.size - 1)
    for i, u in enumerate(pc):
        for j, v in enumerate(pd):
            prod[i + j] += u * v
    return project_polynomial(spec, prod).coeffs.coeffs


def check_product_oracle(max_n: int = 5, seed: int = 1) -> list[str]:
    rng = random.Random(seed)
    failures = []
    for a, b in INTERVALS:
        for n in range(max_n + 1):
            spec = BasisSpec(n, a, b)
            c = np.array([_rand_fraction(rng) for _ in range(n + 1)], dtype=object)
            d = np.array([_rand_fraction(rng) for _ in range(n + 1)], dtype=object)
            if list(build_c_tilde(spec, c).T @ d) != list(product_oracle(spec, c, d)):
                failures.append(f"N={n} [{a},{b}]")
    return failures


JACOBIAN_SIZES = {"squeezing-flow": 6, "lane-emden-type": 6, "abel": 6, "lane-emden-standard": 6, "troesch": 6}


def jacobian_fd_error(system: AlgebraicSystem, state, precision: int) -> mpmath.mpf:
    """Largest scaled gap between the analytic Jacobian and central differences.

    Entries are compared relative to ``max(1, |J_ij|)`` with step
    ``10^(-precision/2)``.
    """
    spec = system.spec
    with spec.workdps():
        a = np.array([linalg.as_mpf(v) for v in state], dtype=object)
        _, jac = system.evaluate(a)
        h = mpmath.mpf(10) ** (-(precision // 2))
        worst = mpmath.mpf(0)
        for j in range(len(a)):
            up, dn = a.copy(), a.copy()
            up[j] += h
            dn[j] -= h
            fd = (system.residual(up) - system.residual(dn)) / (2 * h)
            for i in range(len(a)):
                worst = max(worst, abs(fd[i] - jac[i, j]) / max(1, abs(jac[i, j])))
        return worst


def check_jacobians(seed: int = 2, precision: int = 60) -> dict[str, mpmath.mpf]:
    rng = random.Random(seed)
    out = {}
    for name, n in JACOBIAN_SIZES.items():
        problem = build_problem(name, n, precision)
        system = tau_project(problem)
        with problem.basis.workdps():
            state = [mpmath.mpf(rng.uniform(-1, 1)) for _ in range(system.dimension)]
        out[name] = jacobian_fd_error(system, state, precision)
    return out


def exp_x2_derivative_bound(order: int) -> mpmath.mpf:
    """``max |d^k/dx^k exp(x^2)|`` on ``[0, 1]``.

    The derivative is ``p_k(x) exp(x^2)`` with ``p_{k+1} = p_k' + 2 x p_k``;
    every ``p_k`` has nonnegative coefficients, so the maximum sits at ``x = 1``.
    """
    p = [1]
    for _ in range(order):
        nxt = [0] * (len(p) + 1)
        for k, c in enumerate(p):
            if k:
                nxt[k - 1] += k * c
            nxt[k + 1] += 2 * c
        p = nxt
    return sum(p) * mpmath.e


def check_error_bound(orders=(5, 8, 10), precision: int = 60) -> dict[int, tuple]:
    out = {}
    for n in orders:
        spec = BasisSpec(n, 0, 1, precision)
        with spec.workdps():
            measured = project_function(spec, lambda x: mpmath.exp(x * x)).residual_norm
            bound = error_bound(n, exp_x2_derivative_bound(n + 1), 1)
        out[n] = (measured, bound)
    return out


def explicit_galerkin(problem: TauProblem, nodes: int = 24) -> np.ndarray:
    """Solve a linear problem from ``<r, Q_j>_w = 0`` assembled by quadrature.

    The residual function is sampled pointwise from its flattened expansion
    and integrated against every basis member, with no reference to ``K``.
    BC equations replace the last rows of each block, as in :func:`tau_project`.
    """
    spec = problem.basis
    system = AlgebraicSystem(problem, rows="coefficient")
    dim = system.dimension
    n = spec.size
    with spec.workdps():
        xs, ws = gauss_legendre(nodes, spec.working_digits)
        a, b = linalg.as_mpf(spec.a), linalg.as_mpf(spec.b)
        pts = [((a + b) / 2 + (b - a) / 2 * t, w / 2) for t, w in zip(xs, ws)]
        basis_at = [eval_basis(spec, x) for x, _ in pts]

        def galerkin(flat):
            r = system.residual(flat)
            out = np.empty(dim, dtype=object)
            for blk in range(dim // n):
                coeffs = r[blk * n : (blk + 1) * n]
                vals = [mpmath.fsum(c * q for c, q in zip(coeffs, qs)) for qs in basis_at]
                for j in range(n):
                    out[blk * n + j] = mpmath.fsum(w * v * qs[j] for (_, w), v, qs in zip(pts, vals, basis_at))
            return out

        zero = np.array([mpmath.mpf(0)] * dim, dtype=object)
        g0 = galerkin(zero)
        mat = linalg.zeros(dim, dim, mpmath.mpf(0))
        for k in range(dim):
            e = zero.copy()
            e[k] = mpmath.mpf(1)
            mat[:, k] = galerkin(e) - g0
        bc_system = tau_project(problem, rows="coefficient")
        for r, bc in bc_system.replaced.items():
            off = system._offset(bc.unknown)
            mat[r, :] = mpmath.mpf(0)
            mat[r, off : off + n] = bc.row(spec)
            g0[r] = -linalg.as_mpf(bc.value)
        return linalg.solve(mat, -g0)


def tau_equivalence_problems(n: int = 4) -> dict[str, tuple[TauProblem, str]]:
    """Linear test problems: one with embedded initial values, one with BC rows."""
    spec = BasisSpec(n, 0, 1)
    x = known_polynomial(spec, [0, 1], "x")
    one = known_polynomial(spec, [1], "1")
    a = Unknown("a")
    y = a.integ(2) + one
    ivp = TauProblem(spec, ("a",), (a + x * a.integ(1) - y,), name="ivp")
    u = Unknown("u")
    bvp = TauProblem(
        spec,
        ("u",),
        (u.diff(2) - x * u.diff(1) + u - known_polynomial(spec, [1, 0, 0, 0, 1], "1+x^4"),),
        bcs=(BoundaryCondition("u", 0, 0), BoundaryCondition("u", 1, 1)),
        name="bvp",
    )
    return {"embedded-ic": (ivp, "coefficient"), "bc-rows": (bvp, "weighted")}


def check_tau_equivalence(n: int = 4) -> dict[str, mpmath.mpf]:
    """Gap between the Tau solution and the explicitly integrated Galerkin solution.

    With embedded initial values the coefficient rows ``r = 0`` already agree
    with ``<r, Q_j> = 0`` since ``K`` is invertible. Once BC rows displace Tau
    rows, the explicit form corresponds to the weighted rows.
    """
    out = {}
    for name, (problem, rows) in tau_equivalence_problems(n).items():
        report = solve(tau_project(problem, rows=rows))
        with problem.basis.workdps():
            explicit = explicit_galerkin(problem)
            tau = problem.join(report.state)
            out[name] = max(abs(u - v) for u, v in zip(tau, explicit))
    return out


def _prop_exactness():
    failures = check_exactness()
    return not failures, "exact for N <= 12 on [0,1], [0,3], [1,2]" if not failures else "failed: " + ", ".join(failures), {}


def _prop_product():
    failures = check_product_oracle()
    return not failures, "C~ equals multiply-then-project for N <= 5" if not failures else "failed: " + ", ".join(failures), {}


def _prop_jacobian():
    errs = check_jacobians()
    limit = mpmath.mpf(10) ** -20
    ok = all(e <= limit for e in errs.values())
    return ok, ", ".join(f"{k} {_fmt(v, 2)}" for k, v in errs.items()) + " (limit 1e-20)", errs


def _prop_bound():
    res = check_error_bound()
    ok = all(m <= b for m, b in res.values())
    return ok, ", ".join(f"N={n}: {_fmt(m, 2)} <= {_fmt(b, 2)}" for n, (m, b) in res.items()), res


def _prop_tau():
    res = check_tau_equivalence()
    limit = mpmath.mpf(10) ** -40
    ok = all(v <= limit for v in res.values())
    return ok, ", ".join(f"{k} gap {_fmt(v, 2)}" for k, v in res.items()) + " (limit 1e-40)", res


@dataclass(frozen=True)
class Criterion:
    key: str
    title: str
    run: Callable[[], tuple]


CRITERIA: tuple[Criterion, ...] = (
    Criterion("1-table4", "Lane-Emden type vs exp(x^2), N=40", _table4(40, "1e-17")),
    Criterion("1-table4-n20", "Lane-Emden type vs exp(x^2), N=20", _table4(20, "1e-9")),
    Criterion("2-table1-2", "squeezing flow f' and theta, N=15", _tables12),
    Criterion("3-table3", "Nusselt numbers, lower-wall flux", _table3("lower")),
    Criterion("3-table3-upper", "Nusselt numbers, upper-wall flux", _table3("upper")),
    Criterion("4-table5", "Abel equation, N=10", _table5),
    Criterion("5-table6", "standard Lane-Emden, N=12", _table6),
    Criterion("6-table7", "Troesch, N=10, gamma=0.5", _table7),
    Criterion("7a-exactness", "D/I exactness", _prop_exactness),
    Criterion("7b-product", "product-matrix oracle", _prop_product),
    Criterion("7c-jacobian", "analytic vs finite-difference Jacobian", _prop_jacobian),
    Criterion("7d-error-bound", "projection error bound for exp(x^2)", _prop_bound),
    Criterion("7e-tau-k", "Tau rows vs explicit Galerkin", _prop_tau),
)


def select(filter_text: str | None = None) -> list[Criterion]:
    if not filter_text:
        return list(CRITERIA)
    return [c for c in CRITERIA if filter_text in c.key]


def run_criterion(crit: Criterion) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail, data = crit.run()
    except Exception as exc:  # a crash is a failure of that criterion only
        ok, detail, data = False, f"error: {type(exc).__name__}: {exc}", {}
    return CriterionResult(crit.key, crit.title, bool(ok), detail, time.perf_counter() - t0, data)


def run_criteria(filter_text: str | None = None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    results = []
    for crit in select(filter_text):
        res = run_criterion(crit)
        if echo:
            echo(res.line())
        results.append(res)
    return results
