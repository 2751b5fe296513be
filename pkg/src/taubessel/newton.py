"""Damped Newton iteration for the Tau algebraic systems."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Any

import mpmath
import numpy as np

from . import linalg
from .basis import monomial_to_coeffs
from .opmat import float_ops
from .taucore import AlgebraicSystem, TauProblem, tau_project, zero_state

log = logging.getLogger(__name__)


class SingularJacobian(ArithmeticError):
    pass


class NotConverged(RuntimeError):
    def __init__(self, message: str, report: SolveReport):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class NewtonConfig:
    """Stopping rule and globalisation for :func:`solve`.

    ``tol`` bounds the infinity norm of the residual and defaults to
    ``10^(15 - precision_digits)``. ``init`` is ``"zero"``, ``"bc"`` (the
    boundary-condition interpolant) or an explicit state mapping / flat vector.
    """

    tol: Any = None
    max_iter: int = 50
    min_step: float = 2.0**-20
    init: Any = "bc"

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass
class SolveReport:
    state: dict[str, np.ndarray]
    iterations: int
    residual_norm_history: list = field(default_factory=list)
    converged: bool = False
    condition_estimate: Any = None
    init: str = ""
    tol: Any = None

    @property
    def residual_norm(self):
        return self.residual_norm_history[-1]


def bc_interpolant_init(problem: TauProblem) -> dict[str, np.ndarray]:
    """Coefficients of the lowest-degree polynomial meeting each unknown's BCs.

    All BCs of an unknown are matched as a Hermite system; if that system is
    singular the derivative conditions are dropped. Unknowns without BCs
    start at zero.
    """
    spec = problem.basis
    state = zero_state(problem)
    for name in problem.unknowns:
        bcs = [bc for bc in problem.bcs if bc.unknown == name]
        if not bcs:
            continue
        mono = _hermite_fit(bcs)
        if mono is None:
            mono = _hermite_fit([bc for bc in bcs if bc.deriv_order == 0])
        if mono is None:
            continue
        coeffs = monomial_to_coeffs(spec, mono)
        with spec.workdps():
            state[name] = linalg.to_mpf(coeffs)
    return state


def _hermite_fit(bcs):
    if not bcs:
        return None
    n = len(bcs)
    try:
        pts = [linalg.to_fraction(bc.point) for bc in bcs]
        vals = [linalg.to_fraction(bc.value) for bc in bcs]
    except (TypeError, ValueError):
        pts = [mpmath.mpf(bc.point) for bc in bcs]
        vals = [mpmath.mpf(bc.value) for bc in bcs]
    a = linalg.zeros(n, n)
    for r, (bc, x) in enumerate(zip(bcs, pts)):
        k = bc.deriv_order
        for m in range(n):
            a[r, m] = Fraction(factorial(m), factorial(m - k)) * x ** (m - k) if m >= k else Fraction(0)
    try:
        return list(linalg.solve(a, np.array(vals, dtype=object)))
    except linalg.SingularMatrixError:
        return None


def _initial_state(system: AlgebraicSystem, init) -> tuple[np.ndarray, str]:
    problem = system.problem
    if isinstance(init, str):
        if init == "zero":
            return problem.join(zero_state(problem)), "zero"
        if init == "bc":
            return problem.join(bc_interpolant_init(problem)), "bc"
        raise ValueError(f"unknown init {init!r}")
    if isinstance(init, dict):
        return problem.join(init), "given"
    flat = np.asarray(init, dtype=object).reshape(-1)
    if flat.shape[0] != system.dimension:
        raise ValueError(f"initial state has {flat.shape[0]} entries, expected {system.dimension}")
    return flat, "given"


def _condition(jac: np.ndarray):
    try:
        inv = linalg.inverse(jac)
    except linalg.SingularMatrixError:
        return mpmath.inf

    def norm1(m):
        return max(mpmath.fsum(abs(v) for v in m[:, j]) for j in range(m.shape[1]))

    return norm1(jac) * norm1(inv)


def _function_norm(system: AlgebraicSystem, flat) -> mpmath.mpf:
    k_mat = float_ops(system.spec).k_mat
    total = mpmath.mpf(0)
    for block in system.problem.split(flat).values():
        total += mpmath.fdot(block, k_mat @ block)
    return mpmath.sqrt(abs(total))


def solve(system: AlgebraicSystem, cfg: NewtonConfig | None = None) -> SolveReport:
    """Damped Newton's method, stopping once ``||R||_inf <= tol``.

    Each iteration re-assembles the analytic Jacobian and solves the Newton
    system by partially pivoted elimination at the internal precision. The
    step is halved until the simplified correction ``J^-1 R(a + t d)`` is
    smaller than ``(1 - t/4) ||d||``, both measured as functions in the
    weighted L2 norm. The test is then independent of how rows and
    coefficients are scaled, which matters because coefficients in the Bessel
    basis span many decades.

    Raises:
        SingularJacobian: a pivot fell below ``10^(5 - digits)`` of its row scale.
        NotConverged: ``max_iter`` reached or the line search stalled; the
            partial :class:`SolveReport` is attached as ``.report``.
    """
    cfg = cfg or NewtonConfig()
    spec = system.spec
    with spec.workdps():
        tol = mpmath.mpf(10) ** (15 - spec.precision_digits) if cfg.tol is None else linalg.as_mpf(cfg.tol)
        a, init_kind = _initial_state(system, cfg.init)
        a = np.array([linalg.as_mpf(v) for v in a], dtype=object)
        res, jac = system.evaluate(a)
        norm = linalg.norm_inf(res)
        report = SolveReport(system.problem.split(a), 0, [norm], init=init_kind, tol=tol)
        while norm > tol:
            if report.iterations >= cfg.max_iter:
                raise NotConverged(f"no convergence in {cfg.max_iter} iterations (|R| = {mpmath.nstr(norm, 5)})", report)
            try:
                delta = linalg.solve(jac, -res)
            except linalg.SingularMatrixError as exc:
                raise SingularJacobian(str(exc)) from exc
            dnorm = _function_norm(system, delta)
            step = mpmath.mpf(1)
            while True:
                trial = a + step * delta
                trial_res = system.residual(trial)
                if linalg.norm_inf(trial_res) <= tol:
                    break
                # natural monotonicity: the simplified Newton correction must shrink
                simplified = linalg.solve(jac, -trial_res)
                if _function_norm(system, simplified) <= (1 - step / 4) * dnorm:
                    break
                step /= 2
                if step < cfg.min_step:
                    raise NotConverged(f"line search stalled at |R| = {mpmath.nstr(norm, 5)}", report)
            a = trial
            report.iterations += 1
            res, jac = system.evaluate(a)
            norm = linalg.norm_inf(res)
            report.residual_norm_history.append(norm)
            report.state = system.problem.split(a)
            log.debug("newton it=%d step=%s |R|=%s", report.iterations, step, mpmath.nstr(norm, 5))
        report.converged = True
        report.condition_estimate = _condition(jac)
    return report


def solve_problem(problem: TauProblem, cfg: NewtonConfig | None = None) -> SolveReport:
    """Project ``problem`` with its BCs and solve the resulting system."""
    return solve(tau_project(problem), cfg)
