"""Best weighted-L2 approximation in the shifted Bessel basis.

The coefficients solve ``K c = <f, Q>_w`` with ``K`` the dual matrix. For
polynomial ``f`` the inner products are moments and everything is exact;
for general ``f`` they come from Gauss-Legendre quadrature with node
doubling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath
import numpy as np

from . import linalg
from .basis import BasisSpec, CoeffVec, build_change_matrices, eval_basis
from .opmat import build_opmatrices, moment
from .quadrature import gauss_legendre


class QuadratureNotConverged(ArithmeticError):
    pass


@dataclass(frozen=True)
class ProjectionResult:
    coeffs: CoeffVec
    residual_norm: mpmath.mpf


def project_polynomial(spec: BasisSpec, mono) -> ProjectionResult:
    """Project ``sum_k mono[k] x^k`` (any degree) onto the basis, exactly."""
    mono = [linalg.to_fraction(c) for c in mono]
    change = build_change_matrices(spec)
    k_mat = build_opmatrices(spec).k_mat
    n = spec.size
    # <f, x^i>_w for i = 0..N
    fx = linalg.zeros(n)
    for i in range(n):
        fx[i] = sum((c * moment(spec, i + m) for m, c in enumerate(mono) if c), Fraction(0))
    rhs = change.m_mat @ fx
    coeffs = linalg.solve(k_mat, rhs)
    ff = sum(
        (ci * cj * moment(spec, i + j) for i, ci in enumerate(mono) if ci for j, cj in enumerate(mono) if cj),
        Fraction(0),
    )
    resid2 = ff - sum(coeffs[i] * rhs[i] for i in range(n))
    with spec.workdps():
        norm = mpmath.sqrt(max(linalg.as_mpf(resid2), mpmath.mpf(0)))
    return ProjectionResult(CoeffVec(spec, coeffs), norm)


def _inner_products(spec: BasisSpec, f, nodes: int) -> tuple[np.ndarray, list, list]:
    xs, ws = gauss_legendre(nodes, spec.working_digits)
    a, b = linalg.as_mpf(spec.a), linalg.as_mpf(spec.b)
    half, mid = (b - a) / 2, (a + b) / 2
    g = np.array([mpmath.mpf(0)] * spec.size, dtype=object)
    fvals, qvals = [], []
    for t, w in zip(xs, ws):
        x = mid + half * t
        fx = mpmath.mpf(f(x))
        q = eval_basis(spec, x)
        g += (w * fx / 2) * q
        fvals.append(fx)
        qvals.append(q)
    return g, fvals, qvals


def project_function(spec: BasisSpec, f, *, start_nodes: int | None = None, max_doublings: int = 6) -> ProjectionResult:
    """Project a callable ``f`` (mpf -> mpf) onto the basis.

    The node count doubles until two successive rules agree on every inner
    product to ``10^(10 - precision_digits)`` relative to the largest one.

    Raises:
        QuadratureNotConverged: no agreement after ``max_doublings``.
    """
    nodes = start_nodes or max(16, 2 * spec.size)
    with spec.workdps():
        tol = mpmath.mpf(10) ** (10 - spec.precision_digits)
        g, fvals, qvals = _inner_products(spec, f, nodes)
        for _ in range(max_doublings):
            nodes *= 2
            g2, fvals, qvals = _inner_products(spec, f, nodes)
            scale = max(linalg.norm_inf(g2), mpmath.mpf(1))
            if linalg.norm_inf(g2 - g) <= tol * scale:
                g = g2
                break
            g = g2
        else:
            raise QuadratureNotConverged(f"inner products still moving at {nodes} nodes")
        coeffs = linalg.solve(linalg.to_mpf(build_opmatrices(spec).k_mat), g)
        xs, ws = gauss_legendre(nodes, spec.working_digits)
        resid2 = mpmath.fsum(
            w / 2 * (fx - mpmath.fsum(c * qk for c, qk in zip(coeffs, q))) ** 2
            for w, fx, q in zip(ws, fvals, qvals)
        )
        return ProjectionResult(CoeffVec(spec, coeffs), mpmath.sqrt(resid2))


def error_bound(n: int, deriv_bound, b) -> mpmath.mpf:
    """Upper bound on the weighted-L2 best-approximation error on ``[0, b]``.

    ``deriv_bound`` bounds ``|f^(N+1)|`` on the interval; the bound is
    ``M / (N+1)! * sqrt(b^(2N+2) / (2N+3))``.
    """
    m, b = linalg.as_mpf(deriv_bound), linalg.as_mpf(b)
    if m < 0 or b <= 0:
        raise ValueError("need deriv_bound >= 0 and b > 0")
    return m / factorial(n + 1) * mpmath.sqrt(b ** (2 * n + 2) / (2 * n + 3))
