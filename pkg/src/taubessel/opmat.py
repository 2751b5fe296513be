"""Operational matrices of the shifted Bessel basis.

Conventions: ``Q(x) = M X(x)`` with ``X(x) = [1, x, ..., x^N]``. A matrix
``A`` is "operational" for an operator T when ``T Q(x) ~ A Q(x)``, so an
expansion ``c^T Q`` maps to ``(c^T A) Q``.

Where a result leaves the span (the top row of the integral, products), it is
replaced by its best weighted-L2 approximation with weight ``1/(b - a)``.
Those Gram solves are done in exact rationals.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import linalg
from .basis import BasisSpec, ChangeMatrices, build_change_matrices, float_change


@dataclass(frozen=True)
class OpMatrixSet:
    p_mat: np.ndarray
    d_mat: np.ndarray
    l_mat: np.ndarray
    i_mat: np.ndarray
    k_mat: np.ndarray
    h_mat: np.ndarray


def build_p(n: int) -> np.ndarray:
    """Derivative of the monomial vector: ``d/dx X(x) = P X(x)``."""
    p = linalg.zeros(n + 1, n + 1)
    for i in range(1, n + 1):
        p[i, i - 1] = Fraction(i)
    return p


def build_d(spec: BasisSpec, change: ChangeMatrices | None = None) -> np.ndarray:
    change = change or build_change_matrices(spec)
    return change.m_mat @ build_p(spec.order_n) @ change.m_inv


def moment(spec: BasisSpec, k: int) -> Fraction:
    """Weighted monomial moment ``int_a^b x^k dx / (b - a)``."""
    a, b = spec.a, spec.b
    return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))


def build_moment(spec: BasisSpec) -> np.ndarray:
    """Gram matrix of the monomials, ``H[i, j] = <x^i, x^j>_w``."""
    n = spec.size
    h = linalg.zeros(n, n)
    for i in range(n):
        for j in range(n):
            h[i, j] = moment(spec, i + j)
    return h


@functools.lru_cache(maxsize=64)
def _projection_table(n: int, a: Fraction, b: Fraction) -> np.ndarray:
    spec = BasisSpec(n, a, b)
    size = n + 1
    table = linalg.zeros(2 * n + 2, size)
    for m in range(size):
        table[m, m] = Fraction(1)
    h = build_moment(spec)
    rhs = linalg.zeros(size, n + 1)
    for m in range(size, 2 * n + 2):
        for i in range(size):
            rhs[i, m - size] = moment(spec, i + m)
    table[size:] = linalg.solve(h, rhs).T
    table.flags.writeable = False
    return table


def projection_table(spec: BasisSpec) -> np.ndarray:
    """Monomial coefficients of the best approximation of ``x^m``, ``m = 0..2N+1``.

    Row ``m`` is the unit vector for ``m <= N``; above that it solves the
    normal equations ``H e = <x^i, x^m>_w`` exactly.
    """
    return _projection_table(spec.order_n, spec.a, spec.b)


def build_k(spec: BasisSpec, change: ChangeMatrices | None = None) -> np.ndarray:
    """Dual (Gram) matrix ``K = <Q, Q^T>_w = M H M^T``."""
    change = change or build_change_matrices(spec)
    return change.m_mat @ build_moment(spec) @ change.m_mat.T


def build_l(spec: BasisSpec, change: ChangeMatrices | None = None) -> np.ndarray:
    """Integration of the monomial vector: ``int_a^x X(t) dt ~ L X(x)``.

    Rows below N are exact antiderivatives; row N is the projection of
    ``(x^(N+1) - a^(N+1)) / (N+1)``.
    """
    n = spec.order_n
    a = spec.a
    ell = linalg.zeros(n + 1, n + 1)
    for i in range(n):
        ell[i, i + 1] = Fraction(1, i + 1)
        ell[i, 0] -= a ** (i + 1) / (i + 1)
    top = projection_table(spec)[n + 1]
    for j in range(n + 1):
        ell[n, j] = top[j] / (n + 1)
    ell[n, 0] -= a ** (n + 1) / (n + 1)
    return ell


def build_i(spec: BasisSpec, change: ChangeMatrices | None = None) -> np.ndarray:
    change = change or build_change_matrices(spec)
    return change.m_mat @ build_l(spec, change) @ change.m_inv


def build_v_tilde(spec: BasisSpec, v, table: np.ndarray | None = None) -> np.ndarray:
    """Product matrix in the monomial basis: ``X(x) X(x)^T v ~ V~ X(x)``.

    Row ``i`` holds the monomial coefficients of ``x^i * v(x)`` with every
    power above ``N`` replaced by its projection. ``table`` may be a float
    version of :func:`projection_table` to build in floating point.
    """
    table = projection_table(spec) if table is None else table
    n = spec.order_n
    v = list(v)
    if len(v) != n + 1:
        raise ValueError(f"expected {n + 1} monomial coefficients, got {len(v)}")
    zero = v[0] * 0
    vt = linalg.zeros(n + 1, n + 1, zero)
    for i in range(n + 1):
        row = vt[i]
        for j, vj in enumerate(v):
            if vj == 0:
                continue
            if i + j <= n:
                row[i + j] = row[i + j] + vj
            else:
                row += table[i + j] * vj
    return vt


def build_c_tilde(spec: BasisSpec, c, change: ChangeMatrices | None = None) -> np.ndarray:
    """Product matrix in the basis: ``Q(x) Q(x)^T c ~ C~ Q(x)``, ``C~ = M V~ M^-1``.

    ``d^T C~`` is the coefficient vector of the projected product
    ``(d^T Q)(c^T Q)``. Exact when ``c`` is exact, otherwise computed at
    the working precision of ``spec``.
    """
    c = np.asarray(c, dtype=object)
    if linalg.is_exact(c):
        change = change or build_change_matrices(spec)
        return change.m_mat @ build_v_tilde(spec, change.m_mat.T @ c) @ change.m_inv
    fl = float_ops(spec)
    with spec.workdps():
        v = fl.m_mat.T @ c
        return fl.m_mat @ build_v_tilde(spec, v, fl.table) @ fl.m_inv


@functools.lru_cache(maxsize=64)
def _opmatrices(n: int, a: Fraction, b: Fraction) -> OpMatrixSet:
    spec = BasisSpec(n, a, b)
    change = build_change_matrices(spec)
    mats = OpMatrixSet(
        p_mat=build_p(n),
        d_mat=build_d(spec, change),
        l_mat=build_l(spec, change),
        i_mat=build_i(spec, change),
        k_mat=build_k(spec, change),
        h_mat=build_moment(spec),
    )
    for arr in vars(mats).values():
        arr.flags.writeable = False
    return mats


def build_opmatrices(spec: BasisSpec) -> OpMatrixSet:
    """All exact operational matrices for ``spec`` (cached, read-only)."""
    return _opmatrices(spec.order_n, spec.a, spec.b)


class FloatOps:
    """Internal-precision copies of the matrices needed inside a solve.

    Powers of D and I are formed exactly and rounded once; they are cached on
    first use behind a lock, reads are lock-free afterwards.
    """

    def __init__(self, spec: BasisSpec):
        self.spec = spec
        self._exact = build_opmatrices(spec)
        change = float_change(spec)
        with spec.workdps():
            self.m_mat = change.m_mat
            self.m_inv = change.m_inv
            self.table = linalg.to_mpf(projection_table(spec))
            self.k_mat = linalg.to_mpf(self._exact.k_mat)
        self._powers: dict[tuple[str, int], np.ndarray] = {}
        self._lock = threading.Lock()

    def power(self, which: str, k: int) -> np.ndarray:
        """``D^k`` (``which="d"``) or ``I^k`` (``which="i"``)."""
        key = (which, k)
        if key not in self._powers:
            with self._lock:
                if key not in self._powers:
                    base = {"d": self._exact.d_mat, "i": self._exact.i_mat}[which]
                    with self.spec.workdps():
                        self._powers[key] = linalg.to_mpf(linalg.matpow(base, k))
        return self._powers[key]

    @property
    def d_mat(self) -> np.ndarray:
        return self.power("d", 1)

    @property
    def i_mat(self) -> np.ndarray:
        return self.power("i", 1)


@functools.lru_cache(maxsize=64)
def float_ops(spec: BasisSpec) -> FloatOps:
    return FloatOps(spec)
