"""Shifted Bessel polynomial basis on an interval [a, b].

The basis member ``Q_n(x) = B_n((x - a) / (b - a))`` where ``B_n`` is the
Bessel series of order ``n`` truncated at total degree ``N``::

    B_n(t) = sum_{r=0}^{(N-n)//2} (-1)^r / (r! (n+r)!) (t/2)^(2r+n)

Everything structural (the change matrices Y, S, M and M^-1) is exact
rational; floats only appear when a basis is evaluated at a point.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import mpmath
import numpy as np

from . import linalg

DEFAULT_PRECISION = 60


@dataclass(frozen=True)
class BasisSpec:
    """One shifted Bessel basis: order ``N`` (``N + 1`` members) on ``[a, b]``.

    ``precision_digits`` is the decimal working precision used by every float
    computation downstream of this basis.
    """

    order_n: int
    interval_a: Fraction = Fraction(0)
    interval_b: Fraction = Fraction(1)
    precision_digits: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "interval_a", linalg.to_fraction(self.interval_a))
        object.__setattr__(self, "interval_b", linalg.to_fraction(self.interval_b))
        if self.order_n < 0:
            raise ValueError(f"order_n must be >= 0, got {self.order_n}")
        if not self.interval_a < self.interval_b:
            raise ValueError(f"need a < b, got [{self.interval_a}, {self.interval_b}]")
        if self.precision_digits < 30:
            raise ValueError(f"precision_digits must be >= 30, got {self.precision_digits}")

    @property
    def size(self) -> int:
        return self.order_n + 1

    @property
    def a(self) -> Fraction:
        return self.interval_a

    @property
    def b(self) -> Fraction:
        return self.interval_b

    @property
    def guard_digits(self) -> int:
        """Extra digits carried internally.

        Coefficient systems in this basis have condition numbers growing like
        ``10^(1.4 N)`` even after row and column equilibration.
        """
        return 10 + (3 * self.order_n) // 2

    @property
    def working_digits(self) -> int:
        return self.precision_digits + self.guard_digits

    def workdps(self):
        """Context manager setting mpmath to this basis' internal precision."""
        return mpmath.workdps(self.working_digits)


@dataclass(frozen=True)
class ChangeMatrices:
    """Exact change-of-basis matrices with ``Q(x) = M X(x)``, ``M = Y S``."""

    y_mat: np.ndarray
    s_mat: np.ndarray
    m_mat: np.ndarray
    m_inv: np.ndarray


def build_y(n: int) -> np.ndarray:
    """Monomial coefficients (in ``t``) of ``B_0 .. B_N``; row ``k`` holds ``B_k``."""
    if n < 0:
        raise ValueError("N must be >= 0")
    y = linalg.zeros(n + 1, n + 1)
    for k in range(n + 1):
        for r in range((n - k) // 2 + 1):
            m = k + 2 * r
            y[k, m] = Fraction((-1) ** r, factorial(r) * factorial(k + r) * 2 ** (2 * r + k))
    return y


def build_s(n: int, a, b) -> np.ndarray:
    """Row ``i`` holds the monomial expansion of ``((x - a) / (b - a))**i``."""
    a, b = linalg.to_fraction(a), linalg.to_fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    h = b - a
    s = linalg.zeros(n + 1, n + 1)
    for i in range(n + 1):
        hi = h**i
        for j in range(i + 1):
            s[i, j] = comb(i, j) * (-a) ** (i - j) / hi
    return s


@functools.lru_cache(maxsize=64)
def _change_matrices(n: int, a: Fraction, b: Fraction) -> ChangeMatrices:
    y = build_y(n)
    s = build_s(n, a, b)
    m = y @ s
    m_inv = linalg.inv_lower(s) @ linalg.inv_upper(y)
    for arr in (y, s, m, m_inv):
        arr.flags.writeable = False
    return ChangeMatrices(y, s, m, m_inv)


def build_change_matrices(spec: BasisSpec) -> ChangeMatrices:
    """Y, S, M and M^-1 for ``spec``; cached and read-only."""
    return _change_matrices(spec.order_n, spec.a, spec.b)


@functools.lru_cache(maxsize=64)
def float_change(spec: BasisSpec) -> ChangeMatrices:
    """The change matrices rounded to the internal precision of ``spec``."""
    exact = build_change_matrices(spec)
    with spec.workdps():
        mats = [linalg.to_mpf(m) for m in (exact.y_mat, exact.s_mat, exact.m_mat, exact.m_inv)]
    for arr in mats:
        arr.flags.writeable = False
    return ChangeMatrices(*mats)


def shifted(spec: BasisSpec, x) -> mpmath.mpf:
    """Affine map of ``x`` from ``[a, b]`` onto ``[0, 1]``."""
    return (linalg.as_mpf(x) - linalg.as_mpf(spec.a)) / linalg.as_mpf(spec.b - spec.a)


@functools.lru_cache(maxsize=64)
def _y_float(spec: BasisSpec) -> tuple:
    with spec.workdps():
        return tuple(tuple(row) for row in linalg.to_mpf(build_y(spec.order_n)))


def eval_basis(spec: BasisSpec, x) -> np.ndarray:
    """``[Q_0(x), ..., Q_N(x)]`` at the working precision of ``spec``.

    Each member is evaluated by Horner's rule on its monomial coefficients in
    the shifted variable ``t = (x - a)/(b - a)``; ``x`` need not lie in
    ``[a, b]``.
    """
    n = spec.order_n
    with spec.workdps():
        t = shifted(spec, x)
        y = _y_float(spec)
        out = np.empty(n + 1, dtype=object)
        for k in range(n + 1):
            row = y[k]
            acc = mpmath.mpf(0)
            for m in range(n, k - 1, -1):
                acc = acc * t + row[m]
            out[k] = acc * t**k if k else acc
    return out


def eval_expansion(spec: BasisSpec, coeffs, x) -> mpmath.mpf:
    """Value of ``sum_n c_n Q_n(x)``."""
    q = eval_basis(spec, x)
    with spec.workdps():
        return mpmath.fsum(linalg.as_mpf(c) * qn for c, qn in zip(coeffs, q) if c != 0)


def monomial_to_coeffs(spec: BasisSpec, mono) -> np.ndarray:
    """Q-coefficients of a polynomial of degree <= N given by monomial coefficients."""
    mono = list(mono)
    if len(mono) > spec.size:
        raise ValueError(f"degree {len(mono) - 1} exceeds basis order {spec.order_n}")
    change = build_change_matrices(spec)
    v = linalg.zeros(spec.size)
    for k, c in enumerate(mono):
        v[k] = c
    return change.m_inv.T @ v


def coeffs_to_monomial(spec: BasisSpec, coeffs) -> np.ndarray:
    """Monomial coefficients of ``c^T Q(x)``; exact when ``coeffs`` are exact."""
    c = np.asarray(coeffs, dtype=object)
    if linalg.is_exact(c):
        return build_change_matrices(spec).m_mat.T @ c
    with spec.workdps():
        return float_change(spec).m_mat.T @ c


@dataclass(frozen=True)
class CoeffVec:
    """A basis expansion ``f(x) = c^T Q(x)``."""

    basis: BasisSpec
    coeffs: np.ndarray = field(compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=object).reshape(-1)
        if c.shape[0] != self.basis.size:
            raise ValueError(f"expected {self.basis.size} coefficients, got {c.shape[0]}")
        for v in c:
            if isinstance(v, mpmath.mpf) and not mpmath.isfinite(v):
                raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x) -> mpmath.mpf:
        return eval_expansion(self.basis, self.coeffs, x)

    def __len__(self) -> int:
        return self.basis.size
