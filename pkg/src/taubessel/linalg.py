"""Dense linear algebra over object arrays of ``Fraction`` or ``mpmath.mpf``.

numpy handles storage and ``@`` for object dtype; elimination is done here
because numpy.linalg only works on machine floats.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np


class SingularMatrixError(ArithmeticError):
    """Raised when elimination meets a pivot that is (numerically) zero."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


def zeros(n: int, m: int | None = None, fill=Fraction(0)) -> np.ndarray:
    shape = (n,) if m is None else (n, m)
    out = np.empty(shape, dtype=object)
    out.fill(fill)
    return out


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> np.ndarray:
    out = zeros(n, n, zero)
    for i in range(n):
        out[i, i] = one
    return out


def to_mpf(a: np.ndarray) -> np.ndarray:
    """Convert an object array of exact numbers to ``mpf`` at the current precision."""
    out = np.empty(a.shape, dtype=object)
    flat_in = a.reshape(-1)
    flat_out = out.reshape(-1)
    for k, v in enumerate(flat_in):
        flat_out[k] = as_mpf(v)
    return out


def as_mpf(x) -> mpmath.mpf:
    """``x`` as an mpf at the current precision; Fractions are divided exactly."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def to_fraction(x) -> Fraction:
    """Exact conversion of int, Fraction, decimal string or mpf to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        if not mpmath.isfinite(x):
            raise ValueError(f"cannot convert {x} to a fraction")
        sign, man, exp, _ = x._mpf_
        return Fraction(-int(man) if sign else int(man)) * (Fraction(2) ** int(exp))
    return Fraction(x)


def is_exact(a) -> bool:
    if isinstance(a, np.ndarray):
        return all(isinstance(v, (int, Fraction)) for v in a.reshape(-1))
    return isinstance(a, (int, Fraction))


def inv_lower(t: np.ndarray) -> np.ndarray:
    """Exact inverse of a lower-triangular matrix by forward substitution."""
    n = t.shape[0]
    inv = zeros(n, n)
    for j in range(n):
        inv[j, j] = 1 / Fraction(t[j, j])
        for i in range(j + 1, n):
            acc = Fraction(0)
            for k in range(j, i):
                acc += t[i, k] * inv[k, j]
            inv[i, j] = -acc / t[i, i]
    return inv


def inv_upper(t: np.ndarray) -> np.ndarray:
    """Exact inverse of an upper-triangular matrix."""
    return inv_lower(t.T).T


def solve(a: np.ndarray, b: np.ndarray, *, pivot_tol=None) -> np.ndarray:
    """Solve ``a @ x = b`` by Gaussian elimination with partial pivoting.

    Works in exact arithmetic when every entry is a ``Fraction`` (first nonzero
    pivot), otherwise in the current mpmath precision using scaled partial
    pivoting. ``b`` may be a vector or a matrix of right-hand sides.

    Args:
        a: square object array.
        b: right-hand side(s).
        pivot_tol: relative pivot threshold for floating solves; a pivot
            smaller than ``pivot_tol`` times its original row scale raises.

    Raises:
        SingularMatrixError: no acceptable pivot in some column.
    """
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix is not square (shape = {a.shape})")
    vector = b.ndim == 1
    rhs = b.reshape(n, -1)
    exact = is_exact(a) and is_exact(rhs)
    work = [list(a[i]) + list(rhs[i]) for i in range(n)]
    if exact:
        work = [[Fraction(v) for v in row] for row in work]
        scale = None
    else:
        work = [[as_mpf(v) for v in row] for row in work]
        # column equilibration: unknowns in a polynomial basis span many decades
        colscale = [max((abs(work[i][j]) for i in range(n)), default=0) or 1 for j in range(n)]
        for row in work:
            for j in range(n):
                row[j] /= colscale[j]
        scale = [max((abs(v) for v in row[:n]), default=0) for row in work]
        if pivot_tol is None:
            pivot_tol = mpmath.mpf(10) ** (-mpmath.mp.dps + 5)

    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        else:
            piv = max(
                range(col, n),
                key=lambda r: abs(work[r][col]) / scale[r] if scale[r] else 0,
            )
            if scale[piv] == 0 or abs(work[piv][col]) <= pivot_tol * scale[piv]:
                piv = None
        if piv is None:
            raise SingularMatrixError(f"no usable pivot in column {col}", column=col)
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            if scale is not None:
                scale[col], scale[piv] = scale[piv], scale[col]
        prow = work[col]
        p = prow[col]
        for r in range(col + 1, n):
            row = work[r]
            f = row[col] / p
            if f == 0:
                continue
            for k in range(col, len(row)):
                row[k] -= f * prow[k]

    m = rhs.shape[1]
    x = [[None] * m for _ in range(n)]
    for i in range(n - 1, -1, -1):
        row = work[i]
        for j in range(m):
            acc = row[n + j]
            for k in range(i + 1, n):
                acc -= row[k] * x[k][j]
            x[i][j] = acc / row[i]
    if not exact:
        for i in range(n):
            x[i] = [v / colscale[i] for v in x[i]]
    out = np.empty((n, m), dtype=object)
    for i in range(n):
        for j in range(m):
            out[i, j] = x[i][j]
    return out[:, 0] if vector else out


def inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    one, zero = (Fraction(1), Fraction(0)) if is_exact(a) else (mpmath.mpf(1), mpmath.mpf(0))
    return solve(a, identity(n, one, zero))


def matpow(a: np.ndarray, k: int) -> np.ndarray:
    """``a`` raised to a nonnegative integer power by repeated multiplication."""
    n = a.shape[0]
    exact = is_exact(a)
    out = identity(n) if exact else identity(n, mpmath.mpf(1), mpmath.mpf(0))
    for _ in range(k):
        out = out @ a
    return out


def norm_inf(v) -> mpmath.mpf:
    return max((abs(as_mpf(x)) for x in np.asarray(v).reshape(-1)), default=mpmath.mpf(0))
