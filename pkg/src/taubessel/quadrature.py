"""Gauss-Legendre rules at arbitrary precision."""

from __future__ import annotations

import functools

import mpmath


def _legendre_with_derivative(n: int, x):
    p0, p1 = mpmath.mpf(1), x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


@functools.lru_cache(maxsize=128)
def gauss_legendre(n: int, dps: int) -> tuple[tuple, tuple]:
    """Nodes and weights of the ``n``-point rule on [-1, 1] to ``dps`` digits.

    Nodes come from Newton's method on ``P_n`` started at the Chebyshev-like
    guesses ``cos(pi (k - 1/4) / (n + 1/2))``. Returned as tuples of mpf so
    the cached value is immutable.
    """
    if n < 1:
        raise ValueError("need at least one node")
    with mpmath.workdps(dps + 10):
        eps = mpmath.mpf(10) ** (-(dps + 5))
        nodes, weights = [], []
        for k in range(1, (n + 1) // 2 + 1):
            x = mpmath.cos(mpmath.pi * (k - mpmath.mpf(1) / 4) / (n + mpmath.mpf(1) / 2))
            for _ in range(100):
                p, dp = _legendre_with_derivative(n, x)
                dx = p / dp
                x -= dx
                if abs(dx) < eps:
                    break
            _, dp = _legendre_with_derivative(n, x)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append(x)
            weights.append(w)
        full_x = [-x for x in nodes] + [x for x in reversed(nodes)]
        full_w = weights + list(reversed(weights))
        if n % 2:
            # the middle node was appended twice
            mid = len(nodes) - 1
            del full_x[mid]
            del full_w[mid]
    with mpmath.workdps(dps):
        return tuple(+x for x in full_x), tuple(+w for w in full_w)


def integrate(f, a, b, n: int, dps: int):
    """``int_a^b f(x) dx`` with the ``n``-point rule."""
    xs, ws = gauss_legendre(n, dps)
    with mpmath.workdps(dps):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        half, mid = (b - a) / 2, (a + b) / 2
        return half * mpmath.fsum(w * f(mid + half * x) for x, w in zip(xs, ws))
