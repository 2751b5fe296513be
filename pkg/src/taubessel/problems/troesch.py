"""Troesch's problem ``y'' = gamma sinh(gamma y)``, ``y(0) = 0``, ``y(1) = 1``.

``sinh`` is replaced by its odd Taylor polynomial of order ``sinh_order``;
each power ``y^k`` is a chain of projected products, ``((y y) y) ...``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import mpmath

from ..basis import DEFAULT_PRECISION, BasisSpec
from ..taucore import BoundaryCondition, TauProblem, Unknown
from ._common import exact_params


def build_troesch(
    n: int = 10, gamma="0.5", sinh_order: int = 5, precision: int = DEFAULT_PRECISION
) -> TauProblem:
    if sinh_order < 1 or sinh_order % 2 == 0:
        raise ValueError("sinh_order must be a positive odd integer")
    g = exact_params({"gamma": Fraction(1, 2)}, {"gamma": gamma})["gamma"]
    if g < 0:
        raise ValueError("gamma must be nonnegative")
    spec = BasisSpec(n, 0, 1, precision)
    y = Unknown("y")
    series = sum((Fraction(g**k, factorial(k)) * y**k for k in range(3, sinh_order + 1, 2)), g * y)
    eq = y.diff(2) - g * series

    def pointwise(problem, state, t):
        # the true ODE, not the truncated series
        gm = mpmath.mpf(g.numerator) / g.denominator
        return [problem.expansion(state, "d2y")(t) - gm * mpmath.sinh(gm * problem.expansion(state, "y")(t))]

    return TauProblem(
        basis=spec,
        unknowns=("y",),
        equations=(eq,),
        bcs=(BoundaryCondition("y", 0, 0), BoundaryCondition("y", 1, 1)),
        params={"gamma": g, "sinh_order": sinh_order},
        outputs={"y": y, "dy": y.diff(1), "d2y": y.diff(2)},
        pointwise_residual=pointwise,
        name="troesch",
    )
