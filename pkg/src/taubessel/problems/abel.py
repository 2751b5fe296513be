"""Abel equation of the first kind ``y' = sin(x) y^3 - x y^2 + x^2 y - x^3``, ``y(0) = 0``."""

from __future__ import annotations

import mpmath

from ..approx import project_function
from ..basis import DEFAULT_PRECISION, BasisSpec
from ..taucore import TauProblem, Unknown, known_from, known_polynomial


def build_abel(n: int = 10, precision: int = DEFAULT_PRECISION) -> TauProblem:
    """The unknown ``a`` holds ``y'`` on ``[0, 1]``; ``y`` is its integral, so ``y(0) = 0`` is built in."""
    spec = BasisSpec(n, 0, 1, precision)
    x = known_polynomial(spec, [0, 1], "x")
    x2 = known_polynomial(spec, [0, 0, 1], "x^2")
    x3 = known_polynomial(spec, [0, 0, 0, 1], "x^3")
    sin = known_from(project_function(spec, mpmath.sin).coeffs, mpmath.sin, "sin")
    yp = Unknown("a")
    y = yp.integ(1)
    eq = yp - sin * (y * (y * y)) + x * (y * y) - x2 * y + x3

    def pointwise(problem, state, t):
        v = problem.expansion(state, "y")(t)
        dv = problem.expansion(state, "dy")(t)
        return [dv - mpmath.sin(t) * v**3 + t * v**2 - t**2 * v + t**3]

    return TauProblem(
        basis=spec,
        unknowns=("a",),
        equations=(eq,),
        outputs={"y": y, "dy": yp},
        pointwise_residual=pointwise,
        name="abel",
    )
