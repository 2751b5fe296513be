"""Lane-Emden equations, solved for the second derivative.

The unknown ``a`` holds ``y''``; ``y'`` and ``y`` come from the integral
matrix plus the initial values, so no boundary rows are needed. ``y(0)`` and
``y'(0)`` are only as accurate as the projected top row of the integral
matrix, since the antiderivative of the highest basis member leaves the span. Both equations are multiplied through by ``x``
to remove the ``1/x`` singularity.
"""

from __future__ import annotations

import mpmath

from ..basis import DEFAULT_PRECISION, BasisSpec
from ..taucore import TauProblem, Unknown, known_polynomial


def _over_x(ev, t):
    # y'/x tends to y''(0) at the origin since y'(0) = 0
    return ev["d2y"] if t == 0 else ev["dy"] / t


def _integrated(spec: BasisSpec):
    a = Unknown("a")
    one = known_polynomial(spec, [1], "1")
    return a, a.integ(1), a.integ(2) + one


def build_lane_emden_type(n: int = 40, precision: int = DEFAULT_PRECISION) -> TauProblem:
    """``y'' + (2/x) y' - (4x^2 + 6) y = 0`` on ``[0, 3]`` with ``y(0)=1, y'(0)=0``.

    The exact solution is ``exp(x^2)``.
    """
    spec = BasisSpec(n, 0, 3, precision)
    x = known_polynomial(spec, [0, 1], "x")
    z = known_polynomial(spec, [0, 3, 0, 2], "2x^3+3x")
    ypp, yp, y = _integrated(spec)
    eq = x * ypp + 2 * yp - 2 * (z * y)

    def pointwise(problem, state, t):
        ev = {k: problem.expansion(state, k)(t) for k in ("y", "dy", "d2y")}
        return [ev["d2y"] + 2 * _over_x(ev, t) - (4 * t**2 + 6) * ev["y"]]

    return TauProblem(
        basis=spec,
        unknowns=("a",),
        equations=(eq,),
        outputs={"y": y, "dy": yp, "d2y": ypp},
        pointwise_residual=pointwise,
        name="lane-emden-type",
    )


def exact_lane_emden_type(x):
    return mpmath.exp(mpmath.mpf(x) ** 2)


def build_lane_emden_standard(n: int = 12, precision: int = DEFAULT_PRECISION) -> TauProblem:
    """Standard Lane-Emden problem of index 2, ``y'' + (2/x) y' + y^2 = 0`` on ``[0, 2]``, ``y(0)=1, y'(0)=0``."""
    spec = BasisSpec(n, 0, 2, precision)
    x = known_polynomial(spec, [0, 1], "x")
    ypp, yp, y = _integrated(spec)
    eq = x * ypp + 2 * yp + x * (y * y)

    def pointwise(problem, state, t):
        ev = {k: problem.expansion(state, k)(t) for k in ("y", "dy", "d2y")}
        return [ev["d2y"] + 2 * _over_x(ev, t) + ev["y"] ** 2]

    return TauProblem(
        basis=spec,
        unknowns=("a",),
        equations=(eq,),
        outputs={"y": y, "dy": yp, "d2y": ypp},
        pointwise_residual=pointwise,
        name="lane-emden-standard",
    )
