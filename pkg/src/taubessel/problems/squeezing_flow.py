"""Unsteady squeezing flow with heat transfer between two plates.

    f'''' - S (x f''' + 3 f'' - 2 f f''') - G^2 f'' = 0
    theta'' + S Pr (2 f theta' - x theta') + Pr Ec (f''^2 + 12 delta^2 f'^2) = 0

with f(0) = A, f'(0) = 0, f(1) = 1/2, f'(1) = 0, theta(0) = 1, theta(1) = 0.
``G`` is the magnetic parameter (labelled M in tabulated results).
"""

from __future__ import annotations

from fractions import Fraction

from ..basis import BasisSpec, DEFAULT_PRECISION
from ..taucore import BoundaryCondition, TauProblem, Unknown, known_polynomial
from ._common import exact_params

DEFAULTS = {
    "A": Fraction(1, 10),
    "S": Fraction(1, 10),
    "G": Fraction(2, 10),
    "Pr": Fraction(3, 10),
    "Ec": Fraction(2, 10),
    "delta": Fraction(1, 10),
}


def build_squeezing_flow(params: dict | None = None, n: int = 15, precision: int = DEFAULT_PRECISION) -> TauProblem:
    if n < 5:
        raise ValueError("squeezing flow needs N >= 5")
    p = exact_params(DEFAULTS, params)
    if p["Pr"] < 0 or p["Ec"] < 0:
        raise ValueError("Pr and Ec must be nonnegative")
    spec = BasisSpec(n, 0, 1, precision)
    x = known_polynomial(spec, [0, 1], "x")
    f, theta = Unknown("f"), Unknown("theta")
    f1, f2, f3, f4 = (f.diff(k) for k in range(1, 5))
    t1 = theta.diff(1)

    S, G, Pr, Ec, delta = p["S"], p["G"], p["Pr"], p["Ec"], p["delta"]
    eq_f = f4 - S * (x * f3 + 3 * f2 - 2 * (f * f3)) - G**2 * f2
    eq_theta = theta.diff(2) + S * Pr * (2 * (f * t1) - x * t1) + Pr * Ec * (f2 * f2 + 12 * delta**2 * (f1 * f1))

    bcs = (
        BoundaryCondition("f", 0, p["A"]),
        BoundaryCondition("f", 0, 0, deriv_order=1),
        BoundaryCondition("f", 1, Fraction(1, 2)),
        BoundaryCondition("f", 1, 0, deriv_order=1),
        BoundaryCondition("theta", 0, 1),
        BoundaryCondition("theta", 1, 0),
    )
    return TauProblem(
        basis=spec,
        unknowns=("f", "theta"),
        equations=(eq_f, eq_theta),
        bcs=bcs,
        params=p,
        outputs={"f": f, "df": f1, "theta": theta, "dtheta": t1},
        name="squeezing-flow",
        tau_rows="weighted",
    )


def nusselt(problem: TauProblem, state) -> object:
    """Scaled Nusselt number, the wall heat flux ``-theta'(1)``."""
    return -problem.expansion(state, "dtheta")(1)
