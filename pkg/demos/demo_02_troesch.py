"""
Troesch's problem
=================

y'' = gamma sinh(gamma y) with y(0) = 0 and y(1) = 1. The hyperbolic sine is
replaced by its Taylor polynomial, so the Tau residual only involves
projected products of the unknown with itself. The two boundary conditions
replace the last two Tau rows.
"""

# %%
import mpmath

from taubessel import build_problem, residual_at, solve_problem
from taubessel.problems import table

problem = build_problem("troesch", n=10, params={"gamma": "0.5"})
report = solve_problem(problem)
print(f"{report.iterations} Newton steps, |R| = {mpmath.nstr(report.residual_norm, 3)}")

# %%
# Compare with the tabulated solution and look at the residual of the true
# equation (with the real sinh). It grows towards x = 1, where the truncated
# series is least accurate.
y = problem.expansion(report.state, "y")
for row in table(7).column("present"):
    with problem.basis.workdps():
        diff = abs(y(row.x) - mpmath.mpf(row.value))
        res = residual_at(problem, report.state, row.x)[0]
    print(f"x={row.x}  y={mpmath.nstr(y(row.x), 15)}  |diff|={mpmath.nstr(diff, 2)}  Res={mpmath.nstr(res, 3)}")

# %%
# Larger gamma makes the boundary layer at x = 1 steeper, and a fixed number
# of series terms and basis members leaves a much larger residual.
for gamma in ("0.5", "1", "1.5"):
    p = build_problem("troesch", n=12, params={"gamma": gamma, "sinh_order": 7})
    r = solve_problem(p)
    with p.basis.workdps():
        worst = max(abs(residual_at(p, r.state, t)[0]) for t in mpmath.linspace(0, 1, 11))
    print(f"gamma={gamma}: y(0.5)={mpmath.nstr(p.expansion(r.state, 'y')(0.5), 12)}  max|Res|={mpmath.nstr(worst, 2)}")
