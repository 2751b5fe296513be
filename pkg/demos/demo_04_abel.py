"""
An Abel equation of the first kind
==================================

y' = sin(x) y^3 - x y^2 + x^2 y - x^3 with y(0) = 0. The unknown is y' and y
is its integral. sin(x) enters as a projected known function, so the cubic
term is a chain of three projected products.
"""

# %%
import mpmath

from taubessel import build_problem, residual_at, solve_problem
from taubessel.problems import table

problem = build_problem("abel", n=10)
report = solve_problem(problem)
y = problem.expansion(report.state, "y")
for row in table(5).column("present"):
    with problem.basis.workdps():
        res = residual_at(problem, report.state, row.x)[0]
    note = f"  ({row.note})" if row.note else ""
    print(f"x={row.x}  y={mpmath.nstr(y(row.x), 10)}  table {row.value}  Res={mpmath.nstr(res, 3)}{note}")

# %%
# The residual of the original equation shrinks steadily as N grows.
for n in (6, 10, 14, 18):
    p = build_problem("abel", n=n)
    r = solve_problem(p)
    with p.basis.workdps():
        worst = max(abs(residual_at(p, r.state, t)[0]) for t in mpmath.linspace(0, 1, 11))
    print(f"N={n:2d}  max |Res| {mpmath.nstr(worst, 3)}")
