"""
Lane-Emden equations with embedded initial values
=================================================

Both problems are singular at x = 0. The unknown is y'', y' and y come from
the integral matrix, and the equation is multiplied by x so that every term
is a polynomial expression in the unknown.
"""

# %%
# The Lane-Emden type equation y'' + (2/x) y' - (4x^2 + 6) y = 0 has the exact
# solution exp(x^2). The error on [0, 3] drops by several orders with every
# few extra basis members.
import mpmath

from taubessel import build_problem, solve_problem

for n in (12, 20, 30, 40):
    problem = build_problem("lane-emden-type", n=n)
    report = solve_problem(problem)
    y = problem.expansion(report.state, "y")
    with problem.basis.workdps():
        err = max(abs(y(t) / mpmath.exp(t * t) - 1) for t in mpmath.linspace(0, 3, 31))
    print(f"N={n:2d}  max relative error {mpmath.nstr(err, 3)}")

# %%
# The standard equation of index 2, y'' + (2/x) y' + y^2 = 0, has no closed
# form. Against the 7-digit reference values the N = 12 solution agrees to
# about 1e-8.
from taubessel.problems import table

problem = build_problem("lane-emden-standard")
report = solve_problem(problem)
y = problem.expansion(report.state, "y")
for row in table(6).column("Horedt"):
    print(f"x={row.x}  y={mpmath.nstr(y(row.x), 15)}  reference {row.value}")
