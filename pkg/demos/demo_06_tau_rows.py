"""
Which Tau rows do boundary conditions displace?
===============================================

Because K is invertible, "r K = 0" and "r = 0" have the same solutions, so
the residual coefficients themselves can serve as Tau equations. Once boundary
rows replace some of them the two choices differ. Dropping the last
coefficients of r is not the same as dropping the last inner products
<r, Q_j>.
"""

# %%
import mpmath

from taubessel import solve, tau_project
from taubessel.verify import explicit_galerkin, tau_equivalence_problems

problem, _ = tau_equivalence_problems(4)["bc-rows"]
with problem.basis.workdps():
    galerkin = explicit_galerkin(problem)
for rows in ("coefficient", "weighted"):
    report = solve(tau_project(problem, rows=rows))
    with problem.basis.workdps():
        gap = max(abs(a - b) for a, b in zip(problem.join(report.state), galerkin))
    print(f"{rows:>11} rows: max gap to explicit Galerkin {mpmath.nstr(gap, 3)}")

# %%
# Both conventions are available per problem. The squeezing flow uses the
# weighted rows, and Troesch's problem keeps the coefficient rows.
from taubessel import build_problem

for name in ("squeezing-flow", "troesch"):
    print(name, "->", build_problem(name, 6).tau_rows)
