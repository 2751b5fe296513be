"""
Squeezing flow between two plates
=================================

A coupled fourth-order equation for the stream function f and a second-order
equation for the temperature theta, with four and two boundary conditions.
Here the Tau rows are the weighted inner products with the basis, so the
residual stays orthogonal to the low-degree members after the boundary rows
are spliced in.
"""

# %%
import mpmath

from taubessel import build_problem, solve_problem
from taubessel.problems import nusselt

problem = build_problem("squeezing-flow")
report = solve_problem(problem)
df = problem.expansion(report.state, "df")
theta = problem.expansion(report.state, "theta")
for x in ("0.2", "0.4", "0.6", "0.8"):
    print(f"x={x}  f'={mpmath.nstr(df(x), 15)}  theta={mpmath.nstr(theta(x), 15)}")
print("Nusselt number -theta'(1):", mpmath.nstr(nusselt(problem, report.state), 18))

# %%
# Heat generated by viscous dissipation grows with Pr and Ec and so does the
# wall flux. With Pr = 0 the temperature is exactly linear and the flux is 1.
for pr in ("0", "0.1", "0.2", "0.3"):
    p = build_problem("squeezing-flow", params={"Pr": pr})
    r = solve_problem(p)
    print(f"Pr={pr}  Nu={mpmath.nstr(nusselt(p, r.state), 18)}")

# %%
# A is the wall value f(0); the upper plate keeps f(1) = 1/2. At A = 1/2 the
# stream function is constant and the velocity f' vanishes. The same data
# comes out of ``taubessel sweep --problem squeezing-flow --sweep A=-0.5:0.5:5``.
for a in ("-0.5", "0", "0.5"):
    p = build_problem("squeezing-flow", params={"A": a})
    r = solve_problem(p)
    f0, f1 = p.expansion(r.state, "f"), p.expansion(r.state, "df")
    pts = ("0.25", "0.5", "0.75")
    print(f"A={a:>4}  f:", [mpmath.nstr(f0(t), 6) for t in pts], " f':", [mpmath.nstr(f1(t), 6, min_fixed=-30) for t in pts])
