"""
Best approximation and its error bound
======================================

Projecting a function onto the basis in the weighted L2 sense. Polynomials
are projected exactly from their moments; other functions go through
Gauss-Legendre quadrature with node doubling.
"""

# %%
import mpmath

from taubessel import BasisSpec, error_bound, project_function, project_polynomial
from taubessel.verify import exp_x2_derivative_bound

res = project_polynomial(BasisSpec(2), [0, 0, 0, 1])
print("x^3 on quadratics: coefficients", [str(c) for c in res.coeffs.coeffs])
print("  error", mpmath.nstr(res.residual_norm, 6))

# %%
# For exp(x^2) on [0, 1] the error falls quickly with N and stays below the
# Taylor-remainder bound M / (N+1)! * sqrt(1 / (2N+3)).
for n in (4, 6, 8, 10, 12):
    spec = BasisSpec(n)
    with spec.workdps():
        err = project_function(spec, lambda t: mpmath.exp(t * t)).residual_norm
        bound = error_bound(n, exp_x2_derivative_bound(n + 1), 1)
    print(f"N={n:2d}  error {mpmath.nstr(err, 3):>9}  bound {mpmath.nstr(bound, 3):>9}")

# %%
# The projected sine used by the Abel problem reproduces sin to about 1e-11
# at N = 10.
spec = BasisSpec(10)
sin_n = project_function(spec, mpmath.sin).coeffs
with spec.workdps():
    worst = max(abs(sin_n(t) - mpmath.sin(t)) for t in mpmath.linspace(0, 1, 21))
print("max |sin_N - sin| on [0, 1]:", mpmath.nstr(worst, 3))
