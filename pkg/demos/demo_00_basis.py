"""
The shifted Bessel basis and its operational matrices
=====================================================

Each basis member is a Bessel function of the first kind cut off at degree N
and composed with the map from [a, b] onto [0, 1]. Everything the solver
needs (change of basis, derivative, integral, Gram and product matrices) is
built once in exact rationals.
"""

# %%
# Change of basis. Row k of Y holds the monomial coefficients of B_k(t); S
# maps t = (x - a)/(b - a) back to powers of x, and M = Y S.
from fractions import Fraction

from taubessel import BasisSpec, build_change_matrices, build_opmatrices

spec = BasisSpec(4)
change = build_change_matrices(spec)
print("M =")
for row in change.m_mat:
    print("   ", [str(v) for v in row])

# %%
# Differentiation is exact on the span, D = M P M^-1. Coefficient vectors are
# columns, so the derivative of c^T Q has coefficients D^T c.
ops = build_opmatrices(spec)
x_cubed = change.m_inv.T @ [Fraction(0), 0, 0, 1, 0]
print("d/dx x^3 in monomials:", list(change.m_mat.T @ (ops.d_mat.T @ x_cubed)))

# %%
# Integration is exact below the top degree. The antiderivative of the top
# member leaves the span and is replaced by its least-squares projection, so
# the integral of Q_N from 0 does not vanish exactly at x = 0.
print("top row of L:", [str(v) for v in ops.l_mat[-1]])

# %%
# The Gram matrix K = M H M^T of the weighted inner products is what makes
# the Tau conditions equivalent to "all residual coefficients vanish".
print("K[0, :] =", [str(v) for v in ops.k_mat[0]])

# %%
# Products go through C~(v) = M V~(M^T v) M^-1: multiply, then project back.
from taubessel import build_c_tilde

x = change.m_inv.T @ [Fraction(0), 1, 0, 0, 0]
x_squared = build_c_tilde(spec, x).T @ x
print("x * x in monomials:", list(change.m_mat.T @ x_squared))
