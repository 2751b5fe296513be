"""Tau reduction of ODE residuals written as term trees.

A residual is built from :class:`Unknown` and :class:`Known` leaves combined
with ``+``, ``-``, scalar ``*``, tree ``*`` (projected product),
:meth:`Term.diff` and :meth:`Term.integ`. Flattening a tree gives the
coefficient vector ``r`` with ``residual(x) ~ r^T Q(x)``; since the dual
matrix is invertible, the Tau conditions ``int r Q^T w dx = r^T K = 0`` are
equivalent to ``r = 0``, one equation per coefficient. Boundary conditions
then replace the last rows of their unknown's block.

Coefficient vectors are handled as columns throughout: the derivative of
``c^T Q`` has coefficients ``D^T c``, the antiderivative ``I^T c`` and the
product of ``u^T Q`` and ``v^T Q`` has coefficients ``C~(v)^T u``.
"""

from __future__ import annotations

import numbers
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath
import numpy as np

from . import linalg
from .basis import BasisSpec, CoeffVec, eval_basis, monomial_to_coeffs
from .opmat import build_c_tilde, build_opmatrices, float_ops


class UnboundUnknown(KeyError):
    pass


class DimensionMismatch(ValueError):
    pass


class TooManyBCs(ValueError):
    pass


# ---------------------------------------------------------------------------
# term trees


class Term:
    """Base class of residual expression nodes."""

    def unknowns(self) -> frozenset[str]:
        raise NotImplementedError

    def children(self) -> tuple[Term, ...]:
        return ()

    def diff(self, k: int = 1) -> Term:
        return Deriv(k, self)

    def integ(self, k: int = 1) -> Term:
        return Integ(k, self)

    def __add__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return Add((self, other))

    def __sub__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return Add((self, Scale(-1, other)))

    def __neg__(self):
        return Scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, Term):
            return Mul(self, other)
        if isinstance(other, (numbers.Number, mpmath.mpf)):
            return Scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (numbers.Number, mpmath.mpf)):
            return Scale(other, self)
        return NotImplemented

    def __pow__(self, k: int):
        """Left-associated repeated product ``((t*t)*t)...``."""
        if not isinstance(k, int) or k < 1:
            return NotImplemented
        out = self
        for _ in range(k - 1):
            out = Mul(out, self)
        return out


@dataclass(frozen=True, eq=False)
class Unknown(Term):
    name: str

    def unknowns(self):
        return frozenset((self.name,))


@dataclass(frozen=True, eq=False)
class Known(Term):
    """A fixed expansion. ``func`` optionally gives exact pointwise values
    (used for residual evaluation, e.g. ``sin`` rather than its projection)."""

    coeffs: tuple
    func: Callable | None = None
    label: str = ""

    def unknowns(self):
        return frozenset()


@dataclass(frozen=True, eq=False)
class Add(Term):
    terms: tuple[Term, ...]

    def __post_init__(self):
        flat = []
        for t in self.terms:
            flat.extend(t.terms if isinstance(t, Add) else (t,))
        object.__setattr__(self, "terms", tuple(flat))

    def unknowns(self):
        return frozenset().union(*(t.unknowns() for t in self.terms))

    def children(self):
        return self.terms


@dataclass(frozen=True, eq=False)
class Scale(Term):
    factor: Any
    child: Term

    def unknowns(self):
        return self.child.unknowns()

    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=False)
class Deriv(Term):
    order: int
    child: Term

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("derivative order must be >= 1")

    def unknowns(self):
        return self.child.unknowns()

    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=False)
class Integ(Term):
    order: int
    child: Term

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("integration order must be >= 1")

    def unknowns(self):
        return self.child.unknowns()

    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=False)
class Mul(Term):
    left: Term
    right: Term

    def unknowns(self):
        return self.left.unknowns() | self.right.unknowns()

    def children(self):
        return (self.left, self.right)


def known_polynomial(spec: BasisSpec, mono, label: str = "") -> Known:
    """Known leaf for ``sum_k mono[k] x^k``; degree must not exceed N."""
    mono = [linalg.to_fraction(c) for c in mono]
    coeffs = monomial_to_coeffs(spec, mono)

    def func(x):
        return mpmath.polyval([linalg.as_mpf(c) for c in reversed(mono)], x)

    return Known(tuple(coeffs), func, label)


def known_from(coeffs: CoeffVec | np.ndarray, func: Callable | None = None, label: str = "") -> Known:
    c = coeffs.coeffs if isinstance(coeffs, CoeffVec) else coeffs
    return Known(tuple(c), func, label)


def walk(tree: Term):
    yield tree
    for child in tree.children():
        yield from walk(child)


# ---------------------------------------------------------------------------
# flattening


class _Arith:
    """Exact or working-precision versions of the operators for one basis."""

    def __init__(self, spec: BasisSpec, exact: bool):
        self.spec = spec
        self.exact = exact
        self.n = spec.size
        if exact:
            self._mats = build_opmatrices(spec)
            self._pow: dict = {}
        else:
            self._fl = float_ops(spec)

    def convert(self, v):
        if self.exact:
            return np.array([linalg.to_fraction(x) for x in v], dtype=object)
        return np.array([linalg.as_mpf(x) for x in v], dtype=object)

    def scalar(self, s):
        return linalg.to_fraction(s) if self.exact else linalg.as_mpf(s)

    def power_t(self, which: str, k: int) -> np.ndarray:
        """Transposed ``D^k`` or ``I^k`` acting on coefficient columns."""
        if not self.exact:
            return self._fl.power(which, k).T
        key = (which, k)
        if key not in self._pow:
            base = self._mats.d_mat if which == "d" else self._mats.i_mat
            self._pow[key] = linalg.matpow(base, k).T
        return self._pow[key]

    def product_t(self, v) -> np.ndarray:
        """``C~(v)^T``: maps ``u`` to the coefficients of the projected ``u v``."""
        return build_c_tilde(self.spec, v).T

    def zeros(self):
        return linalg.zeros(self.n, fill=Fraction(0) if self.exact else mpmath.mpf(0))


class _Flattener:
    """Evaluates trees to coefficient vectors, optionally with Jacobians.

    Jacobians are dicts ``unknown -> (N+1, N+1)`` matrix of partial
    derivatives of the node's coefficients; absent keys are zero blocks.
    Subtrees without unknowns are evaluated once and cached, as are product
    matrices built from them.
    """

    def __init__(self, spec: BasisSpec, exact: bool = False):
        self.ar = _Arith(spec, exact)
        self._const: dict[int, np.ndarray] = {}
        self._const_prod: dict[int, np.ndarray] = {}
        # constant subtrees with rational leaves are evaluated exactly, then rounded once
        self._exact = None if exact else _Flattener(spec, exact=True)

    def value(self, node: Term, state: Mapping[str, np.ndarray]):
        return self._eval(node, state, False)[0]

    def value_and_jac(self, node: Term, state: Mapping[str, np.ndarray]):
        return self._eval(node, state, True)

    def _eval(self, node: Term, state, want_jac: bool):
        if not node.unknowns():
            key = id(node)
            if key not in self._const:
                if self._exact is not None and _rational_tree(node):
                    self._const[key] = self.ar.convert(self._exact.value(node, {}))
                else:
                    self._const[key] = self._eval_node(node, state, False)[0]
            return self._const[key], {}
        return self._eval_node(node, state, want_jac)

    def _eval_node(self, node: Term, state, want_jac: bool):
        ar = self.ar
        if isinstance(node, Unknown):
            if node.name not in state:
                raise UnboundUnknown(node.name)
            v = ar.convert(state[node.name])
            if len(v) != ar.n:
                raise DimensionMismatch(f"state for {node.name!r} has {len(v)} entries, expected {ar.n}")
            jac = {node.name: linalg.identity(ar.n, ar.scalar(1), ar.scalar(0))} if want_jac else {}
            return v, jac
        if isinstance(node, Known):
            if len(node.coeffs) != ar.n:
                raise DimensionMismatch(f"known {node.label!r} has {len(node.coeffs)} coefficients, expected {ar.n}")
            return ar.convert(node.coeffs), {}
        if isinstance(node, Add):
            total, jac = ar.zeros(), {}
            for t in node.terms:
                v, j = self._eval(t, state, want_jac)
                total = total + v
                for name, blk in j.items():
                    jac[name] = jac[name] + blk if name in jac else blk
            return total, jac
        if isinstance(node, Scale):
            s = ar.scalar(node.factor)
            v, j = self._eval(node.child, state, want_jac)
            return s * v, {k: s * blk for k, blk in j.items()}
        if isinstance(node, (Deriv, Integ)):
            op = ar.power_t("d" if isinstance(node, Deriv) else "i", node.order)
            v, j = self._eval(node.child, state, want_jac)
            return op @ v, {k: op @ blk for k, blk in j.items()}
        if isinstance(node, Mul):
            return self._eval_mul(node, state, want_jac)
        raise TypeError(f"unknown node type {type(node).__name__}")

    def _const_product_t(self, node: Term, state) -> np.ndarray:
        key = id(node)
        if key not in self._const_prod:
            if self._exact is not None and _rational_tree(node):
                exact_t = self._exact.ar.product_t(self._exact.value(node, {}))
                self._const_prod[key] = linalg.to_mpf(exact_t)
            else:
                v, _ = self._eval(node, state, False)
                self._const_prod[key] = self.ar.product_t(v)
        return self._const_prod[key]

    def _eval_mul(self, node: Mul, state, want_jac: bool):
        left, right = node.left, node.right
        if not right.unknowns() or not left.unknowns():
            # one side constant: a linear map with a cached product matrix
            const, var = (right, left) if not right.unknowns() else (left, right)
            p_t = self._const_product_t(const, state)
            v, j = self._eval(var, state, want_jac)
            return p_t @ v, {k: p_t @ blk for k, blk in j.items()}
        u, ju = self._eval(left, state, want_jac)
        v, jv = self._eval(right, state, want_jac)
        pv_t = self.ar.product_t(v)
        value = pv_t @ u
        if not want_jac:
            return value, {}
        pu_t = self.ar.product_t(u)
        jac = {k: pv_t @ blk for k, blk in ju.items()}
        for k, blk in jv.items():
            jac[k] = jac[k] + pu_t @ blk if k in jac else pu_t @ blk
        return value, jac


def _rational_tree(tree: Term) -> bool:
    for n in walk(tree):
        if isinstance(n, Known) and not linalg.is_exact(np.asarray(n.coeffs, dtype=object)):
            return False
        if isinstance(n, Scale) and not linalg.is_exact(n.factor):
            return False
    return True


def flatten(spec: BasisSpec, tree: Term, state: Mapping[str, Any]) -> np.ndarray:
    """Coefficient vector ``r`` with ``tree(x) ~ r^T Q(x)``.

    Computed exactly when every leaf and state entry is rational, otherwise
    at the working precision of ``spec``.

    Raises:
        UnboundUnknown: ``state`` lacks an unknown used in ``tree``.
    """
    state_exact = all(linalg.is_exact(np.asarray(v, dtype=object)) for v in state.values())
    if state_exact and _rational_tree(tree):
        return _Flattener(spec, exact=True).value(tree, state)
    with spec.workdps():
        return _Flattener(spec).value(tree, state)


# ---------------------------------------------------------------------------
# problems and algebraic systems


@dataclass(frozen=True)
class BoundaryCondition:
    """``d^k/dx^k u(point) = value`` for unknown ``u``: ``c^T D^k Q(point) = value``."""

    unknown: str
    point: Any
    value: Any
    deriv_order: int = 0

    def row(self, spec: BasisSpec) -> np.ndarray:
        """Coefficient functional ``D^k Q(point)`` at working precision."""
        q = eval_basis(spec, self.point)
        with spec.workdps():
            if self.deriv_order == 0:
                return q
            return float_ops(spec).power("d", self.deriv_order) @ q


TAU_ROWS = ("coefficient", "weighted")


@dataclass(frozen=True)
class TauProblem:
    """Unknown expansions, one residual tree per unknown, and boundary conditions.

    ``equations[i]`` is the residual attached to ``unknowns[i]``; BCs on that
    unknown replace the last rows of its block. ``outputs`` names derived
    quantities (e.g. ``y`` when the unknown is ``y''``) for sampling.
    ``pointwise_residual`` optionally overrides the residual evaluation used by
    :func:`residual_at` (e.g. to use an exact nonlinearity). ``tau_rows``
    picks the Tau rows that BCs displace, see :class:`AlgebraicSystem`.
    """

    basis: BasisSpec
    unknowns: tuple[str, ...]
    equations: tuple[Term, ...]
    bcs: tuple[BoundaryCondition, ...] = ()
    params: Mapping[str, Any] = field(default_factory=dict)
    outputs: Mapping[str, Term] = field(default_factory=dict)
    pointwise_residual: Callable | None = None
    name: str = ""
    tau_rows: str = "coefficient"

    def __post_init__(self):
        if self.tau_rows not in TAU_ROWS:
            raise ValueError(f"tau_rows must be one of {TAU_ROWS}")
        if len(self.unknowns) != len(self.equations):
            raise DimensionMismatch(
                f"{len(self.unknowns)} unknowns but {len(self.equations)} equations"
            )
        names = set(self.unknowns)
        for eq in self.equations:
            extra = eq.unknowns() - names
            if extra:
                raise UnboundUnknown(", ".join(sorted(extra)))
        for bc in self.bcs:
            if bc.unknown not in names:
                raise UnboundUnknown(bc.unknown)
            if bc.deriv_order > self.basis.order_n:
                raise ValueError(f"derivative order {bc.deriv_order} exceeds N")

    @property
    def dimension(self) -> int:
        return self.basis.size * len(self.unknowns)

    def split(self, flat) -> dict[str, np.ndarray]:
        n = self.basis.size
        flat = np.asarray(flat, dtype=object)
        return {u: flat[i * n : (i + 1) * n] for i, u in enumerate(self.unknowns)}

    def join(self, state: Mapping[str, Any]) -> np.ndarray:
        return np.concatenate([np.asarray(state[u], dtype=object) for u in self.unknowns])

    def expansion(self, state: Mapping[str, Any], output: str) -> CoeffVec:
        """Coefficients of an unknown or a named output at ``state``."""
        tree = self.outputs.get(output) or Unknown(output)
        return CoeffVec(self.basis, flatten(self.basis, tree, state))


class AlgebraicSystem:
    """``R(A) = 0`` over the stacked coefficient vector ``A`` of all unknowns.

    Rows ``i*(N+1) .. (i+1)*(N+1)-1`` hold the Tau equations of unknown ``i``;
    ``replaced`` maps a row index to the BC that overrides it.

    ``rows="coefficient"`` uses the residual's coefficient vector ``r``
    directly; since ``K`` is invertible, ``r K = 0`` and ``r = 0`` have the
    same roots. ``rows="weighted"`` uses ``K r`` instead, the inner products
    ``<r, Q_j>_w``. The two differ once BC rows displace the last rows: the
    weighted form leaves a residual orthogonal to all low-degree polynomials
    and converges much faster in ``N`` for boundary-value problems.
    ``None`` takes the problem's ``tau_rows``.
    """

    def __init__(
        self,
        problem: TauProblem,
        replaced: Mapping[int, BoundaryCondition] | None = None,
        *,
        rows: str | None = None,
    ):
        self.problem = problem
        self.spec = problem.basis
        self.replaced = dict(replaced or {})
        self.rows = rows or problem.tau_rows
        if self.rows not in TAU_ROWS:
            raise ValueError(f"rows must be one of {TAU_ROWS}")
        self._gram = float_ops(self.spec).k_mat if self.rows == "weighted" else None
        self._flat = _Flattener(self.spec)
        self._bc_rows: dict[int, np.ndarray] = {r: bc.row(self.spec) for r, bc in self.replaced.items()}
        rows = self.dimension
        if rows != problem.dimension:
            raise DimensionMismatch(f"{rows} rows for {problem.dimension} unknown coefficients")

    @property
    def dimension(self) -> int:
        return self.spec.size * len(self.problem.equations)

    def _offset(self, name: str) -> int:
        return self.problem.unknowns.index(name) * self.spec.size

    def residual(self, flat) -> np.ndarray:
        return self.evaluate(flat, jacobian=False)[0]

    def jacobian(self, flat) -> np.ndarray:
        return self.evaluate(flat, jacobian=True)[1]

    def evaluate(self, flat, jacobian: bool = True):
        """Residual vector and (optionally) its analytic Jacobian at ``flat``."""
        p = self.problem
        n = self.spec.size
        dim = self.dimension
        with self.spec.workdps():
            state = p.split([linalg.as_mpf(v) for v in flat])
            res = np.empty(dim, dtype=object)
            jac = linalg.zeros(dim, dim, mpmath.mpf(0)) if jacobian else None
            for i, eq in enumerate(p.equations):
                val, blocks = (
                    self._flat.value_and_jac(eq, state) if jacobian else (self._flat.value(eq, state), {})
                )
                if self._gram is not None:
                    val = self._gram @ val
                    blocks = {k: self._gram @ blk for k, blk in blocks.items()}
                res[i * n : (i + 1) * n] = val
                for name, blk in blocks.items():
                    off = self._offset(name)
                    jac[i * n : (i + 1) * n, off : off + n] = blk
            for r, bc in self.replaced.items():
                g = self._bc_rows[r]
                c = state[bc.unknown]
                res[r] = mpmath.fsum(gi * ci for gi, ci in zip(g, c)) - linalg.as_mpf(bc.value)
                if jacobian:
                    jac[r, :] = mpmath.mpf(0)
                    off = self._offset(bc.unknown)
                    jac[r, off : off + n] = g
        return res, jac


def apply_bcs(system: AlgebraicSystem, bcs) -> AlgebraicSystem:
    """Replace the last Tau rows of each unknown's block by its BC equations.

    Raises:
        TooManyBCs: more BCs on one unknown than its block has rows.
    """
    n = system.spec.size
    replaced = dict(system.replaced)
    per_unknown: dict[str, list[BoundaryCondition]] = {}
    for bc in bcs:
        per_unknown.setdefault(bc.unknown, []).append(bc)
    for name, group in per_unknown.items():
        start = system._offset(name)
        already = sum(1 for r in replaced if start <= r < start + n)
        if already + len(group) > n:
            raise TooManyBCs(f"{already + len(group)} BCs on {name!r} with only {n} rows")
        last = start + n - 1 - already
        for k, bc in enumerate(group):
            replaced[last - (len(group) - 1) + k] = bc
    return AlgebraicSystem(system.problem, replaced, rows=system.rows)


def tau_project(problem: TauProblem, *, rows: str | None = None) -> AlgebraicSystem:
    """The algebraic system of ``problem``: Tau rows with its BCs spliced in."""
    return apply_bcs(AlgebraicSystem(problem, rows=rows), problem.bcs)


# ---------------------------------------------------------------------------
# pointwise residuals


def eval_tree_at(spec: BasisSpec, tree: Term, state: Mapping[str, Any], x):
    """Value of ``tree`` at ``x`` with products taken pointwise (no projection).

    Known leaves with an exact ``func`` use it; linear nodes over unknowns
    are flattened and evaluated.
    """
    with spec.workdps():
        x = linalg.as_mpf(x)
        if isinstance(tree, Add):
            return mpmath.fsum(eval_tree_at(spec, t, state, x) for t in tree.terms)
        if isinstance(tree, Scale):
            return linalg.as_mpf(tree.factor) * eval_tree_at(spec, tree.child, state, x)
        if isinstance(tree, Mul):
            return eval_tree_at(spec, tree.left, state, x) * eval_tree_at(spec, tree.right, state, x)
        if isinstance(tree, Known) and tree.func is not None:
            return mpmath.mpf(tree.func(x))
        coeffs = flatten(spec, tree, state)
        q = eval_basis(spec, x)
        return mpmath.fsum(linalg.as_mpf(c) * qk for c, qk in zip(coeffs, q))


def residual_at(problem: TauProblem, state: Mapping[str, Any], x) -> list:
    """Residual of each equation at ``x``, substituting the expansions pointwise."""
    if problem.pointwise_residual is not None:
        with problem.basis.workdps():
            return list(problem.pointwise_residual(problem, state, linalg.as_mpf(x)))
    return [eval_tree_at(problem.basis, eq, state, x) for eq in problem.equations]


def zero_state(problem: TauProblem) -> dict[str, np.ndarray]:
    return {u: linalg.zeros(problem.basis.size, fill=mpmath.mpf(0)) for u in problem.unknowns}


__all__ = [
    "Add",
    "AlgebraicSystem",
    "TAU_ROWS",
    "BoundaryCondition",
    "Deriv",
    "DimensionMismatch",
    "Integ",
    "Known",
    "Mul",
    "Scale",
    "TauProblem",
    "Term",
    "TooManyBCs",
    "UnboundUnknown",
    "Unknown",
    "apply_bcs",
    "eval_tree_at",
    "flatten",
    "known_from",
    "known_polynomial",
    "residual_at",
    "tau_project",
]
