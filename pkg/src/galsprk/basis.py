"""Finite-dimensional function spaces on [0,1] and their induced quadrature.

A :class:`BasisSet` holds s scalar functions on [0,1] together with exact
(or high-accuracy) antiderivative evaluation.  Combined with a set of nodes
it yields the integral data (B, A, M) from which the interpolatory
quadrature rule and the partitioned Runge-Kutta tableau are built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InadmissibleMethodError, QuadratureError

CONDITION_LIMIT = 1e12

# nested Gauss-Legendre rules for custom bases; disagreement between the
# two orders is the convergence estimate
_GL64 = np.polynomial.legendre.leggauss(64)
_GL32 = np.polynomial.legendre.leggauss(32)


class BasisSet:
    """s scalar basis functions on [0,1] with evaluation and integration.

    Use :func:`make_basis` to construct one.
    """

    def __init__(self, kind, s, *, poly_coeffs=None, functions=None,
                 nodes=None, contains_constant=False):
        self.kind = kind
        self.s = s
        self.contains_constant = contains_constant
        self._poly = poly_coeffs          # list of coefficient arrays, low->high
        self._funcs = functions           # list of callables (custom kind)
        self.nodes = nodes                # defining nodes (lagrange kind)

    def __repr__(self):
        return f"BasisSet(kind={self.kind!r}, s={self.s})"

    def eval_one(self, i, tau):
        """Evaluate the i-th basis function (0-based) at tau."""
        tau = np.asarray(tau, dtype=float)
        if self._poly is not None:
            return npoly.polyval(tau, self._poly[i])
        if self.kind == "trig":
            return _trig_eval(i, tau)
        return np.asarray(self._funcs[i](tau), dtype=float)

    def eval_all(self, tau):
        """Values of all basis functions at tau, shape (s,) for scalar tau."""
        return np.array([self.eval_one(i, tau) for i in range(self.s)])

    def integral_one(self, i, upper):
        """Definite integral of the i-th basis function over [0, upper]."""
        if self._poly is not None:
            anti = npoly.polyint(self._poly[i])
            return float(npoly.polyval(upper, anti))
        if self.kind == "trig":
            return _trig_integral(i, upper)
        return _gauss_integral(self._funcs[i], upper)

    def integrals(self, upper):
        """Vector of definite integrals over [0, upper]."""
        return np.array([self.integral_one(i, upper) for i in range(self.s)])


def _trig_eval(i, tau):
    # ordered set {1, cos(pi t), sin(pi t), cos(2 pi t), sin(2 pi t), ...}
    if i == 0:
        return np.ones_like(np.asarray(tau, dtype=float))
    k = (i + 1) // 2
    if i % 2 == 1:
        return np.cos(k * np.pi * tau)
    return np.sin(k * np.pi * tau)


def _trig_integral(i, upper):
    if i == 0:
        return float(upper)
    k = (i + 1) // 2
    w = k * math.pi
    if i % 2 == 1:
        return math.sin(w * upper) / w
    return (1.0 - math.cos(w * upper)) / w


def _gauss_integral(f, upper):
    if upper == 0.0:
        return 0.0

    def on(rule):
        x, w = rule
        t = 0.5 * upper * (x + 1.0)
        return 0.5 * upper * float(np.dot(w, np.asarray(f(t), dtype=float)))

    hi, lo = on(_GL64), on(_GL32)
    if abs(hi - lo) > 1e-10 * max(1.0, abs(hi)):
        raise QuadratureError(
            f"custom basis integral over [0,{upper}] did not converge "
            f"(64- vs 32-point disagreement {abs(hi - lo):.3e})")
    return hi


def make_basis(kind, s, *, nodes=None, functions=None, contains_constant=None):
    """Construct a basis set of one of the supported kinds.

    kind is one of ``monomial``, ``lagrange``, ``trig``, ``custom``.
    ``lagrange`` requires s nodes; ``custom`` requires s callables (their
    span is assumed not to contain the constant unless stated).
    """
    if s < 1:
        raise InadmissibleMethodError("basis dimension s must be >= 1")

    if kind == "monomial":
        coeffs = [np.eye(s)[i] for i in range(s)]
        return BasisSet(kind, s, poly_coeffs=coeffs, contains_constant=True)

    if kind == "lagrange":
        if nodes is None or len(nodes) != s:
            raise InadmissibleMethodError("lagrange basis needs exactly s nodes")
        nodes = np.asarray(nodes, dtype=float)
        if len(np.unique(nodes)) != s:
            raise InadmissibleMethodError("duplicate nodes in Lagrange basis")
        coeffs = []
        for j in range(s):
            others = np.delete(nodes, j)
            num = npoly.polyfromroots(others) if len(others) else np.array([1.0])
            denom = np.prod(nodes[j] - others) if len(others) else 1.0
            coeffs.append(num / denom)
        return BasisSet(kind, s, poly_coeffs=coeffs, nodes=nodes,
                        contains_constant=True)

    if kind == "trig":
        return BasisSet(kind, s, contains_constant=True)

    if kind == "custom":
        if functions is None or len(functions) != s:
            raise InadmissibleMethodError("custom basis needs exactly s callables")
        return BasisSet(kind, s, functions=list(functions),
                        contains_constant=bool(contains_constant))

    raise InadmissibleMethodError(f"unknown basis kind {kind!r}")


def check_nodes(c):
    """Validate quadrature/collocation nodes: in [0,1], strictly increasing."""
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or c.size < 1:
        raise InadmissibleMethodError("nodes must be a nonempty 1-d sequence")
    if np.any(c < 0.0) or np.any(c > 1.0):
        raise InadmissibleMethodError("nodes must lie in [0,1]")
    if np.any(np.diff(c) <= 0.0):
        raise InadmissibleMethodError("nodes must be strictly increasing (duplicate nodes?)")
    return c


def chebyshev_nodes(s):
    """Nodes of the s-point equal-weight Chebyshev rule, mapped to [0,1].

    Only s = 1, 2, 3 are supported (roots of the first three nontrivial
    equal-weight quadrature polynomials).
    """
    if s == 1:
        roots = [0.0]
    elif s == 2:
        r = 1.0 / math.sqrt(3.0)
        roots = [-r, r]
    elif s == 3:
        r = 1.0 / math.sqrt(2.0)
        roots = [-r, 0.0, r]
    else:
        raise InadmissibleMethodError(
            f"equal-weight Chebyshev nodes are only available for s in 1..3, got {s}")
    return np.array(sorted((x + 1.0) / 2.0 for x in roots))


@dataclass(frozen=True)
class BasisIntegrals:
    """Integral data of a basis over a node set.

    B[i]   = integral of psi_i over [0,1]
    A[i,j] = integral of psi_j over [0, c_i]
    M[i,j] = psi_i(c_j)
    """

    B: np.ndarray
    A_psi: np.ndarray
    M: np.ndarray


def compute_integrals(basis, nodes):
    """Evaluate (B, A, M) for a basis set over a node set."""
    c = check_nodes(nodes)
    s = basis.s
    if len(c) != s:
        raise InadmissibleMethodError(
            f"node count {len(c)} does not match basis dimension {s}")
    B = basis.integrals(1.0)
    A = np.array([basis.integrals(ci) for ci in c])
    M = np.array([[basis.eval_one(i, cj) for cj in c] for i in range(s)])
    return BasisIntegrals(B=B, A_psi=A, M=M)


def induced_quadrature(integrals):
    """Weights of the interpolatory rule exact on the basis span: b = M^-1 B."""
    M = integrals.M
    if np.linalg.cond(M) > CONDITION_LIMIT:
        raise InadmissibleMethodError(
            "interpolation matrix is singular or near-singular; "
            "nodes do not unisolvently match the basis")
    return np.linalg.solve(M, integrals.B)
