"""Built-in Hamiltonian/Lagrangian model systems and gradient checking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NoLagrangianError, SolverError


@dataclass(frozen=True)
class HamiltonianSystem:
    """n-dimensional Hamiltonian with value/gradient callbacks.

    All callbacks take and return 1-d arrays of length n (value returns a
    scalar).  exact_flow, when present, is the analytic time-t solution map
    and serves as an oracle in tests and convergence studies.
    """

    name: str
    n: int
    value: Callable
    grad_q: Callable
    grad_p: Callable
    hyperregular: bool
    exact_flow: Optional[Callable] = None
    rotation_generator: Optional[np.ndarray] = None


@dataclass(frozen=True)
class LagrangianSystem:
    name: str
    n: int
    value: Callable
    grad_q: Callable
    grad_v: Callable


@dataclass(frozen=True)
class SymmetryGenerator:
    """Infinitesimal generator G of a linear action; xi_Q(q) = G q."""

    G: np.ndarray

    def momentum(self, q, p):
        """Momentum map value J(q,p) = p . (G q)."""
        return float(np.dot(p, self.G @ q))


BUILTIN_NAMES = ("harmonic", "pendulum", "kepler2d", "bilinear", "point_vortex_pair")


def builtin(name):
    """Return one of the built-in systems by name."""
    if name == "harmonic":
        def flow(q0, p0, t):
            q0, p0 = np.asarray(q0, float), np.asarray(p0, float)
            ct, st = math.cos(t), math.sin(t)
            return q0 * ct + p0 * st, -q0 * st + p0 * ct
        return HamiltonianSystem(
            name=name, n=1,
            value=lambda q, p: 0.5 * float(q @ q + p @ p),
            grad_q=lambda q, p: np.array(q, dtype=float),
            grad_p=lambda q, p: np.array(p, dtype=float),
            hyperregular=True,
            exact_flow=flow)

    if name == "pendulum":
        return HamiltonianSystem(
            name=name, n=1,
            value=lambda q, p: 0.5 * float(p @ p) - math.cos(q[0]),
            grad_q=lambda q, p: np.array([math.sin(q[0])]),
            grad_p=lambda q, p: np.array(p, dtype=float),
            hyperregular=True)

    if name == "kepler2d":
        def value(q, p):
            return 0.5 * float(p @ p) - 1.0 / np.linalg.norm(q)

        def grad_q(q, p):
            r = np.linalg.norm(q)
            return q / r**3
        return HamiltonianSystem(
            name=name, n=2,
            value=value,
            grad_q=grad_q,
            grad_p=lambda q, p: np.array(p, dtype=float),
            hyperregular=True,
            rotation_generator=np.array([[0.0, -1.0], [1.0, 0.0]]))

    if name == "bilinear":
        def flow(q0, p0, t):
            q0, p0 = np.asarray(q0, float), np.asarray(p0, float)
            return q0 * math.exp(t), p0 * math.exp(-t)
        return HamiltonianSystem(
            name=name, n=1,
            value=lambda q, p: float(q @ p),
            grad_q=lambda q, p: np.array(p, dtype=float),
            grad_p=lambda q, p: np.array(q, dtype=float),
            hyperregular=False,
            exact_flow=flow)

    if name == "point_vortex_pair":
        # two unit-circulation vortices; q holds the x-coordinates and p the
        # y-coordinates, which makes the system canonical
        def _d2(q, p):
            return (q[0] - q[1])**2 + (p[0] - p[1])**2

        def value(q, p):
            return -math.log(_d2(q, p)) / (4.0 * math.pi)

        def grad_q(q, p):
            d2 = _d2(q, p)
            g = -(q[0] - q[1]) / (2.0 * math.pi * d2)
            return np.array([g, -g])

        def grad_p(q, p):
            d2 = _d2(q, p)
            g = -(p[0] - p[1]) / (2.0 * math.pi * d2)
            return np.array([g, -g])
        return HamiltonianSystem(
            name=name, n=2,
            value=value, grad_q=grad_q, grad_p=grad_p,
            hyperregular=False)

    raise ValueError(f"unknown builtin system {name!r}")


def legendre_to_lagrangian(hsys, tol=1e-12, max_iterations=25):
    """Lagrangian obtained from a hyperregular Hamiltonian.

    L(q, qdot) = p . qdot - H(q, p) with p solving qdot = dH/dp(q, p) by
    Newton iteration.  Gradients use the Legendre identities
    dL/dq = -dH/dq and dL/dqdot = p.
    """
    if not hsys.hyperregular:
        raise NoLagrangianError(
            f"system {hsys.name!r} is degenerate: no Lagrangian exists")

    def solve_p(q, v):
        q = np.asarray(q, float)
        v = np.asarray(v, float)
        p = v.copy()
        for _ in range(max_iterations):
            r = hsys.grad_p(q, p) - v
            if np.max(np.abs(r)) <= tol:
                return p
            J = _fd_jacobian(lambda pp: hsys.grad_p(q, pp), p)
            p = p - np.linalg.solve(J, r)
        raise SolverError("Newton failed to invert the Legendre map",
                          residual=float(np.max(np.abs(r))),
                          iterations=max_iterations)

    def value(q, v):
        p = solve_p(q, v)
        return float(np.dot(p, v)) - hsys.value(np.asarray(q, float), p)

    def grad_q(q, v):
        p = solve_p(q, v)
        return -hsys.grad_q(np.asarray(q, float), p)

    def grad_v(q, v):
        return solve_p(q, v)

    return LagrangianSystem(name=f"{hsys.name} (Lagrangian)", n=hsys.n,
                            value=value, grad_q=grad_q, grad_v=grad_v)


def _fd_jacobian(f, x, step=1e-7):
    x = np.asarray(x, float)
    f0 = np.asarray(f(x), float)
    J = np.empty((f0.size, x.size))
    for k in range(x.size):
        d = step * max(1.0, abs(x[k]))
        xp = x.copy()
        xp[k] += d
        J[:, k] = (np.asarray(f(xp), float) - f0) / d
    return J


def check_gradients(system, sample_points, step=1e-6):
    """Max defect between analytic gradients and central differences.

    sample_points is a sequence of (q, p) pairs for a Hamiltonian system or
    (q, qdot) pairs for a Lagrangian one.
    """
    if isinstance(system, LagrangianSystem):
        grads = (system.grad_q, system.grad_v)
    else:
        grads = (system.grad_q, system.grad_p)

    worst = 0.0
    for x, y in sample_points:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        for slot, grad in enumerate(grads):
            analytic = np.asarray(grad(x, y), float)
            for k in range(system.n):
                base = (x, y)[slot]
                d = step * max(1.0, abs(base[k]))
                hi, lo = base.copy(), base.copy()
                hi[k] += d
                lo[k] -= d
                args_hi = (hi, y) if slot == 0 else (x, hi)
                args_lo = (lo, y) if slot == 0 else (x, lo)
                fd = (system.value(*args_hi) - system.value(*args_lo)) / (2 * d)
                worst = max(worst, abs(analytic[k] - fd))
    return worst
