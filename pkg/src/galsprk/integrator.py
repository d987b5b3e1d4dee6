"""One-step maps and trajectory composition.

Three interchangeable steppers advance a Hamiltonian system by one step of
size h: the partitioned Runge-Kutta form (coefficients from a tableau), the
direct Galerkin stationarity form (coefficients from basis/node integrals),
and the Lagrangian Galerkin form for hyperregular systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import compute_integrals, induced_quadrature
from .errors import InadmissibleMethodError, IntegrationError, SolverError
from .tableau import ZERO_WEIGHT_TOL, build_tableau


@dataclass(frozen=True)
class StepperConfig:
    h: float
    solver_abs_tol: float = 1e-12
    solver_rel_tol: float = 1e-12
    max_iterations: int = 50
    jacobian_mode: str = "fd"  # "fd" (simplified Newton) or "fixed_point"

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("step size h must be positive")
        if self.solver_abs_tol <= 0 or self.solver_rel_tol <= 0:
            raise ValueError("solver tolerances must be positive")

    def tolerance(self, scale):
        return max(self.solver_abs_tol, self.solver_rel_tol * scale)


@dataclass
class StageSolution:
    """Converged internal stages of one step."""

    Q: np.ndarray
    P: np.ndarray
    V: Optional[np.ndarray] = None
    lam: Optional[np.ndarray] = None
    iterations: int = 0
    residual: float = 0.0


@dataclass
class Trajectory:
    times: np.ndarray
    q: np.ndarray            # (N+1, n)
    p: np.ndarray            # (N+1, n)
    stage_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __len__(self):
        return len(self.times)

    @property
    def states(self):
        return list(zip(self.q, self.p))


def _state_scale(q0, p0):
    return max(1.0, float(np.max(np.abs(q0))), float(np.max(np.abs(p0))))


def _solve_newton(residual, z0, config, scale):
    """Simplified Newton: finite-difference Jacobian, reused across
    iterations and refreshed when contraction is slow."""
    tol = config.tolerance(scale)
    z = np.asarray(z0, float).copy()
    r = residual(z)
    rnorm = float(np.max(np.abs(r)))
    J = None
    lu_fresh = False
    for it in range(config.max_iterations):
        if not np.isfinite(rnorm):
            raise SolverError("NaN/Inf in stage residual", residual=rnorm,
                              iterations=it)
        if rnorm <= tol:
            return z, it, rnorm
        if J is None:
            J = _fd_jacobian(residual, z, r)
            lu_fresh = True
        try:
            dz = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"singular stage Jacobian: {exc}",
                              residual=rnorm, iterations=it)
        z = z + dz
        r = residual(z)
        new_norm = float(np.max(np.abs(r)))
        if new_norm > 0.5 * rnorm and not lu_fresh:
            J = None  # slow contraction with a stale Jacobian: refresh
        else:
            lu_fresh = False
        rnorm = new_norm
    raise SolverError(
        "stage equations did not converge (h too large or inadmissible problem)",
        residual=rnorm, iterations=config.max_iterations)


def _fd_jacobian(residual, z, r0, step=1e-7):
    J = np.empty((r0.size, z.size))
    for k in range(z.size):
        d = step * max(1.0, abs(z[k]))
        zp = z.copy()
        zp[k] += d
        J[:, k] = (residual(zp) - r0) / d
    return J


# ---------------------------------------------------------------------------
# SPRK form
# ---------------------------------------------------------------------------

def sprk_step(system, tableau, config, q0, p0):
    """One step of the partitioned RK pair (tableau form)."""
    q0 = np.asarray(q0, float)
    p0 = np.asarray(p0, float)
    s, n = tableau.s, system.n
    h = config.h
    a, at, b = tableau.a, tableau.a_tilde, tableau.b

    def gradients(Q, P):
        Hq = np.array([system.grad_q(Q[i], P[i]) for i in range(s)])
        Hp = np.array([system.grad_p(Q[i], P[i]) for i in range(s)])
        return Hq, Hp

    def residual(z):
        Q = z[: s * n].reshape(s, n)
        P = z[s * n:].reshape(s, n)
        Hq, Hp = gradients(Q, P)
        rq = Q - q0[None, :] - h * a @ Hp
        rp = P - p0[None, :] + h * at @ Hq
        return np.concatenate([rq.ravel(), rp.ravel()])

    z0 = np.concatenate([np.tile(q0, s), np.tile(p0, s)])
    scale = _state_scale(q0, p0)

    if config.jacobian_mode == "fixed_point":
        z, its, res = _sprk_fixed_point(gradients, z0, q0, p0, h, a, at, s, n,
                                        config, scale)
    else:
        z, its, res = _solve_newton(residual, z0, config, scale)

    Q = z[: s * n].reshape(s, n)
    P = z[s * n:].reshape(s, n)
    Hq, Hp = gradients(Q, P)
    q1 = q0 + h * b @ Hp
    p1 = p0 - h * b @ Hq
    return q1, p1, StageSolution(Q=Q, P=P, iterations=its, residual=res)


def _sprk_fixed_point(gradients, z0, q0, p0, h, a, at, s, n, config, scale):
    tol = config.tolerance(scale)
    z = z0.copy()
    for it in range(config.max_iterations):
        Q = z[: s * n].reshape(s, n)
        P = z[s * n:].reshape(s, n)
        Hq, Hp = gradients(Q, P)
        Qn = q0[None, :] + h * a @ Hp
        Pn = p0[None, :] - h * at @ Hq
        zn = np.concatenate([Qn.ravel(), Pn.ravel()])
        res = float(np.max(np.abs(zn - z)))
        z = zn
        if res <= tol:
            return z, it + 1, res
    raise SolverError("fixed-point stage iteration did not converge",
                      residual=res, iterations=config.max_iterations)


def sprk_stepper(tableau):
    """Bind a tableau into a stepper callable for :func:`integrate`."""
    def step(system, config, q, p):
        return sprk_step(system, tableau, config, q, p)
    return step


# ---------------------------------------------------------------------------
# direct Galerkin form
# ---------------------------------------------------------------------------

def _method_data(basis, nodes):
    integ = compute_integrals(basis, nodes)
    b = induced_quadrature(integ)
    if np.any(np.abs(b) < ZERO_WEIGHT_TOL):
        raise InadmissibleMethodError("induced quadrature has a zero weight")
    return integ, b


def direct_galerkin_step(system, basis, nodes, config, q0, p0):
    """One step of the Galerkin stationarity system in (V, P)."""
    q0 = np.asarray(q0, float)
    p0 = np.asarray(p0, float)
    integ, b = _method_data(basis, nodes)
    B, A, M = integ.B, integ.A_psi, integ.M
    s, n = basis.s, system.n
    h = config.h

    def residual(z):
        V = z[: s * n].reshape(s, n)
        P = z[s * n:].reshape(s, n)
        Q = q0[None, :] + h * A @ V
        Hq = np.array([system.grad_q(Q[i], P[i]) for i in range(s)])
        Hp = np.array([system.grad_p(Q[i], P[i]) for i in range(s)])
        bHq = b @ Hq
        rp = (M @ (b[:, None] * P) - np.outer(B, p0)
              + h * (np.outer(B, bHq) - (b[:, None] * A).T @ Hq))
        rv = M.T @ V - Hp
        return np.concatenate([rp.ravel(), rv.ravel()])

    v_init = system.grad_p(q0, p0)
    z0 = np.concatenate([np.tile(v_init, s), np.tile(p0, s)])
    z, its, res = _solve_newton(residual, z0, config, _state_scale(q0, p0))

    V = z[: s * n].reshape(s, n)
    P = z[s * n:].reshape(s, n)
    Q = q0[None, :] + h * A @ V
    Hq = np.array([system.grad_q(Q[i], P[i]) for i in range(s)])
    q1 = q0 + h * B @ V
    p1 = p0 - h * b @ Hq
    return q1, p1, StageSolution(Q=Q, P=P, V=V, iterations=its, residual=res)


def galerkin_stepper(basis, nodes):
    def step(system, config, q, p):
        return direct_galerkin_step(system, basis, nodes, config, q, p)
    return step


# ---------------------------------------------------------------------------
# Lagrangian Galerkin form
# ---------------------------------------------------------------------------

def lagrangian_galerkin_step(lsys, basis, nodes, config, q0, p0):
    """One step of the Lagrangian Galerkin system; multiplier recorded as p1."""
    q0 = np.asarray(q0, float)
    p0 = np.asarray(p0, float)
    integ, b = _method_data(basis, nodes)
    B, A, M = integ.B, integ.A_psi, integ.M
    s, n = basis.s, lsys.n
    h = config.h

    def stage_data(V):
        Q = q0[None, :] + h * A @ V
        Qdot = M.T @ V
        Lq = np.array([lsys.grad_q(Q[i], Qdot[i]) for i in range(s)])
        Lv = np.array([lsys.grad_v(Q[i], Qdot[i]) for i in range(s)])
        return Q, Qdot, Lq, Lv

    def residual(z):
        V = z.reshape(s, n)
        _, _, Lq, Lv = stage_data(V)
        bLq = b @ Lq
        r = (M @ (b[:, None] * Lv) - np.outer(B, p0)
             - h * (np.outer(B, bLq) - (b[:, None] * A).T @ Lq))
        return r.ravel()

    # initial guess V = p0; consistent to O(h) for mechanical Lagrangians
    z0 = np.tile(p0, s)
    z, its, res = _solve_newton(residual, z0, config, _state_scale(q0, p0))

    V = z.reshape(s, n)
    Q, Qdot, Lq, Lv = stage_data(V)
    q1 = q0 + h * B @ V
    p1 = p0 + h * b @ Lq
    return q1, p1, StageSolution(Q=Q, P=Lv, V=V, lam=p1.copy(),
                                 iterations=its, residual=res)


def lagrangian_stepper(lsys, basis, nodes):
    def step(system, config, q, p):
        return lagrangian_galerkin_step(lsys, basis, nodes, config, q, p)
    return step


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def integrate(system, stepper, config, q0, p0, n_steps):
    """Compose n_steps steps into a trajectory.

    On stage failure at step k the raised :class:`IntegrationError` carries
    the partial trajectory up to step k.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    q0 = np.asarray(q0, float)
    p0 = np.asarray(p0, float)
    n = q0.size
    q = np.empty((n_steps + 1, n))
    p = np.empty((n_steps + 1, n))
    residuals = np.empty(n_steps)
    q[0], p[0] = q0, p0
    for k in range(n_steps):
        try:
            q[k + 1], p[k + 1], stages = stepper(system, config, q[k], p[k])
        except SolverError as exc:
            partial = Trajectory(times=config.h * np.arange(k + 1),
                                 q=q[: k + 1].copy(), p=p[: k + 1].copy(),
                                 stage_residuals=residuals[:k].copy())
            raise IntegrationError(
                f"stage solve failed at step {k}: {exc}",
                step_index=k, partial_trajectory=partial,
                residual=exc.residual, iterations=exc.iterations) from exc
        residuals[k] = stages.residual
    return Trajectory(times=config.h * np.arange(n_steps + 1),
                      q=q, p=p, stage_residuals=residuals)


def integrate_tableau(system, tableau, config, q0, p0, n_steps):
    return integrate(system, sprk_stepper(tableau), config, q0, p0, n_steps)
