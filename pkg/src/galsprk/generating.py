"""Type II generating function of the Galerkin step and its identities.

The one-step map (q0, p0) -> (q1, p1) is generated by a scalar function of
(q0, p1): its gradient in the first slot recovers p0 and in the second slot
recovers q1.  This module evaluates that function from boundary data,
checks the gradient identities by finite differences, accumulates the
discrete action along trajectories, and verifies the discrete
Hamilton-Jacobi recurrence on scalar systems via a shooting oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import compute_integrals, induced_quadrature
from .errors import InadmissibleMethodError, SolverError
from .integrator import (
    StageSolution,
    StepperConfig,
    _solve_newton,
    _state_scale,
    integrate_tableau,
    sprk_step,
)
from .tableau import ZERO_WEIGHT_TOL, build_tableau

FD_STEP = 1e-6


@dataclass
class GeneratingFunctionEvaluation:
    value: float              # closed-form evaluation
    value_direct: float       # direct weighted-sum evaluation (cross-check)
    stages: StageSolution
    p0_implied: np.ndarray
    q1_implied: np.ndarray


def evaluate_hd_plus(system, basis, nodes, h, q0, p1, config=None):
    """Evaluate the one-step generating function at boundary data (q0, p1).

    Solves the stationarity system in (V, P) with (q0, p1) fixed, then
    returns the generating-function value by two algebraically equal
    expressions, plus the implied (p0, q1) of the generated map.
    """
    q0 = np.asarray(q0, float)
    p1 = np.asarray(p1, float)
    if config is None:
        config = StepperConfig(h=h if h > 0 else 1.0)

    integ = compute_integrals(basis, nodes)
    b = induced_quadrature(integ)
    if np.any(np.abs(b) < ZERO_WEIGHT_TOL):
        raise InadmissibleMethodError("induced quadrature has a zero weight")
    B, A, M = integ.B, integ.A_psi, integ.M
    s, n = basis.s, system.n
    a = np.linalg.solve(M, A.T).T  # tableau coefficients for the closed form

    def stage_arrays(z):
        V = z[: s * n].reshape(s, n)
        P = z[s * n:].reshape(s, n)
        Q = q0[None, :] + h * A @ V
        Hq = np.array([system.grad_q(Q[i], P[i]) for i in range(s)])
        Hp = np.array([system.grad_p(Q[i], P[i]) for i in range(s)])
        return V, P, Q, Hq, Hp

    def residual(z):
        V, P, Q, Hq, Hp = stage_arrays(z)
        rp = (np.outer(B, p1) - M @ (b[:, None] * P)
              + h * (b[:, None] * A).T @ Hq)
        rv = M.T @ V - Hp
        return np.concatenate([rp.ravel(), rv.ravel()])

    z0 = np.concatenate([np.tile(system.grad_p(q0, p1), s), np.tile(p1, s)])
    z, its, res = _solve_newton(residual, z0, config, _state_scale(q0, p1))
    V, P, Q, Hq, Hp = stage_arrays(z)

    H_vals = np.array([system.value(Q[i], P[i]) for i in range(s)])
    cross = np.einsum("i,ij,ik,jk->", b, a, Hq, Hp)
    value = float(p1 @ q0) - h * h * float(cross) + h * float(b @ H_vals)

    qdot = M.T @ V  # velocity samples at the nodes
    q_end = q0 + h * B @ V
    value_direct = float(p1 @ q_end) - h * float(
        b @ (np.einsum("ij,ij->i", P, qdot) - H_vals))

    p0_implied = p1 + h * b @ Hq
    q1_implied = q_end
    stages = StageSolution(Q=Q, P=P, V=V, iterations=its, residual=res)
    return GeneratingFunctionEvaluation(value=value, value_direct=value_direct,
                                        stages=stages, p0_implied=p0_implied,
                                        q1_implied=q1_implied)


def verify_type2_identities(system, basis, nodes, h, q0, p0, config=None):
    """Finite-difference check of the generating identities around one step.

    Returns (|D1 Hd - p0|_inf, |D2 Hd - q1|_inf) where the derivatives are
    central differences of :func:`evaluate_hd_plus` in q0 and p1.
    """
    q0 = np.asarray(q0, float)
    p0 = np.asarray(p0, float)
    if config is None:
        config = StepperConfig(h=h)
    tab = build_tableau(basis, nodes)
    q1, p1, _ = sprk_step(system, tab, config, q0, p0)

    def value_at(qq, pp):
        return evaluate_hd_plus(system, basis, nodes, h, qq, pp, config=config).value

    d1 = np.empty_like(q0)
    for k in range(q0.size):
        eps = FD_STEP * max(1.0, abs(q0[k]))
        hi, lo = q0.copy(), q0.copy()
        hi[k] += eps
        lo[k] -= eps
        d1[k] = (value_at(hi, p1) - value_at(lo, p1)) / (2 * eps)

    d2 = np.empty_like(p1)
    for k in range(p1.size):
        eps = FD_STEP * max(1.0, abs(p1[k]))
        hi, lo = p1.copy(), p1.copy()
        hi[k] += eps
        lo[k] -= eps
        d2[k] = (value_at(q0, hi) - value_at(q0, lo)) / (2 * eps)

    return (float(np.max(np.abs(d1 - p0))), float(np.max(np.abs(d2 - q1))))


@dataclass
class DiscreteActionAccumulator:
    S_values: np.ndarray
    q0_fixed: np.ndarray


def accumulate_action(trajectory, hd_values):
    """Accumulated discrete action along a trajectory.

    hd_values[k] must be the generating-function value at (q_k, p_{k+1}).
    Seeds with S_0 = p0 . q0 and applies the increment recurrence
    S_{k+1} = S_k + Hd(q_k, p_{k+1}) - p_k . q_k using compensated
    summation.
    """
    q, p = trajectory.q, trajectory.p
    n_steps = len(trajectory) - 1
    if len(hd_values) != n_steps:
        raise ValueError(f"expected {n_steps} generating-function values, "
                         f"got {len(hd_values)}")
    S = np.empty(n_steps + 1)
    total = float(p[0] @ q[0])
    comp = 0.0  # Kahan carry
    S[0] = total
    for k in range(n_steps):
        incr = hd_values[k] - float(p[k] @ q[k])
        y = incr - comp
        t = total + y
        comp = (t - total) - y
        total = t
        S[k + 1] = total
    return DiscreteActionAccumulator(S_values=S, q0_fixed=q[0].copy())


def action_direct_sum(trajectory, hd_values, k):
    """Direct-sum form of the accumulated action at step k (cross-check)."""
    q, p = trajectory.q, trajectory.p
    terms = [float(p[l + 1] @ q[l + 1]) - hd_values[l] for l in range(k)]
    return float(p[k] @ q[k]) - math.fsum(terms)


# ---------------------------------------------------------------------------
# discrete Hamilton-Jacobi verification (scalar systems)
# ---------------------------------------------------------------------------

def _action_of_p0(system, tableau, basis, nodes, config, q0, p0, k):
    """Trajectory from (q0, p0) and its accumulated action at step k."""
    if k == 0:
        return float(p0[0] * q0[0]), q0.copy(), p0.copy()
    traj = integrate_tableau(system, tableau, config, q0, p0, k)
    hd = [evaluate_hd_plus(system, basis, nodes, config.h, traj.q[l],
                           traj.p[l + 1], config=config).value
          for l in range(k)]
    acc = accumulate_action(traj, hd)
    return acc.S_values[k], traj.q[k], traj.p[k]


def _shoot_p0(system, tableau, config, q0, p0_guess, k, target_pk,
              tol=1e-13, max_iter=30):
    """Secant iteration on p0 so that the step-k momentum equals target_pk."""
    def end_momentum(p0val):
        traj = integrate_tableau(system, tableau, config, q0,
                                 np.array([p0val]), k)
        return traj.p[k, 0]

    x0 = float(p0_guess)
    f0 = end_momentum(x0) - target_pk
    if abs(f0) <= tol * max(1.0, abs(target_pk)):
        return x0
    x1 = x0 + max(1e-7, 1e-7 * abs(x0))
    f1 = end_momentum(x1) - target_pk
    for _ in range(max_iter):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        x0, f0, x1 = x1, f1, x2
        f1 = end_momentum(x1) - target_pk
        if abs(f1) <= tol * max(1.0, abs(target_pk)):
            return x1
    raise SolverError("shooting for the end momentum did not converge "
                      "(non-invertible discrete flow for this step size)",
                      residual=abs(f1), iterations=max_iter)


def discrete_hj_check(system, basis, nodes, h, q0, p0, k, config=None):
    """|D S_d^k(p_k) - q_k| via shooting and central differences (n = 1)."""
    defect, _ = discrete_hj_data(system, basis, nodes, h, q0, p0, k,
                                 config=config)
    return defect


def discrete_hj_data(system, basis, nodes, h, q0, p0, k, config=None):
    """Gradient defect and Hamilton-Jacobi recurrence residual at step k.

    Returns (|D S_d^k - q_k|, |(S^{k+1} - S^k) - (Hd(D S^k, p_{k+1})
    - p_k . D S^k)|).  Scalar systems only.
    """
    if system.n != 1:
        raise ValueError("discrete Hamilton-Jacobi check supports n = 1 only")
    q0 = np.asarray(q0, float)
    p0 = np.asarray(p0, float)
    if config is None:
        config = StepperConfig(h=h)
    tableau = build_tableau(basis, nodes)

    # nominal trajectory out to k+1 steps (k+1 needed for the HJ residual)
    traj = integrate_tableau(system, tableau, config, q0, p0, k + 1)
    pk = traj.p[k, 0]
    qk = traj.q[k, 0]

    def S_at(pk_target):
        if k == 0:
            return float(pk_target * q0[0])
        p0_star = _shoot_p0(system, tableau, config, q0, p0[0], k, pk_target)
        S, _, _ = _action_of_p0(system, tableau, basis, nodes, config,
                                q0, np.array([p0_star]), k)
        return S

    eps = FD_STEP * max(1.0, abs(pk))
    DS = (S_at(pk + eps) - S_at(pk - eps)) / (2 * eps)
    gradient_defect = abs(DS - qk)

    # recurrence residual using the shooting-derived gradient
    hd = [evaluate_hd_plus(system, basis, nodes, h, traj.q[l], traj.p[l + 1],
                           config=config).value for l in range(k + 1)]
    acc = accumulate_action(traj, hd)
    lhs = acc.S_values[k + 1] - acc.S_values[k]
    hd_at_DS = evaluate_hd_plus(system, basis, nodes, h, np.array([DS]),
                                traj.p[k + 1], config=config).value
    rhs = hd_at_DS - pk * DS
    return gradient_defect, abs(lhs - rhs)
