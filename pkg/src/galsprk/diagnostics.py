"""Structure-preservation diagnostics: symplecticity, drift, convergence order."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GalsprkError
from .integrator import StepperConfig, integrate_tableau, sprk_step
from .systems import SymmetryGenerator
from .tableau import preset_tableau

FD_EPS = 1e-6


@dataclass
class DiagnosticsReport:
    symplecticity_defect: Optional[float] = None
    energy_series: Optional[np.ndarray] = None
    momentum_series: Optional[np.ndarray] = None
    order_estimate: Optional[float] = None


def canonical_omega(n):
    O = np.zeros((2 * n, 2 * n))
    O[:n, n:] = np.eye(n)
    O[n:, :n] = -np.eye(n)
    return O


def symplecticity_defect(system, tableau, config, state):
    """||J^T Omega J - Omega||_inf for the finite-difference step Jacobian."""
    q0, p0 = (np.asarray(x, float) for x in state)
    n = system.n
    z0 = np.concatenate([q0, p0])
    eps = FD_EPS * max(1.0, float(np.max(np.abs(z0))))

    def step(z):
        q1, p1, _ = sprk_step(system, tableau, config, z[:n], z[n:])
        return np.concatenate([q1, p1])

    J = np.empty((2 * n, 2 * n))
    for k in range(2 * n):
        hi, lo = z0.copy(), z0.copy()
        hi[k] += eps
        lo[k] -= eps
        J[:, k] = (step(hi) - step(lo)) / (2 * eps)

    O = canonical_omega(n)
    return float(np.max(np.abs(J.T @ O @ J - O)))


def energy_series(system, trajectory):
    """H(q_k, p_k) - H(q_0, p_0) along a trajectory."""
    vals = np.array([system.value(q, p)
                     for q, p in zip(trajectory.q, trajectory.p)])
    return vals - vals[0]


def momentum_series(trajectory, generator):
    """J(q_k, p_k) - J(q_0, p_0) for a symmetry generator."""
    if not isinstance(generator, SymmetryGenerator):
        generator = SymmetryGenerator(G=np.asarray(generator, float))
    vals = np.array([generator.momentum(q, p)
                     for q, p in zip(trajectory.q, trajectory.p)])
    return vals - vals[0]


def momentum_drift(trajectory, generator):
    """max_k |J(q_k,p_k) - J(q_0,p_0)|."""
    return float(np.max(np.abs(momentum_series(trajectory, generator))))


def energy_drift_windows(series, window_fraction=0.05):
    """(max |dH|, |mean first window - mean last window|) of |dH|.

    Windowed means are robust to the oscillatory energy error typical of
    symplectic methods; a difference between the windows indicates secular
    drift.
    """
    abs_err = np.abs(series)
    w = max(1, int(len(series) * window_fraction))
    return float(abs_err.max()), float(abs(abs_err[:w].mean() - abs_err[-w:].mean()))


# ---------------------------------------------------------------------------
# reference solutions and convergence order
# ---------------------------------------------------------------------------

def reference_state(system, q0, p0, T, h_ref=None):
    """High-accuracy state at time T: exact flow if available, otherwise the
    two-stage Gauss-type method at a fine step with a Richardson sanity
    check."""
    q0 = np.asarray(q0, float)
    p0 = np.asarray(p0, float)
    if system.exact_flow is not None:
        q, p = system.exact_flow(q0, p0, T)
        return np.asarray(q, float), np.asarray(p, float)

    if h_ref is None:
        h_ref = T / 4000.0
    tab = preset_tableau("cheb2")

    def run(h):
        n = max(1, round(T / h))
        cfg = StepperConfig(h=T / n, solver_abs_tol=1e-14, solver_rel_tol=1e-14)
        traj = integrate_tableau(system, tab, cfg, q0, p0, n)
        return traj.q[-1], traj.p[-1]

    q_a, p_a = run(h_ref)
    q_b, p_b = run(h_ref / 2.0)
    gap = max(np.max(np.abs(q_a - q_b)), np.max(np.abs(p_a - p_b)))
    if gap > 1e-10:
        raise GalsprkError(
            f"reference solution failed its Richardson check (gap {gap:.3e})")
    return q_b, p_b


def convergence_order(system, tableau, q0, p0, T, h_list, config_kwargs=None,
                      reference=None):
    """Empirical order: least-squares slope of log(error) vs log(h).

    error(h) is the max-norm state error at time T against the exact flow
    (or a supplied reference).  Errors at the rounding floor (< 1e-13) are
    excluded from the fit.
    """
    q0 = np.asarray(q0, float)
    p0 = np.asarray(p0, float)
    if len(h_list) < 3:
        raise ValueError("need at least 3 step sizes for an order fit")
    if reference is None:
        q_ref, p_ref = reference_state(system, q0, p0, T)
    else:
        q_ref, p_ref = (np.asarray(x, float) for x in reference)

    kw = dict(solver_abs_tol=1e-14, solver_rel_tol=1e-14)
    kw.update(config_kwargs or {})
    errors = []
    for h in h_list:
        n = round(T / h)
        if abs(n * h - T) > 1e-12 * max(1.0, T):
            raise ValueError(f"step size {h} does not divide T={T}")
        cfg = StepperConfig(h=h, **kw)
        traj = integrate_tableau(system, tableau, cfg, q0, p0, n)
        err = max(np.max(np.abs(traj.q[-1] - q_ref)),
                  np.max(np.abs(traj.p[-1] - p_ref)))
        errors.append(float(err))

    pts = [(h, e) for h, e in zip(h_list, errors) if e > 1e-13]
    if len(pts) < 2:
        raise GalsprkError("not enough error points above the rounding floor")
    lh = np.log([h for h, _ in pts])
    le = np.log([e for _, e in pts])
    slope = float(np.polyfit(lh, le, 1)[0])
    return slope, errors


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------

def _fmt(x):
    return f"{x:.17g}"


def trajectory_csv(system, trajectory, generator=None):
    """CSV rows `k,t,q_1..q_n,p_1..p_n,energy_error[,momentum_error]`."""
    n = system.n
    e = energy_series(system, trajectory)
    m = momentum_series(trajectory, generator) if generator is not None else None
    out = io.StringIO()
    header = (["k", "t"] + [f"q_{i+1}" for i in range(n)]
              + [f"p_{i+1}" for i in range(n)] + ["energy_error"])
    if m is not None:
        header.append("momentum_error")
    out.write(",".join(header) + "\n")
    for k in range(len(trajectory)):
        row = [str(k), _fmt(trajectory.times[k])]
        row += [_fmt(v) for v in trajectory.q[k]]
        row += [_fmt(v) for v in trajectory.p[k]]
        row.append(_fmt(e[k]))
        if m is not None:
            row.append(_fmt(m[k]))
        out.write(",".join(row) + "\n")
    return out.getvalue()


def diagnostics_csv(system, trajectory, generator=None):
    """CSV report `k,t,energy_error,momentum_error` with a summary block."""
    e = energy_series(system, trajectory)
    m = momentum_series(trajectory, generator) if generator is not None else None
    out = io.StringIO()
    out.write("k,t,energy_error,momentum_error\n")
    for k in range(len(trajectory)):
        mom = _fmt(m[k]) if m is not None else ""
        out.write(f"{k},{_fmt(trajectory.times[k])},{_fmt(e[k])},{mom}\n")
    out.write("# summary\n")
    out.write(f"# max_energy_error,{_fmt(float(np.max(np.abs(e))))}\n")
    if m is not None:
        out.write(f"# max_momentum_error,{_fmt(float(np.max(np.abs(m))))}\n")
    return out.getvalue()
