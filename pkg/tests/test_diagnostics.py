import numpy as np
import pytest

from galsprk.diagnostics import (
    convergence_order,
    diagnostics_csv,
    energy_drift_windows,
    energy_series,
    momentum_drift,
    momentum_series,
    reference_state,
    symplecticity_defect,
    trajectory_csv,
)
from galsprk.integrator import StepperConfig, Trajectory, integrate_tableau
from galsprk.systems import SymmetryGenerator, builtin
from galsprk.tableau import explicit_euler_tableau, preset_tableau

TIGHT = dict(solver_abs_tol=1e-14, solver_rel_tol=1e-14)


def test_midpoint_step_jacobian_is_symplectic():
    cfg = StepperConfig(h=0.1, **TIGHT)
    defect = symplecticity_defect(builtin("pendulum"), preset_tableau("midpoint"),
                                  cfg, (np.array([1.0]), np.array([0.0])))
    assert defect < 1e-8


def test_explicit_euler_defect_is_h_squared_on_harmonic():
    # step Jacobian I + h J gives J^T Omega J - Omega = h^2 Omega exactly
    h = 0.1
    cfg = StepperConfig(h=h, **TIGHT)
    defect = symplecticity_defect(builtin("harmonic"), explicit_euler_tableau(),
                                  cfg, (np.array([1.0]), np.array([0.0])))
    assert defect == pytest.approx(h * h, abs=1e-8)


def test_energy_series_starts_at_zero():
    system = builtin("harmonic")
    cfg = StepperConfig(h=0.1, **TIGHT)
    traj = integrate_tableau(system, preset_tableau("cheb2"), cfg,
                             np.array([1.0]), np.array([0.0]), 50)
    e = energy_series(system, traj)
    assert e[0] == 0.0
    assert np.max(np.abs(e)) < 1e-12


def test_momentum_series_accepts_raw_generator_matrix():
    traj = Trajectory(times=np.array([0.0]),
                      q=np.array([[1.0, 0.0]]), p=np.array([[0.0, 1.2]]))
    G = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert momentum_series(traj, G) == pytest.approx([0.0])
    assert momentum_drift(traj, SymmetryGenerator(G=G)) == 0.0


def test_energy_drift_windows():
    flat = np.full(100, 2.5e-4)
    mx, drift = energy_drift_windows(flat)
    assert mx == pytest.approx(2.5e-4)
    assert drift == 0.0


def test_reference_state_uses_exact_flow():
    system = builtin("harmonic")
    q, p = reference_state(system, [1.0], [0.0], 1.0)
    qe, pe = system.exact_flow(np.array([1.0]), np.array([0.0]), 1.0)
    assert q == pytest.approx(qe)
    assert p == pytest.approx(pe)


def test_reference_state_numerical_fallback():
    # pendulum has no exact flow; fall back to a fine fourth-order run and
    # cross-check against a separate even finer one
    system = builtin("pendulum")
    q, p = reference_state(system, [1.0], [0.0], 1.0, h_ref=1.0 / 500)
    cfg = StepperConfig(h=1.0 / 2000, **TIGHT)
    traj = integrate_tableau(system, preset_tableau("cheb3"), cfg,
                             np.array([1.0]), np.array([0.0]), 2000)
    assert q == pytest.approx(traj.q[-1], abs=1e-10)
    assert p == pytest.approx(traj.p[-1], abs=1e-10)


def test_convergence_order_midpoint_harmonic():
    slope, errors = convergence_order(
        builtin("harmonic"), preset_tableau("midpoint"),
        [1.0], [0.0], 1.0, [0.2, 0.1, 0.05, 0.025])
    assert slope == pytest.approx(2.0, abs=0.1)
    assert all(e1 > e2 for e1, e2 in zip(errors, errors[1:]))


def test_convergence_order_argument_checks():
    system = builtin("harmonic")
    tab = preset_tableau("midpoint")
    with pytest.raises(ValueError):
        convergence_order(system, tab, [1.0], [0.0], 1.0, [0.2, 0.1])
    with pytest.raises(ValueError):
        convergence_order(system, tab, [1.0], [0.0], 1.0, [0.2, 0.15, 0.11])


def test_trajectory_csv_layout():
    system = builtin("kepler2d")
    cfg = StepperConfig(h=0.1, **TIGHT)
    traj = integrate_tableau(system, preset_tableau("cheb2"), cfg,
                             np.array([1.0, 0.0]), np.array([0.0, 1.2]), 5)
    gen = SymmetryGenerator(G=system.rotation_generator)
    lines = trajectory_csv(system, traj, gen).strip().split("\n")
    assert lines[0] == "k,t,q_1,q_2,p_1,p_2,energy_error,momentum_error"
    assert len(lines) == 7
    row0 = lines[1].split(",")
    assert row0[0] == "0"
    assert float(row0[2]) == 1.0


def test_diagnostics_csv_summary():
    system = builtin("harmonic")
    cfg = StepperConfig(h=0.1, **TIGHT)
    traj = integrate_tableau(system, preset_tableau("midpoint"), cfg,
                             np.array([1.0]), np.array([0.0]), 5)
    text = diagnostics_csv(system, traj)
    assert text.startswith("k,t,energy_error,momentum_error\n")
    assert "# max_energy_error," in text
