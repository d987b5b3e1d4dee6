import numpy as np
import pytest

from galsprk.generating import (
    accumulate_action,
    action_direct_sum,
    discrete_hj_data,
    evaluate_hd_plus,
    verify_type2_identities,
)
from galsprk.integrator import StepperConfig, integrate_tableau, sprk_step
from galsprk.systems import builtin
from galsprk.tableau import build_tableau, preset_method

TIGHT = dict(solver_abs_tol=1e-14, solver_rel_tol=1e-14)


def test_zero_step_value_is_boundary_pairing():
    system = builtin("harmonic")
    basis, nodes = preset_method("midpoint")
    q0, p1 = np.array([0.7]), np.array([-0.4])
    ev = evaluate_hd_plus(system, basis, nodes, 0.0, q0, p1)
    assert ev.value == pytest.approx(0.7 * -0.4, abs=1e-14)
    assert ev.p0_implied == pytest.approx(p1, abs=1e-14)
    assert ev.q1_implied == pytest.approx(q0, abs=1e-14)


@pytest.mark.parametrize("preset", ["midpoint", "stormer_verlet", "trig3", "cheb3"])
@pytest.mark.parametrize("sysname", ["harmonic", "pendulum", "bilinear"])
def test_closed_form_equals_direct_sum(preset, sysname):
    system = builtin(sysname)
    basis, nodes = preset_method(preset)
    h = 0.1
    cfg = StepperConfig(h=h, **TIGHT)
    q0 = np.full(system.n, 0.9)
    p1 = np.full(system.n, 0.3)
    ev = evaluate_hd_plus(system, basis, nodes, h, q0, p1, config=cfg)
    assert abs(ev.value - ev.value_direct) <= 1e-12 * max(1.0, abs(ev.value))


def test_boundary_evaluation_round_trips_the_step():
    # stepping forward and evaluating at (q0, p1) must recover (p0, q1)
    system = builtin("pendulum")
    basis, nodes = preset_method("trig3")
    tab = build_tableau(basis, nodes)
    h = 0.1
    cfg = StepperConfig(h=h, **TIGHT)
    q0, p0 = np.array([1.0]), np.array([0.3])
    q1, p1, _ = sprk_step(system, tab, cfg, q0, p0)
    ev = evaluate_hd_plus(system, basis, nodes, h, q0, p1, config=cfg)
    assert ev.p0_implied == pytest.approx(p0, abs=1e-11)
    assert ev.q1_implied == pytest.approx(q1, abs=1e-11)


@pytest.mark.parametrize("sysname", ["harmonic", "pendulum", "kepler2d", "bilinear"])
def test_gradient_identities(sysname):
    system = builtin(sysname)
    basis, nodes = preset_method("cheb2")
    q0 = np.full(system.n, 1.0)
    p0 = np.full(system.n, 0.4)
    cfg = StepperConfig(h=0.1, **TIGHT)
    d1, d2 = verify_type2_identities(system, basis, nodes, 0.1, q0, p0, config=cfg)
    assert d1 < 1e-6
    assert d2 < 1e-6


def test_accumulated_action_matches_direct_sum():
    system = builtin("harmonic")
    basis, nodes = preset_method("midpoint")
    tab = build_tableau(basis, nodes)
    cfg = StepperConfig(h=0.1, **TIGHT)
    traj = integrate_tableau(system, tab, cfg, np.array([1.0]), np.array([0.0]), 20)
    hd = [evaluate_hd_plus(system, basis, nodes, 0.1, traj.q[k], traj.p[k + 1],
                           config=cfg).value for k in range(20)]
    acc = accumulate_action(traj, hd)
    assert acc.S_values[0] == pytest.approx(0.0, abs=1e-15)
    for k in (1, 5, 20):
        assert acc.S_values[k] == pytest.approx(action_direct_sum(traj, hd, k),
                                                abs=1e-13)


def test_accumulate_action_length_check():
    system = builtin("harmonic")
    basis, nodes = preset_method("midpoint")
    cfg = StepperConfig(h=0.1)
    traj = integrate_tableau(system, build_tableau(basis, nodes), cfg,
                             np.array([1.0]), np.array([0.0]), 3)
    with pytest.raises(ValueError):
        accumulate_action(traj, [0.0, 0.0])


def test_hj_at_step_zero():
    system = builtin("harmonic")
    basis, nodes = preset_method("midpoint")
    grad, res = discrete_hj_data(system, basis, nodes, 0.1,
                                 np.array([1.0]), np.array([0.0]), 0)
    # S_d^0(p) = p q0 so the gradient is exactly q0
    assert grad < 1e-9
    assert res < 1e-9


def test_hj_requires_scalar_system():
    system = builtin("kepler2d")
    basis, nodes = preset_method("midpoint")
    with pytest.raises(ValueError):
        discrete_hj_data(system, basis, nodes, 0.1,
                         np.array([1.0, 0.0]), np.array([0.0, 1.2]), 3)
