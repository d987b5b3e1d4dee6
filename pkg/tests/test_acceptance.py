"""End-to-end acceptance checks.

Each test covers one acceptance criterion, prints a single pass/fail line
(visible with ``pytest -s`` or on failure), and enforces the stated
tolerance and runtime budget.
"""

import math
import time

import numpy as np
import pytest

from galsprk.diagnostics import (
    convergence_order,
    energy_drift_windows,
    energy_series,
    momentum_drift,
    symplecticity_defect,
)
from galsprk.errors import NoLagrangianError
from galsprk.generating import (
    discrete_hj_data,
    evaluate_hd_plus,
    verify_type2_identities,
)
from galsprk.integrator import StepperConfig, integrate_tableau, sprk_step
from galsprk.systems import SymmetryGenerator, builtin, legendre_to_lagrangian
from galsprk.tableau import (
    PRESET_NAMES,
    explicit_euler_tableau,
    preset_method,
    preset_tableau,
)
from galsprk.verification import golden_tableaux, suite_equivalence

PI = math.pi
SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
TIGHT = dict(solver_abs_tol=1e-14, solver_rel_tol=1e-14)

SAMPLE_STATES = {
    "harmonic": ([1.0], [0.0]),
    "pendulum": ([1.0], [0.0]),
    "kepler2d": ([1.0, 0.0], [0.0, 1.2]),
    "bilinear": ([1.0], [1.0]),
    "point_vortex_pair": ([1.0, -1.0], [0.5, -0.25]),
}


def report(n, label, measured, ok):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {n} ({label}): {measured}")
    assert ok


def test_criterion_1_tableau_golden_values():
    t0 = time.monotonic()
    golden = golden_tableaux()
    worst = 0.0
    for name in PRESET_NAMES:
        tab = preset_tableau(name)
        c, b, a, at = (np.asarray(v, float) for v in golden[name])
        tol = 1e-14 if name in ("symplectic_euler", "midpoint", "adjoint_euler",
                                "stormer_verlet") else 1e-12
        defect = max(np.max(np.abs(tab.c - c)), np.max(np.abs(tab.b - b)),
                     np.max(np.abs(tab.a - a)), np.max(np.abs(tab.a_tilde - at)))
        assert defect <= tol, f"{name}: {defect}"
        worst = max(worst, defect)
    # the two-stage equal-weight method is the classical Gauss pair
    gauss = np.array([[0.25, 0.25 - SQRT3 / 6], [0.25 + SQRT3 / 6, 0.25]])
    tab2 = preset_tableau("cheb2")
    assert np.max(np.abs(tab2.a - gauss)) <= 1e-12
    assert np.max(np.abs(tab2.a_tilde - gauss)) <= 1e-12
    elapsed = time.monotonic() - t0
    report(1, "tableau golden values",
           f"max defect {worst:.2e}, {elapsed:.2f}s", elapsed < 1.0)


def test_criterion_2_consistency_and_compatibility():
    worst_c = worst_k = 0.0
    for name in PRESET_NAMES:
        tab = preset_tableau(name)
        worst_c = max(worst_c, abs(tab.b.sum() - 1.0))
        worst_k = max(worst_k, tab.compatibility_defect())
    report(2, "consistency/compatibility",
           f"|sum b - 1| {worst_c:.2e}, compat {worst_k:.2e}",
           worst_c < 1e-13 and worst_k < 1e-13)


def test_criterion_3_symplecticity():
    t0 = time.monotonic()
    cfg = StepperConfig(h=0.1, **TIGHT)
    worst = 0.0
    for preset in PRESET_NAMES:
        tab = preset_tableau(preset)
        for sysname in ("harmonic", "pendulum", "kepler2d", "bilinear"):
            system = builtin(sysname)
            q0, p0 = (np.array(v) for v in SAMPLE_STATES[sysname])
            defect = symplecticity_defect(system, tab, cfg, (q0, p0))
            assert defect < 1e-6, f"{preset}/{sysname}: {defect}"
            worst = max(worst, defect)
    control = symplecticity_defect(builtin("harmonic"), explicit_euler_tableau(),
                                   cfg, (np.array([1.0]), np.array([0.0])))
    elapsed = time.monotonic() - t0
    report(3, "symplecticity",
           f"max defect {worst:.2e}, control {control:.2e}, {elapsed:.1f}s",
           worst < 1e-6 and control > 1e-3 and elapsed < 10.0)


def test_criterion_4_convergence_orders():
    t0 = time.monotonic()
    system = builtin("harmonic")
    h_list = [0.2, 0.1, 0.05, 0.025]
    expected = {
        "symplectic_euler": (1.0, 0.1),
        "midpoint": (2.0, 0.1),
        "stormer_verlet": (2.0, 0.1),
        "trig3": (2.0, 0.2),
        "cheb2": (4.0, 0.2),
        "cheb3": (4.0, 0.3),
    }
    slopes = {}
    for name, (target, tol) in expected.items():
        slope, _ = convergence_order(system, preset_tableau(name),
                                     [1.0], [0.0], 1.0, h_list)
        assert abs(slope - target) <= tol, f"{name}: slope {slope}"
        slopes[name] = round(slope, 3)
    elapsed = time.monotonic() - t0
    report(4, "convergence orders", f"{slopes}, {elapsed:.1f}s", elapsed < 30.0)


def test_criterion_5_degenerate_hamiltonian():
    system = builtin("bilinear")
    with pytest.raises(NoLagrangianError):
        legendre_to_lagrangian(system)
    slope, _ = convergence_order(system, preset_tableau("midpoint"),
                                 [1.0], [1.0], 1.0, [0.2, 0.1, 0.05, 0.025])
    report(5, "degenerate Hamiltonian",
           f"midpoint order {slope:.3f} on H = q p", abs(slope - 2.0) <= 0.1)


def test_criterion_6_stepper_equivalence():
    results = suite_equivalence(n_steps=100, h=0.05)
    worst = max(r.measured for r in results)
    report(6, "stepper equivalence", f"max discrepancy {worst:.2e}",
           all(r.passed for r in results) and worst < 1e-9)


def test_criterion_7_noether_momentum():
    t0 = time.monotonic()
    system = builtin("kepler2d")
    cfg = StepperConfig(h=0.05, **TIGHT)
    traj = integrate_tableau(system, preset_tableau("cheb2"), cfg,
                             np.array([1.0, 0.0]), np.array([0.0, 1.2]), 10_000)
    drift = momentum_drift(traj, SymmetryGenerator(G=system.rotation_generator))
    elapsed = time.monotonic() - t0
    report(7, "Noether momentum",
           f"angular momentum drift {drift:.2e}, {elapsed:.1f}s",
           drift < 1e-10 and elapsed < 30.0)


def test_criterion_8_generating_function_identities():
    h = 0.1
    cfg = StepperConfig(h=h, **TIGHT)
    worst_grad = worst_rel = 0.0
    for preset in PRESET_NAMES:
        basis, nodes = preset_method(preset)
        tab = preset_tableau(preset)
        for sysname, (q0v, p0v) in SAMPLE_STATES.items():
            system = builtin(sysname)
            q0, p0 = np.array(q0v), np.array(p0v)
            d1, d2 = verify_type2_identities(system, basis, nodes, h, q0, p0,
                                             config=cfg)
            assert max(d1, d2) < 1e-5, f"{preset}/{sysname}: {d1}, {d2}"
            worst_grad = max(worst_grad, d1, d2)
            _, p1, _ = sprk_step(system, tab, cfg, q0, p0)
            ev = evaluate_hd_plus(system, basis, nodes, h, q0, p1, config=cfg)
            rel = abs(ev.value - ev.value_direct) / max(1.0, abs(ev.value))
            assert rel < 1e-11, f"{preset}/{sysname}: {rel}"
            worst_rel = max(worst_rel, rel)
    report(8, "generating-function identities",
           f"max gradient defect {worst_grad:.2e}, max relative gap {worst_rel:.2e}",
           worst_grad < 1e-5 and worst_rel < 1e-11)


def test_criterion_9_discrete_hamilton_jacobi():
    basis, nodes = preset_method("midpoint")
    worst_grad = worst_res = 0.0
    for sysname in ("harmonic", "bilinear"):
        system = builtin(sysname)
        q0, p0 = (np.array(v) for v in SAMPLE_STATES[sysname])
        for k in range(11):
            g, r = discrete_hj_data(system, basis, nodes, 0.1, q0, p0, k)
            assert g < 1e-6 and r < 1e-5, f"{sysname} k={k}: {g}, {r}"
            worst_grad = max(worst_grad, g)
            worst_res = max(worst_res, r)
    report(9, "discrete Hamilton-Jacobi",
           f"max gradient defect {worst_grad:.2e}, max residual {worst_res:.2e}",
           worst_grad < 1e-6 and worst_res < 1e-5)


def test_criterion_10_energy_behavior():
    t0 = time.monotonic()
    pend = builtin("pendulum")
    cfg = StepperConfig(h=0.1, solver_abs_tol=1e-13, solver_rel_tol=1e-13)
    traj = integrate_tableau(pend, preset_tableau("midpoint"), cfg,
                             np.array([1.0]), np.array([0.0]), 100_000)
    mx, drift = energy_drift_windows(energy_series(pend, traj))

    harm = builtin("harmonic")
    cfg2 = StepperConfig(h=0.1, **TIGHT)
    traj2 = integrate_tableau(harm, preset_tableau("cheb2"), cfg2,
                              np.array([1.0]), np.array([0.0]), 10_000)
    quad = float(np.max(np.abs(energy_series(harm, traj2))))
    elapsed = time.monotonic() - t0
    report(10, "energy behavior",
           f"pendulum max |dH| {mx:.2e}, window drift {drift:.2e}, "
           f"harmonic |dH| {quad:.2e}, {elapsed:.1f}s",
           mx < 1e-3 and drift < 1e-4 and quad < 1e-10 and elapsed < 60.0)
