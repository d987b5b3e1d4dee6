"""Verification suites behind the CLI `verify` subcommand and the tests.

Each suite returns a list of :class:`CheckResult`.  The golden tableau
values are closed forms frozen from exact symbolic integration of the
defining basis/node data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import momentum_drift, symplecticity_defect
from .generating import discrete_hj_data, evaluate_hd_plus, verify_type2_identities
from .integrator import (
    StepperConfig,
    direct_galerkin_step,
    integrate_tableau,
    lagrangian_galerkin_step,
    sprk_step,
)
from .systems import SymmetryGenerator, builtin, legendre_to_lagrangian
from .tableau import (
    PRESET_NAMES,
    explicit_euler_tableau,
    preset_method,
    preset_tableau,
    validate_tableau,
)

PI = math.pi
SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


@dataclass
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: measured {self.measured:.3e} "
                f"(tolerance {self.tolerance:.1e})")


def _check(name, measured, tolerance, invert=False):
    ok = measured > tolerance if invert else measured <= tolerance
    return CheckResult(name=name, measured=float(measured),
                       tolerance=float(tolerance), passed=bool(ok))


# ---------------------------------------------------------------------------
# golden tableaux (closed forms)
# ---------------------------------------------------------------------------

def golden_tableaux():
    """Expected (c, b, a, a_tilde) for every preset, as closed forms.

    The dual table entries follow the coefficient formula throughout; for
    the trapezoidal trig pair this is the row-swapped variant of the
    commonly tabulated Stormer-Verlet dual table.
    """
    g = {}
    g["symplectic_euler"] = ([0.0], [1.0], [[0.0]], [[1.0]])
    g["midpoint"] = ([0.5], [1.0], [[0.5]], [[0.5]])
    g["adjoint_euler"] = ([1.0], [1.0], [[1.0]], [[0.0]])
    g["stormer_verlet"] = (
        [0.0, 1.0], [0.5, 0.5],
        [[0.0, 0.0], [0.5, 0.5]],
        [[0.5, 0.0], [0.5, 0.0]])
    w = (PI - 2.0) / (2.0 * PI)
    g["trig3"] = (
        [0.0, 0.5, 1.0], [w, 2.0 / PI, w],
        [[0.0, 0.0, 0.0],
         [0.25, 1.0 / PI, (PI - 4.0) / (4.0 * PI)],
         [w, 2.0 / PI, w]],
        [[w, (PI - 4.0) / (PI * PI - 2.0 * PI), 0.0],
         [w, 1.0 / PI, 0.0],
         [w, 1.0 / (PI - 2.0), 0.0]])
    g["cheb1"] = ([0.5], [1.0], [[0.5]], [[0.5]])
    gauss_a = [[0.25, 0.25 - SQRT3 / 6.0], [0.25 + SQRT3 / 6.0, 0.25]]
    g["cheb2"] = (
        [0.5 - SQRT3 / 6.0, 0.5 + SQRT3 / 6.0], [0.5, 0.5],
        gauss_a, gauss_a)
    x, y, z = SQRT2 / 48.0, SQRT2 / 8.0, SQRT2 / 6.0
    sixth = 1.0 / 6.0
    cheb3_a = [
        [sixth + x, sixth - z, sixth - 5.0 * x],
        [sixth + y, sixth, sixth - y],
        [sixth + 5.0 * x, sixth + z, sixth - x]]
    cheb3_at = [
        [sixth - x, sixth - y, sixth - 5.0 * x],
        [sixth + z, sixth, sixth - z],
        [sixth + 5.0 * x, sixth + y, sixth + x]]
    g["cheb3"] = (
        [0.5 - SQRT2 / 4.0, 0.5, 0.5 + SQRT2 / 4.0],
        [1.0 / 3.0] * 3, cheb3_a, cheb3_at)
    return g


def suite_tableaux():
    results = []
    golden = golden_tableaux()
    for name in PRESET_NAMES:
        tab = preset_tableau(name)
        c, b, a, at = (np.asarray(v, float) for v in golden[name])
        defect = max(
            np.max(np.abs(tab.c - c)), np.max(np.abs(tab.b - b)),
            np.max(np.abs(tab.a - a)), np.max(np.abs(tab.a_tilde - at)))
        tol = 1e-14 if tab.s == 1 or name == "stormer_verlet" else 1e-12
        results.append(_check(f"golden tableau {name}", defect, tol))

        rep = validate_tableau(tab)
        results.append(_check(f"consistency {name}", rep.consistency_defect, 1e-13))
        results.append(_check(f"compatibility {name}", rep.compatibility_defect, 1e-13))
    return results


# ---------------------------------------------------------------------------
# symplecticity
# ---------------------------------------------------------------------------

_SYMPL_SYSTEMS = ("harmonic", "pendulum", "kepler2d", "bilinear")


def _sample_state(name):
    states = {
        "harmonic": ([1.0], [0.0]),
        "pendulum": ([1.0], [0.0]),
        "kepler2d": ([1.0, 0.0], [0.0, 1.2]),
        "bilinear": ([1.0], [1.0]),
        "point_vortex_pair": ([1.0, -1.0], [0.5, -0.25]),
    }
    q, p = states[name]
    return np.array(q), np.array(p)


def suite_symplecticity(h=0.1):
    results = []
    cfg = StepperConfig(h=h, solver_abs_tol=1e-14, solver_rel_tol=1e-14)
    for preset in PRESET_NAMES:
        tab = preset_tableau(preset)
        for sysname in _SYMPL_SYSTEMS:
            system = builtin(sysname)
            defect = symplecticity_defect(system, tab, cfg, _sample_state(sysname))
            results.append(_check(f"symplecticity {preset}/{sysname}", defect, 1e-6))
    control = symplecticity_defect(builtin("harmonic"), explicit_euler_tableau(),
                                   cfg, _sample_state("harmonic"))
    results.append(_check("explicit Euler control exceeds 1e-3 (harmonic)",
                          control, 1e-3, invert=True))
    return results


# ---------------------------------------------------------------------------
# stepper equivalence
# ---------------------------------------------------------------------------

def suite_equivalence(n_steps=100, h=0.05):
    results = []
    system = builtin("pendulum")
    basis, nodes = preset_method("trig3")
    tab = preset_tableau("trig3")
    cfg = StepperConfig(h=h, solver_abs_tol=1e-14, solver_rel_tol=1e-14)
    lsys = legendre_to_lagrangian(system)

    q_s = q_g = q_l = np.array([1.0])
    p_s = p_g = p_l = np.array([0.0])
    d_sg = d_lg = 0.0
    for _ in range(n_steps):
        q_s, p_s, _ = sprk_step(system, tab, cfg, q_s, p_s)
        q_g, p_g, _ = direct_galerkin_step(system, basis, nodes, cfg, q_g, p_g)
        q_l, p_l, _ = lagrangian_galerkin_step(lsys, basis, nodes, cfg, q_l, p_l)
        d_sg = max(d_sg, np.max(np.abs(q_s - q_g)), np.max(np.abs(p_s - p_g)))
        d_lg = max(d_lg, np.max(np.abs(q_l - q_g)), np.max(np.abs(p_l - p_g)))
    results.append(_check("SPRK vs direct Galerkin (pendulum, trig3)", d_sg, 1e-9))
    results.append(_check("Lagrangian vs Hamiltonian Galerkin (pendulum, trig3)",
                          d_lg, 1e-9))
    return results


# ---------------------------------------------------------------------------
# Noether / momentum
# ---------------------------------------------------------------------------

def suite_noether(n_steps=10_000, h=0.05):
    system = builtin("kepler2d")
    tab = preset_tableau("cheb2")
    cfg = StepperConfig(h=h, solver_abs_tol=1e-14, solver_rel_tol=1e-14)
    traj = integrate_tableau(system, tab, cfg,
                             np.array([1.0, 0.0]), np.array([0.0, 1.2]), n_steps)
    drift = momentum_drift(traj, SymmetryGenerator(G=system.rotation_generator))
    return [_check("Kepler angular momentum drift (cheb2)", drift, 1e-10)]


# ---------------------------------------------------------------------------
# generating-function identities
# ---------------------------------------------------------------------------

def suite_generating(h=0.1):
    results = []
    cfg = StepperConfig(h=h, solver_abs_tol=1e-14, solver_rel_tol=1e-14)
    for preset in PRESET_NAMES:
        basis, nodes = preset_method(preset)
        worst_grad = 0.0
        worst_rel = 0.0
        for sysname in ("harmonic", "pendulum", "kepler2d", "bilinear",
                        "point_vortex_pair"):
            system = builtin(sysname)
            q0, p0 = _sample_state(sysname)
            d1, d2 = verify_type2_identities(system, basis, nodes, h, q0, p0,
                                             config=cfg)
            worst_grad = max(worst_grad, d1, d2)
            tab = preset_tableau(preset)
            _, p1, _ = sprk_step(system, tab, cfg, q0, p0)
            ev = evaluate_hd_plus(system, basis, nodes, h, q0, p1, config=cfg)
            rel = abs(ev.value - ev.value_direct) / max(1.0, abs(ev.value))
            worst_rel = max(worst_rel, rel)
        results.append(_check(f"type II gradient identities {preset}", worst_grad, 1e-5))
        results.append(_check(f"closed-form vs direct-sum value {preset}", worst_rel, 1e-11))
    return results


# ---------------------------------------------------------------------------
# discrete Hamilton-Jacobi
# ---------------------------------------------------------------------------

def suite_hj(h=0.1, k_max=10):
    results = []
    basis, nodes = preset_method("midpoint")
    for sysname in ("harmonic", "bilinear"):
        system = builtin(sysname)
        q0, p0 = _sample_state(sysname)
        worst_grad = 0.0
        worst_res = 0.0
        for k in range(0, k_max + 1, 2):
            g, r = discrete_hj_data(system, basis, nodes, h, q0, p0, k)
            worst_grad = max(worst_grad, g)
            worst_res = max(worst_res, r)
        results.append(_check(f"discrete HJ gradient defect ({sysname})",
                              worst_grad, 1e-6))
        results.append(_check(f"discrete HJ recurrence residual ({sysname})",
                              worst_res, 1e-5))
    return results


SUITES = {
    "tableaux": suite_tableaux,
    "symplecticity": suite_symplecticity,
    "equivalence": suite_equivalence,
    "noether": suite_noether,
    "generating": suite_generating,
    "hj": suite_hj,
}


def run_suites(scope="all"):
    names = list(SUITES) if scope == "all" else [scope]
    results = []
    for name in names:
        results.extend(SUITES[name]())
    return results
