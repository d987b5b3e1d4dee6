"""Symplectic partitioned Runge-Kutta integrators built from Galerkin
discrete Hamiltonians, with structure-preservation verification tools."""

from .basis import (
    BasisIntegrals,
    BasisSet,
    chebyshev_nodes,
    check_nodes,
    compute_integrals,
    induced_quadrature,
    make_basis,
)
from .diagnostics import (
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
from .errors import (
    GalsprkError,
    InadmissibleMethodError,
    IntegrationError,
    NoLagrangianError,
    QuadratureError,
    SolverError,
)
from .generating import (
    accumulate_action,
    action_direct_sum,
    discrete_hj_check,
    discrete_hj_data,
    evaluate_hd_plus,
    verify_type2_identities,
)
from .integrator import (
    StageSolution,
    StepperConfig,
    Trajectory,
    direct_galerkin_step,
    galerkin_stepper,
    integrate,
    integrate_tableau,
    lagrangian_galerkin_step,
    lagrangian_stepper,
    sprk_step,
    sprk_stepper,
)
from .systems import (
    BUILTIN_NAMES,
    HamiltonianSystem,
    LagrangianSystem,
    SymmetryGenerator,
    builtin,
    check_gradients,
    legendre_to_lagrangian,
)
from .tableau import (
    PRESET_NAMES,
    SprkTableau,
    build_tableau,
    preset_method,
    preset_tableau,
    render_csv,
    render_text,
    validate_tableau,
)
from .verification import CheckResult, golden_tableaux, run_suites

__version__ = "0.1.0"

__all__ = [
    "BasisIntegrals", "BasisSet", "chebyshev_nodes", "check_nodes",
    "compute_integrals", "induced_quadrature", "make_basis",
    "convergence_order", "diagnostics_csv", "energy_drift_windows",
    "energy_series", "momentum_drift", "momentum_series", "reference_state",
    "symplecticity_defect", "trajectory_csv",
    "GalsprkError", "InadmissibleMethodError", "IntegrationError",
    "NoLagrangianError", "QuadratureError", "SolverError",
    "accumulate_action", "action_direct_sum", "discrete_hj_check",
    "discrete_hj_data", "evaluate_hd_plus", "verify_type2_identities",
    "StageSolution", "StepperConfig", "Trajectory", "direct_galerkin_step",
    "galerkin_stepper", "integrate", "integrate_tableau",
    "lagrangian_galerkin_step", "lagrangian_stepper", "sprk_step",
    "sprk_stepper",
    "BUILTIN_NAMES", "HamiltonianSystem", "LagrangianSystem",
    "SymmetryGenerator", "builtin", "check_gradients",
    "legendre_to_lagrangian",
    "PRESET_NAMES", "SprkTableau", "build_tableau", "preset_method",
    "preset_tableau", "render_csv", "render_text", "validate_tableau",
    "CheckResult", "golden_tableaux", "run_suites",
]
