"""Command-line front end: tableau construction, integration runs,
convergence studies, and the verification suites.

Exit codes: 0 success, 2 invalid specification, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .basis import make_basis
from .diagnostics import (
    energy_series,
    momentum_series,
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
from .integrator import StepperConfig, integrate_tableau
from .systems import BUILTIN_NAMES, SymmetryGenerator, builtin
from .tableau import (
    PRESET_NAMES,
    build_tableau,
    preset_method,
    preset_note,
    render_csv,
    render_text,
    validate_tableau,
)
from .verification import SUITES, run_suites

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

_DEFAULT_STATES = {
    "harmonic": ("1", "0"),
    "pendulum": ("1", "0"),
    "kepler2d": ("1,0", "0,1.2"),
    "bilinear": ("1", "1"),
    "point_vortex_pair": ("1,-1", "0.5,-0.25"),
}


def _parse_vector(text):
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise InadmissibleMethodError(f"could not parse vector {text!r}")


def _resolve_method(args):
    """(basis, nodes) from --preset or --basis/--s/--nodes flags."""
    if args.preset is not None:
        if args.basis is not None or args.nodes is not None:
            raise InadmissibleMethodError(
                "--preset is mutually exclusive with --basis/--s/--nodes")
        return preset_method(args.preset)
    if args.basis is None:
        raise InadmissibleMethodError("specify a method via --preset or --basis")
    if args.s is None or args.nodes is None:
        raise InadmissibleMethodError("--basis requires --s and --nodes")
    nodes = _parse_vector(args.nodes)
    if args.basis == "lagrange":
        basis = make_basis("lagrange", args.s, nodes=nodes)
    else:
        basis = make_basis(args.basis, args.s)
    return basis, nodes


def _resolve_system(args):
    if args.system not in BUILTIN_NAMES:
        raise InadmissibleMethodError(
            f"unknown system {args.system!r}; choose from {', '.join(BUILTIN_NAMES)}")
    return builtin(args.system)


def _resolve_state(args, system):
    q0 = args.q0 if args.q0 is not None else _DEFAULT_STATES[system.name][0]
    p0 = args.p0 if args.p0 is not None else _DEFAULT_STATES[system.name][1]
    q0, p0 = _parse_vector(q0), _parse_vector(p0)
    if q0.size != system.n or p0.size != system.n:
        raise InadmissibleMethodError(
            f"system {system.name!r} needs q0 and p0 of length {system.n}")
    return q0, p0


def _write_output(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)


def cmd_tableau(args):
    basis, nodes = _resolve_method(args)
    try:
        tab = build_tableau(basis, nodes)
    except (InadmissibleMethodError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"inadmissible method: {exc}\n")
        return EXIT_INVALID
    report = validate_tableau(tab)
    if not report.admissible:
        sys.stderr.write(str(report) + "\n")
        return EXIT_INVALID
    if args.format == "csv":
        _write_output(render_csv(tab), args.out)
    else:
        _write_output(render_text(tab, verbose=args.verbose), args.out)
        if args.verbose:
            note = preset_note(args.preset) if args.preset else None
            if note:
                sys.stdout.write(f"note: {note}\n")
            sys.stdout.write(str(report) + "\n")
    return EXIT_OK


def cmd_integrate(args):
    system = _resolve_system(args)
    basis, nodes = _resolve_method(args)
    tab = build_tableau(basis, nodes)
    q0, p0 = _resolve_state(args, system)
    if args.steps < 1:
        raise InadmissibleMethodError("--steps must be >= 1")
    cfg = StepperConfig(h=args.h, solver_abs_tol=args.tol, solver_rel_tol=args.tol)

    generator = None
    if args.momentum is not None:
        if args.momentum != "rotation":
            raise InadmissibleMethodError("only '--momentum rotation' is supported")
        if system.rotation_generator is None:
            raise InadmissibleMethodError(
                f"system {system.name!r} has no rotation symmetry generator")
        generator = SymmetryGenerator(G=system.rotation_generator)

    try:
        traj = integrate_tableau(system, tab, cfg, q0, p0, args.steps)
    except IntegrationError as exc:
        partial = exc.partial_trajectory
        csv = trajectory_csv(system, partial, generator)
        csv += f"# truncated at step {exc.step_index}: {exc}\n"
        _write_output(csv, args.out)
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL

    _write_output(trajectory_csv(system, traj, generator), args.out)
    e = energy_series(system, traj)
    summary = (f"final state q={traj.q[-1].tolist()} p={traj.p[-1].tolist()}; "
               f"max |dH| = {np.max(np.abs(e)):.6e}")
    if generator is not None:
        m = momentum_series(traj, generator)
        summary += f"; max |dJ| = {np.max(np.abs(m)):.6e}"
    sys.stdout.write(summary + "\n")
    return EXIT_OK


def cmd_convergence(args):
    from .diagnostics import convergence_order

    system = _resolve_system(args)
    if system.exact_flow is None:
        sys.stderr.write(
            f"system {system.name!r} has no exact-solution oracle; "
            "no reference configured for a convergence study\n")
        return EXIT_INVALID
    basis, nodes = _resolve_method(args)
    tab = build_tableau(basis, nodes)
    q0, p0 = _resolve_state(args, system)
    h_list = [float(x) for x in args.h_list.split(",")]
    if len(h_list) < 3:
        raise InadmissibleMethodError("--h-list needs at least 3 step sizes")

    slope, errors = convergence_order(system, tab, q0, p0, args.T, h_list)
    lines = ["h,error"]
    lines += [f"{h:.17g},{e:.17g}" for h, e in zip(h_list, errors)]
    lines.append(f"fitted order: {slope:.4f}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args):
    if args.scope != "all" and args.scope not in SUITES:
        raise InadmissibleMethodError(
            f"unknown scope {args.scope!r}; choose from "
            f"{', '.join(list(SUITES) + ['all'])}")
    results = run_suites(args.scope)
    for r in results:
        sys.stdout.write(r.line() + "\n")
    n_fail = sum(not r.passed for r in results)
    sys.stdout.write(f"{len(results) - n_fail}/{len(results)} checks passed\n")
    return EXIT_OK if n_fail == 0 else EXIT_NUMERICAL


def _add_method_flags(p):
    p.add_argument("--preset", choices=PRESET_NAMES)
    p.add_argument("--basis", choices=("monomial", "lagrange", "trig"))
    p.add_argument("--s", type=int)
    p.add_argument("--nodes", help="comma-separated nodes in [0,1]")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="galsprk",
        description="Symplectic partitioned Runge-Kutta methods from "
                    "Galerkin discrete Hamiltonians")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tableau", help="build and print a method tableau")
    _add_method_flags(p)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_tableau)

    p = sub.add_parser("integrate", help="integrate a built-in system")
    p.add_argument("--system", required=True)
    _add_method_flags(p)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--q0")
    p.add_argument("--p0")
    p.add_argument("--momentum", help="'rotation' adds a momentum_error column")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--out")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("convergence", help="empirical order study")
    p.add_argument("--system", required=True)
    _add_method_flags(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--h-list", required=True, dest="h_list",
                   help="comma-separated step sizes (at least 3)")
    p.add_argument("--q0")
    p.add_argument("--p0")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("verify", help="run the structure-preservation suites")
    p.add_argument("scope", nargs="?", default="all",
                   help="tableaux|symplecticity|equivalence|noether|generating|hj|all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InadmissibleMethodError, QuadratureError, NoLagrangianError,
            ValueError) as exc:
        sys.stderr.write(f"invalid specification: {exc}\n")
        return EXIT_INVALID
    except (SolverError, GalsprkError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
