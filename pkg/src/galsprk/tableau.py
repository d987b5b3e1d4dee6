"""Construction and validation of symplectic partitioned RK tableau pairs.

The tableau pair (a, a~) with shared weights b is built from a basis set and
a node set: b = M^-1 B, a = A M^-T, and the dual coefficients follow from
the closed formula a~_ij = (b_i b_j - b_j a_ji) / b_i, which guarantees the
symplecticity compatibility condition b_i a~_ij + b_j a_ji = b_i b_j.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .basis import (
    BasisIntegrals,
    chebyshev_nodes,
    compute_integrals,
    induced_quadrature,
    make_basis,
)
from .errors import InadmissibleMethodError

ZERO_WEIGHT_TOL = 1e-13


@dataclass(frozen=True)
class SprkTableau:
    """Coefficient pair of an s-stage symplectic partitioned RK method."""

    s: int
    c: np.ndarray
    b: np.ndarray
    a: np.ndarray
    a_tilde: np.ndarray
    c_tilde: np.ndarray
    provenance: str = ""
    contains_constant: bool = True

    def compatibility_defect(self):
        """max |b_i a~_ij + b_j a_ji - b_i b_j| over all (i, j)."""
        b = self.b
        lhs = b[:, None] * self.a_tilde + b[None, :] * self.a.T - np.outer(b, b)
        return float(np.max(np.abs(lhs)))


@dataclass(frozen=True)
class ValidationReport:
    consistency_defect: float
    compatibility_defect: float
    row_sum_defect: float
    admissible: bool
    notes: tuple = field(default_factory=tuple)

    def __str__(self):
        lines = [
            f"consistency defect   |sum b - 1|        : {self.consistency_defect:.3e}",
            f"compatibility defect max|b a~ + b a - bb|: {self.compatibility_defect:.3e}",
            f"row-sum defect       max|sum a - c|      : {self.row_sum_defect:.3e}",
            f"admissible: {'yes' if self.admissible else 'NO'}",
        ]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def build_tableau(basis, nodes, provenance=None):
    """Build the SPRK tableau pair induced by a basis set and node set."""
    integ = compute_integrals(basis, nodes)
    b = induced_quadrature(integ)
    if np.any(np.abs(b) < ZERO_WEIGHT_TOL):
        raise InadmissibleMethodError(
            "induced quadrature has a zero weight; basis/node pairing is inadmissible")
    c = np.asarray(nodes, dtype=float)
    # a = A M^-T: solve(M, A^T)^T = A M^-T
    a = np.linalg.solve(integ.M, integ.A_psi.T).T
    a_tilde = b[None, :] - (b[None, :] / b[:, None]) * a.T
    c_tilde = a_tilde.sum(axis=1)
    if provenance is None:
        provenance = f"{basis.kind} basis, s={basis.s}, nodes={list(c)}"
    return SprkTableau(s=basis.s, c=c, b=b, a=a, a_tilde=a_tilde,
                       c_tilde=c_tilde, provenance=provenance,
                       contains_constant=basis.contains_constant)


def validate_tableau(tab):
    """Defect report for consistency, compatibility, and row sums."""
    consistency = float(abs(tab.b.sum() - 1.0))
    compat = tab.compatibility_defect()
    row_sum = float(np.max(np.abs(tab.a.sum(axis=1) - tab.c)))
    notes = []
    admissible = compat < 1e-13 and np.all(np.abs(tab.b) > ZERO_WEIGHT_TOL)
    if tab.contains_constant:
        admissible = admissible and consistency < 1e-13 and row_sum < 1e-12
    if np.any(np.abs(tab.b) <= ZERO_WEIGHT_TOL):
        notes.append("zero quadrature weight")
    if compat >= 1e-13:
        notes.append("symplecticity compatibility condition violated")
    return ValidationReport(consistency_defect=consistency,
                            compatibility_defect=compat,
                            row_sum_defect=row_sum,
                            admissible=bool(admissible),
                            notes=tuple(notes))


# ---------------------------------------------------------------------------
# named presets
# ---------------------------------------------------------------------------

PRESET_NAMES = (
    "symplectic_euler", "midpoint", "adjoint_euler",
    "stormer_verlet", "trig3", "cheb1", "cheb2", "cheb3",
)

_PRESET_NOTES = {
    "stormer_verlet": (
        "dual table computed from the coefficient formula; differs from the "
        "commonly tabulated Stormer-Verlet dual table, which swaps the rows"),
}


def preset_method(name):
    """Return (basis, nodes) for a named preset method."""
    if name == "symplectic_euler":
        return make_basis("monomial", 1), np.array([0.0])
    if name == "midpoint":
        return make_basis("monomial", 1), np.array([0.5])
    if name == "adjoint_euler":
        return make_basis("monomial", 1), np.array([1.0])
    if name == "stormer_verlet":
        return make_basis("trig", 2), np.array([0.0, 1.0])
    if name == "trig3":
        return make_basis("trig", 3), np.array([0.0, 0.5, 1.0])
    if name in ("cheb1", "cheb2", "cheb3"):
        s = int(name[-1])
        nodes = chebyshev_nodes(s)
        return make_basis("lagrange", s, nodes=nodes), nodes
    raise InadmissibleMethodError(f"unknown preset {name!r}")


def preset_tableau(name):
    basis, nodes = preset_method(name)
    return build_tableau(basis, nodes, provenance=f"preset {name}")


def preset_note(name):
    return _PRESET_NOTES.get(name)


def explicit_euler_tableau():
    """Non-symplectic one-stage control method (a = a~ = 0); for diagnostics."""
    z = np.zeros((1, 1))
    return SprkTableau(s=1, c=np.array([0.0]), b=np.array([1.0]),
                       a=z.copy(), a_tilde=z.copy(), c_tilde=np.array([0.0]),
                       provenance="explicit Euler control (non-symplectic)")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt(x):
    return f"{x:.17g}"


def render_text(tab, verbose=False):
    """Aligned Butcher-style blocks for the primary and dual tables."""
    out = io.StringIO()

    def block(title, cs, mat):
        cells = [[_fmt(cs[i])] + [_fmt(mat[i, j]) for j in range(tab.s)]
                 for i in range(tab.s)]
        cells.append([""] + [_fmt(bj) for bj in tab.b])
        widths = [max(len(row[k]) for row in cells) for k in range(tab.s + 1)]
        out.write(title + "\n")
        for r, row in enumerate(cells):
            left = row[0].rjust(widths[0])
            rest = "  ".join(row[k + 1].rjust(widths[k + 1]) for k in range(tab.s))
            sep = " | "
            if r == tab.s:
                out.write("-" * (widths[0] + 3 + sum(widths[1:]) + 2 * (tab.s - 1)) + "\n")
            out.write(left + sep + rest + "\n")

    block("primary table (c | a / b):", tab.c, tab.a)
    out.write("\n")
    block("dual table (c~ | a~ / b):", tab.c_tilde, tab.a_tilde)
    if verbose:
        out.write(f"\nprovenance: {tab.provenance}\n")
    return out.getvalue()


def render_csv(tab):
    """Machine-readable export, one row per (i, j) pair."""
    lines = ["i,j,c_i,b_i,a_ij,atilde_ij"]
    for i in range(tab.s):
        for j in range(tab.s):
            lines.append(",".join([
                str(i + 1), str(j + 1), _fmt(tab.c[i]), _fmt(tab.b[i]),
                _fmt(tab.a[i, j]), _fmt(tab.a_tilde[i, j]),
            ]))
    return "\n".join(lines) + "\n"
