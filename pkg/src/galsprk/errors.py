"""Exception types shared across the package."""


class GalsprkError(Exception):
    """Base class for all errors raised by this package."""


class InadmissibleMethodError(GalsprkError):
    """The basis/node pairing does not define a usable method.

    Raised for singular interpolation matrices, duplicate or out-of-range
    nodes, and induced quadrature weights that vanish.
    """


class QuadratureError(GalsprkError):
    """Numerical integration of a custom basis function failed to converge."""


class SolverError(GalsprkError):
    """The implicit stage equations could not be solved."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class IntegrationError(SolverError):
    """A stage solve failed mid-trajectory.

    Carries the partial trajectory computed so far and the index of the
    failing step.
    """

    def __init__(self, message, step_index, partial_trajectory, residual=None, iterations=None):
        super().__init__(message, residual=residual, iterations=iterations)
        self.step_index = step_index
        self.partial_trajectory = partial_trajectory


class NoLagrangianError(GalsprkError):
    """The Hamiltonian is degenerate, so no Lagrangian exists."""
