"""Exception types shared across the package."""


class SpecError(ValueError):
    """Invalid basis/operator/system description. CLI exit code 2."""


class NumericalError(RuntimeError):
    """Numerical failure (singular or ill-conditioned matrix, eigensolver
    breakdown). CLI exit code 3."""


class SolverError(RuntimeError):
    """Nonlinear solver failure in a time step. Carries the residual history
    and, from :func:`dualcomp.timeint.integrate`, any partial trajectory.
    CLI exit code 4."""

    def __init__(self, message, residual_history=None, partial=None):
        super().__init__(message)
        self.residual_history = list(residual_history or [])
        self.partial = partial
