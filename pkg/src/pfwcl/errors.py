"""Exception types shared across the package."""


class PfwclError(Exception):
    """Base class for all package-specific errors."""


class MeasureError(PfwclError, ValueError):
    """Invalid form-factor measure (bad fields or violated integrability)."""


class QuadratureError(PfwclError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The achieved error estimate is carried in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NumericalError(PfwclError, RuntimeError):
    """Linear-algebra stage failed (eigensolver, PSD check, linear solve)."""


class BasisSizeError(PfwclError, ValueError):
    """Requested truncated Fock basis exceeds the hard size guard."""
