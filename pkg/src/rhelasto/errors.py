"""Exception hierarchy shared by all modules."""


class RhelastoError(Exception):
    """Base class for errors raised by the package."""


class ParameterError(RhelastoError, ValueError):
    """Invalid physical or numerical parameter."""


class DomainError(RhelastoError, ValueError):
    """Argument outside the domain of a spectral map (e.g. zero)."""


class BranchPointError(RhelastoError, ValueError):
    """Evaluation exactly at a branch point of the radical."""


class BranchSelectionError(RhelastoError):
    """No root of an inverse map reproduces the requested point."""


class ClassificationError(RhelastoError, ValueError):
    """Point does not lie on any of the known contour segments."""


class ConvergenceError(RhelastoError):
    """An integral cannot converge for the requested arguments."""


class RefinementNeeded(RhelastoError):
    """Quadrature parameters are insufficient for the requested target."""


class NearPoleError(RhelastoError):
    """The global-relation determinant is too small to solve reliably."""

    def __init__(self, xi, det):
        self.xi = xi
        self.det = det
        super().__init__(f"|D(xi)| = {abs(det):.3e} at xi = {xi!r}: too close to a Rayleigh root")


class SecularEquationError(RhelastoError):
    """The Rayleigh secular equation has no admissible sign change."""


class ConfigError(RhelastoError, ValueError):
    """Configuration parse or validation failure."""
