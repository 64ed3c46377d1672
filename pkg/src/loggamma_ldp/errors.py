"""Exception hierarchy shared by all modules."""


class LogGammaLDPError(Exception):
    """Base class for every error raised by this package."""


class PoleError(LogGammaLDPError, ValueError):
    """Argument sits on a pole of Gamma (non-positive integer)."""


class UnsupportedOrder(LogGammaLDPError, ValueError):
    pass


class SingularityError(LogGammaLDPError, ValueError):
    """Phase function evaluated at one of its singular points."""


class DomainError(LogGammaLDPError, ValueError):
    pass


class NoRootError(LogGammaLDPError, RuntimeError):
    """Endpoint equation has no root in the search bracket."""


class QuadratureError(LogGammaLDPError, RuntimeError):
    """A quadrature result that must be real carries a large imaginary part."""


class ContourError(LogGammaLDPError, ValueError):
    """Contour placement violates the constraints of the kernel."""


class TruncationError(LogGammaLDPError, RuntimeError):
    """Truncated integration domain is not wide enough."""


class KernelOverflowError(LogGammaLDPError, OverflowError):
    """Log-magnitude of a contour integrand is too large to exponentiate."""
