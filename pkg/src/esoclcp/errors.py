"""Exception types shared across the package."""


class EsoclcpError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(EsoclcpError):
    """Operands have incompatible shapes or lengths."""


class SingularMatrix(EsoclcpError):
    """A matrix required to be nonsingular failed the pivot test."""


class ShapeUnsupported(EsoclcpError):
    """The operation is only defined for a restricted shape (e.g. l == k)."""


class DegenerateT(EsoclcpError):
    """The norm surrogate t is not strictly positive; recovery undefined."""


class InfeasibleXhat(EsoclcpError):
    """The shifted orthant variable has a negative entry beyond tolerance."""


class ZeroU(EsoclcpError):
    """The norm-part u vanishes where a nonzero u is required."""


class TooLarge(EsoclcpError):
    """Input exceeds the supported (desk scale) size."""
