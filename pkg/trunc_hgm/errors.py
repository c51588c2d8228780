class TruncHgmError(Exception):
    """Base class of every error raised by trunc_hgm."""


class InvalidModulusError(TruncHgmError, ValueError):
    """Modulus is not a prime, or is one of 2 and 3."""


class PreconditionError(TruncHgmError, ValueError):
    """An operation was called outside of its domain."""


class ExcludedJError(PreconditionError):
    """j-invariant in {0, 1728}."""


class BadRootError(PreconditionError):
    """A supplied square root does not square to its radicand."""


class HypothesisError(PreconditionError):
    """A hypothesis of the congruence theorem fails for an instance."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class UndefinedValuationError(TruncHgmError, ValueError):
    """Valuation of zero."""


class SingularCurveError(TruncHgmError, ValueError):
    """Weierstrass equation with zero discriminant."""


class ResourceLimitError(TruncHgmError):
    """A configured size bound would be exceeded."""


class PrecisionError(TruncHgmError, ArithmeticError):
    """A valuated residue does not carry enough precision for the request."""


class InvariantError(TruncHgmError, AssertionError):
    """An internal invariant failed. This is a bug, not a user error."""


class IntegralityError(InvariantError):
    """A quantity expected to be p-integral has negative valuation."""


class ConfigError(TruncHgmError):
    """Invalid run configuration, sink or suite id."""
