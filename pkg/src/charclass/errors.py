"""Exception hierarchy.

Every error raised on purpose by the engine derives from :class:`CharClassError`;
the CLI maps those to exit status 2 with a machine-readable error object.
"""


class CharClassError(Exception):
    """Base class for domain errors."""


class ParseError(CharClassError, ValueError):
    pass


class PresentationMismatchError(CharClassError):
    """A polynomial mentions a generator the target presentation lacks."""


class DegreeMismatchError(CharClassError):
    pass


class NotInvertibleError(CharClassError, ZeroDivisionError):
    pass


class NonIntegralClassError(CharClassError):
    """A rational class has a denominator divisible by the target prime."""


class InconsistencyError(CharClassError):
    """An internal cross-check failed (e.g. two polynomials not proportional)."""


class ModelError(CharClassError):
    """A bundle model or manifold fixture is malformed."""


class ConfigurationError(CharClassError):
    """A Steenrod table lacks data required by a computation."""


class InvalidDescriptorError(CharClassError):
    pass


class NoSplittingNeeded(CharClassError):
    """Raised for n = 3 mod 4, where pi_0(MTSO(n)) is already the bordism group."""


class FixtureNotFoundError(CharClassError, FileNotFoundError):
    pass
