"""Exception hierarchy.

Every failure raised by the library derives from :class:`FormalHeckeError`, so
callers (and the command line front end) can catch one type.
"""


class FormalHeckeError(Exception):
    """Base class for all library errors."""


class DimensionError(FormalHeckeError, ValueError):
    """Operands live in different series rings (variable count or cap)."""


class UnitError(FormalHeckeError, ArithmeticError):
    """An element that must be invertible is not."""


class CompositionError(FormalHeckeError, ValueError):
    """A substitution would need infinitely many terms."""


class NoInverseError(FormalHeckeError, ArithmeticError):
    """A series has no compositional inverse."""


class DivisibilityError(FormalHeckeError, ArithmeticError):
    """Exact division left a nonzero remainder.

    ``degree`` is the total degree at which the remainder showed up and
    ``monomial`` / ``coefficient`` describe one offending term.
    """

    def __init__(self, message, degree=None, monomial=None, coefficient=None):
        super().__init__(message)
        self.degree = degree
        self.monomial = monomial
        self.coefficient = coefficient


class InvalidFGLError(FormalHeckeError, ValueError):
    """A bivariate series fails one of the formal group law axioms."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class InsufficientExpansionError(FormalHeckeError, ValueError):
    """A law is only known to finite order and more was requested."""


class NormalizationUnavailableError(FormalHeckeError, ValueError):
    """Normalization needs a nonzero kappa and an invertible a11."""


class UnsupportedRingError(FormalHeckeError, ValueError):
    """The law is outside the supported class (kappa != 0 with a11 = 0)."""


class UnsupportedDatumError(FormalHeckeError, ValueError):
    """Unknown Cartan type, rank or lattice."""


class PoleError(FormalHeckeError, ArithmeticError):
    """A localized element was expected to be a power series but is not."""


class ParseError(FormalHeckeError, ValueError):
    """Malformed textual input (law names, data, scalars)."""
