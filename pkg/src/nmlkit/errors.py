"""Exception hierarchy shared by every nmlkit module."""


class NMLError(Exception):
    """Base class for all nmlkit errors."""


class ConfigError(NMLError, ValueError):
    """Invalid model id, parameters, window or CLI configuration."""


class DomainError(NMLError, ValueError):
    """An argument lies outside the domain of a model or special function."""


class DataError(NMLError, ValueError):
    """A dataset record is outside the data domain of a model.

    Attributes
    ----------
    index : int or None
        Zero-based index of the offending record, when known.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class PoleError(DomainError):
    """Special function evaluated at a pole."""


class NumericalError(NMLError, ArithmeticError):
    """A numerical procedure produced an unusable result."""


class NonConvergence(NumericalError):
    """Adaptive procedure ran out of budget before meeting its tolerance.

    The best available estimate is attached so callers can still inspect it.
    """

    def __init__(self, message, value=float("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class IntegrabilityError(NumericalError):
    """Characteristic function does not decay fast enough for Fourier inversion."""


class UnsupportedDimension(NMLError, ValueError):
    """Requested integral dimension exceeds what the engine supports."""


class NoClosedForm(NMLError, LookupError):
    """The model row has no closed-form LPC expression."""


class EmptySelection(NMLError):
    """Every candidate in a model selection has infinite code length.

    Attributes
    ----------
    flags : list of str
        One diagnostic flag per candidate, in input order.
    """

    def __init__(self, message, flags=()):
        super().__init__(message)
        self.flags = list(flags)
