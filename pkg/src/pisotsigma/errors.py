"""Exception hierarchy shared by all modules."""


class PisotSigmaError(Exception):
    """Base class for toolkit errors."""


class InputError(PisotSigmaError, ValueError):
    """A precondition on the inputs is violated (bad grammar, range, form)."""


class PrecisionCapExceeded(PisotSigmaError):
    """Working precision reached the configured cap without certifying a result."""

    def __init__(self, message, bits=None):
        super().__init__(message)
        self.bits = bits


class UndecidedComparison(PrecisionCapExceeded):
    """A certified comparison (modulus vs 1, tie of moduli) could not be decided."""


class InsufficientPrecision(PisotSigmaError):
    """An enclosure is too wide for the requested decision; re-evaluate at higher precision."""
