"""Exception types shared across the toolkit."""


class TailsitterError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(TailsitterError, ValueError):
    """Invalid parameters, shapes or configuration keys."""


class DivergenceError(TailsitterError, FloatingPointError):
    """A simulation or training run produced non-finite numbers.

    ``time`` holds the simulation time (s) or ``epoch`` the training epoch
    at which the failure was detected, whichever applies.
    """

    def __init__(self, message, time=None, epoch=None):
        super().__init__(message)
        self.time = time
        self.epoch = epoch


class DomainError(TailsitterError, ValueError):
    """Argument outside the mathematical domain of an operation."""
