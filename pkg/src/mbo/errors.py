"""Exception types shared across the package."""


class MboError(Exception):
    """Base class for all errors raised by mbo."""


class InvalidArgument(MboError, ValueError):
    pass


class UnsupportedOperation(MboError):
    pass


class RegimeError(MboError, ValueError):
    """A closed-form expression was evaluated outside the regime it holds in."""


class DomainError(MboError, ValueError):
    pass


class ScheduleInfeasible(MboError, ValueError):
    pass


class DivergenceError(MboError, ArithmeticError):
    """A trajectory produced a non-finite state.

    ``at`` is the time (continuous mode) or the step index (discrete mode)
    of the first non-finite sample.
    """

    def __init__(self, message, at=None):
        super().__init__(message)
        self.at = at


class ConfigError(MboError, ValueError):
    pass
