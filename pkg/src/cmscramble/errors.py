"""Exception hierarchy shared by the simulation modules."""


class ScramblingError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSizeError(ScramblingError, ValueError):
    pass


class InvalidParameterError(ScramblingError, ValueError):
    pass


class ModeIndexError(ScramblingError, IndexError):
    pass


class ShapeError(ScramblingError, ValueError):
    pass


class InvalidMatrixError(ScramblingError, ValueError):
    """A matrix failed a structural check (e.g. unitarity)."""


class InvalidGrowthError(ScramblingError, ValueError):
    pass


class PartitionError(ScramblingError, ValueError):
    """Mode groups passed to an information measure overlap."""


class ConfigError(ScramblingError, ValueError):
    """Invalid experiment configuration.

    The offending field name is stored on ``field`` when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class UnphysicalStateError(ScramblingError, ArithmeticError):
    """A covariance matrix violates the uncertainty principle.

    ``step`` is filled in by the collision engine when the failure happens
    during propagation.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step

    def __str__(self):
        base = super().__str__()
        if self.step is None:
            return base
        return f"{base} (at step {self.step})"
