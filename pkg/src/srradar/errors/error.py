class SrrError(Exception):
    """
    Base srradar exception.
    """


class DimensionError(SrrError, ValueError):
    """
    Operand shapes or grid parameters are inconsistent.
    """


class ConfigError(SrrError, ValueError):
    """
    Invalid experiment configuration.
    """


class UndefinedInputError(SrrError, ValueError):
    """
    A quantity is requested on an input for which it is not defined.
    """


class NumericalError(SrrError):
    """
    A numerical procedure could not produce a trustworthy result.
    """


class IllConditionedError(NumericalError):
    """
    A linear system is too ill-conditioned to be solved reliably.
    """
    def __init__(self, msg, condition=None):
        super().__init__(msg)
        self.condition = condition


class CapacityError(SrrError):
    """
    A size or sampling ceiling was exceeded.
    """
