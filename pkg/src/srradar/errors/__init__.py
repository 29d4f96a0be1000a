from .warnings import SrrWarning, ConvergenceWarning
from .error import (
    SrrError,
    DimensionError,
    ConfigError,
    UndefinedInputError,
    NumericalError,
    IllConditionedError,
    CapacityError
)
