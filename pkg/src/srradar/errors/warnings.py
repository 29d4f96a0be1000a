class SrrWarning(Warning):
    """
    Base srradar warning.
    """


class ConvergenceWarning(SrrWarning):
    """
    An iterative solver stopped at its iteration cap before meeting its tolerances.
    """
