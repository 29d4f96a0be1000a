from collections import UserDict

import numpy as np
import pandas as pd


class ModularLogger(UserDict):
    """
    Column-oriented history of scalar solver diagnostics.

    Each call to :meth:`log` appends one row; keys become columns. Iterative solvers record a row every ``every``
    iterations and always at ``horizon`` (the last admissible iteration).

    Parameters
    ----------
    every : int, default 1
        Logging cadence in iterations.

    horizon : int or None, default None
        Iteration that is always logged, typically ``max_iter``.

    """
    def __init__(self, every=1, horizon=None):
        super().__init__()
        self.every = int(every)
        self.horizon = horizon
        self._log_length = 0

    def due(self, iteration):
        return iteration % self.every == 0 or iteration == self.horizon

    def log(self, log_dict=None, **log_items):
        if log_items:
            if log_dict:
                raise TypeError('Cannot pass both positional and keyword arguments.')

            log_dict = log_items

        for key, value in log_dict.items():
            if key not in self:
                self[key] = [np.nan] * self._log_length

            try:
                self[key].append(value.item())
            except AttributeError:
                self[key].append(value)
            except ValueError:
                raise ValueError('Only scalar values can be logged.')

        for key in self.keys() - log_dict.keys():
            self[key].append(np.nan)

        self._log_length += 1

    def last(self, key, default=np.nan):
        try:
            return self[key][-1]
        except (KeyError, IndexError):
            return default

    def to_frame(self):
        return pd.DataFrame(self.data)

    def __len__(self):
        return self._log_length
