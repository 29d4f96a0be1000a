import numpy as np


class RunningMeanStd:
    # https://en.wikipedia.org/wiki/Algorithms_for_calculating_variance#Parallel_algorithm
    def __init__(self, shape=()):
        self.mean = np.zeros(shape, 'float64')
        self.var = np.zeros(shape, 'float64')
        self.count = 0

    def update(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        batch_mean = np.mean(x, axis=0)
        batch_var = np.var(x, axis=0)
        batch_count = x.shape[0]
        self.update_from_moments(batch_mean, batch_var, batch_count)

    def update_from_moments(self, batch_mean, batch_var, batch_count):
        if batch_count == 0:
            return

        delta = batch_mean - self.mean
        tot_count = self.count + batch_count

        new_mean = self.mean + delta * batch_count / tot_count
        m_a = self.var * self.count
        m_b = batch_var * batch_count
        M2 = m_a + m_b + np.square(delta) * self.count * batch_count / tot_count

        self.mean = new_mean
        self.var = M2 / tot_count
        self.count = tot_count

    @property
    def std(self):
        if self.count < 2:
            return np.zeros_like(self.var)
        return np.sqrt(self.var * self.count / (self.count - 1))

    @property
    def stderr(self):
        if self.count < 2:
            return np.zeros_like(self.var)
        return self.std / np.sqrt(self.count)
