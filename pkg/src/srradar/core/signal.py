from dataclasses import dataclass, field

import numpy as np

from src.srradar.core.indexing import length, n_half_from_length, check_n_half, wrap_index, sym_fft
from src.srradar.errors import DimensionError


@dataclass(frozen=True, eq=False)
class ProbingSignal:
    """
    L-periodic probing sequence ``x_l``, ``l = -N, ..., N``.

    Parameters
    ----------
    n_half : int
        Half-length N >= 1; L = 2N + 1.

    samples : array_like of complex, shape (L,)
        Samples in natural order (position ``i`` holds ``x_{i-N}``).

    distribution : str, default 'custom'
        Tag of the distribution the samples were drawn from.

    seed : int or None, default None
        Seed used to draw the samples.

    """
    n_half: int
    samples: np.ndarray
    distribution: str = 'custom'
    seed: int = None
    _spectrum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n_half = check_n_half(self.n_half)
        samples = np.array(self.samples, dtype=complex).reshape(-1)
        if samples.shape[0] != length(n_half):
            raise DimensionError(f'Expected {length(n_half)} samples for n_half={n_half}, got {samples.shape[0]}.')

        samples.setflags(write=False)
        spectrum = sym_fft(samples)
        spectrum.setflags(write=False)

        object.__setattr__(self, 'n_half', n_half)
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, '_spectrum', spectrum)

    @classmethod
    def from_samples(cls, samples, **kwargs):
        samples = np.asarray(samples)
        return cls(n_half_from_length(samples.shape[0]), samples, **kwargs)

    @property
    def L(self):
        return length(self.n_half)

    @property
    def spectrum(self):
        """
        ``X_k = sum_l x_l exp(-i 2 pi l k / L)``, ``k = -N, ..., N``.
        """
        return self._spectrum

    def __getitem__(self, idx):
        """
        ``x[l]`` for any integer (or integer array) ``l``, read L-periodically.
        """
        return self.samples[wrap_index(idx, self.n_half) + self.n_half]

    def __len__(self):
        return self.L

    def __array__(self, dtype=None, copy=None):
        return np.array(self.samples, dtype=dtype)

    def norm(self):
        return float(np.linalg.norm(self.samples))

    def circulant(self):
        """
        ``C[p, l] = x_{p - l}`` for ``p, l = -N, ..., N``.
        """
        idx = np.arange(-self.n_half, self.n_half + 1)
        return self[idx[:, None] - idx[None, :]]

    def __eq__(self, other):
        if type(self) != type(other):
            return NotImplemented
        return self.n_half == other.n_half and np.array_equal(self.samples, other.samples)

    def __hash__(self):
        return hash((self.n_half, self.samples.tobytes()))
