import logging
import os
from concurrent.futures import ThreadPoolExecutor

from tqdm import tqdm

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = 'SRR_THREADS'


def resolve_threads(threads=None):
    """
    Worker count: ``SRR_THREADS`` if set, else ``threads``, else 1.
    """
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning(f'Ignoring non-integer {THREADS_ENV_VAR}={env!r}.')
    return max(1, int(threads or 1))


def map_trials(fn, n_trials, threads=1, verbose=False, desc='Trials'):
    """
    Evaluate ``fn(trial)`` for ``trial = 0, ..., n_trials - 1``.

    Results are returned in trial order regardless of completion order. Each trial is expected to derive its own
    random stream from its index, which makes the output independent of ``threads``.
    """
    threads = resolve_threads(threads)
    if threads == 1:
        return [fn(t) for t in tqdm(range(n_trials), desc=desc, disable=(not verbose))]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, t) for t in range(n_trials)]
        return [f.result() for f in tqdm(futures, desc=desc, disable=(not verbose))]
