import logging as log
import time

import numpy as np
from tqdm import tqdm

from hlab.distributions.profiles import BumpProfile, Exponential
from hlab.distributions.reps import Density
from hlab.mellin.engine import convolve_fast, convolve_oracle
from hlab.regions import Region
from hlab.settings import resolve

ORACLE_SAMPLE = 256
ORACLE_CHUNK = 32


def bench_pair():
    """Two smooth one-dimensional densities on [1, 2] and [1, 3]."""
    s = Density(1.0, [BumpProfile(1.5, 0.5)], Region.parse(['[1,2]']))
    t = Density(1.0, [Exponential(1.0)], Region.parse(['[1,3]']))
    return s, t


def bench_compare(n, settings=None, pair=None, quiet=True):
    """Time the fast path on an n-grid against the oracle on a subsample.

    The oracle cost is measured on at most ORACLE_SAMPLE grid points and
    extrapolated linearly to every sample of the fast result.
    """
    settings = resolve(settings)
    if n < 2 ** 10 or n > 2 ** 20 or n & (n - 1):
        raise ValueError('bench grid size must be a power of two in [2^10, 2^20]')
    s, t = pair or bench_pair()

    start = time.perf_counter()
    fast = convolve_fast(s, t, n, settings, certify=False)
    fast_seconds = time.perf_counter() - start

    points = fast.grid_points(limit=n)
    total = len(points)
    sample = points[np.linspace(1, total - 2, min(ORACLE_SAMPLE, total - 2)).astype(int)]
    start = time.perf_counter()
    oracle = []
    for i in tqdm(range(0, len(sample), ORACLE_CHUNK), disable=quiet):
        chunk = sample[i:i + ORACLE_CHUNK, None]
        oracle.append(convolve_oracle(s, t, chunk, settings))
    oracle_seconds = time.perf_counter() - start
    oracle = np.concatenate(oracle)

    approx = fast.values_at(sample[:, None])
    err = float(np.max(np.abs(approx - oracle)) / max(np.max(np.abs(oracle)), 1e-300))
    extrapolated = oracle_seconds * total / len(sample)
    report = {
        'n': n,
        'grid_points': total,
        'fast_seconds': fast_seconds,
        'oracle_points': len(sample),
        'oracle_seconds': oracle_seconds,
        'oracle_seconds_extrapolated': extrapolated,
        'speedup': extrapolated / max(fast_seconds, 1e-12),
        'max_relative_error': err,
    }
    log.info('bench n=%d: fast %.3fs, oracle ~%.3fs, speedup %.1fx',
             n, fast_seconds, extrapolated, report['speedup'])
    return report
