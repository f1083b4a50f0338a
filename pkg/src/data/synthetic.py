import logging
import math

import numpy as np

from ..errors import ArgumentError
from ..utils import make_rng
from .dataset import Dataset, QueryBatch

logger = logging.getLogger(__name__)

# default query counts per workload shape, capped by the dataset size
QUERY_COUNTS = {
    'cf': 60000,
    'embedding': 2000,
}


def _check_count(name, value, minimum=1):
    if int(value) != value or value < minimum:
        raise ArgumentError(f'{name} must be an integer >= {minimum}, got {value!r}')


def gen_synthetic(n, d, n_clusters, spread, seed, dtype=np.float32):
    """Gaussian blobs: n_clusters standard-normal centers, n points around them.

    Every cluster receives n // n_clusters or n // n_clusters + 1 points, in shuffled
    order. The result is a pure function of the arguments.
    """
    _check_count('n', n)
    _check_count('d', d)
    _check_count('n_clusters', n_clusters)
    if n_clusters > n:
        raise ArgumentError(f'n_clusters ({n_clusters}) cannot exceed n ({n})')
    if not (spread > 0 and math.isfinite(spread)):
        raise ArgumentError(f'spread must be a positive real, got {spread!r}')

    rng = make_rng(seed)
    centers = rng.standard_normal((n_clusters, d))
    labels = rng.permutation(np.arange(n) % n_clusters)
    points = centers[labels] + spread * rng.standard_normal((n, d))
    return Dataset(points.astype(dtype))


def gen_synthetic_with_queries(n, n_queries, d, n_clusters, spread, seed, dtype=np.float32):
    """Draws n + n_queries points from one blob model and holds the last n_queries out."""
    _check_count('n_queries', n_queries)
    full = gen_synthetic(n + n_queries, d, n_clusters, spread, seed, dtype=dtype)
    return Dataset(full.data[:n]), QueryBatch(full.data[n:])


def sample_queries(ds, m_q, seed):
    """Random database rows used as queries (embedding protocol)."""
    _check_count('m_q', m_q)
    if m_q > ds.n:
        raise ArgumentError(f'cannot sample {m_q} distinct queries from {ds.n} rows')
    rows = make_rng(seed).choice(ds.n, size=m_q, replace=False)
    return QueryBatch(ds.data[rows])


def default_query_count(profile, n):
    if profile not in QUERY_COUNTS:
        raise ArgumentError(f'unknown query profile {profile!r}, expected one of {sorted(QUERY_COUNTS)}')
    return min(QUERY_COUNTS[profile], n)


def corrupt_queries(q, sigma, seed):
    """Adds i.i.d. N(0, sigma^2) noise to every component; sigma=0 is the identity."""
    if not (sigma >= 0 and math.isfinite(sigma)):
        raise ArgumentError(f'sigma must be a nonnegative real, got {sigma!r}')
    if sigma == 0:
        return QueryBatch(q.data)
    noise = sigma * make_rng(seed).standard_normal(q.data.shape)
    return QueryBatch((q.data64 + noise).astype(q.dtype))
