"""Reductions of MIPS to cosine search (P/Q augmentation) and to nearest neighbour search."""
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..data import Dataset
from ..errors import ArgumentError, DegenerateDataError

logger = logging.getLogger(__name__)

DEFAULT_U = 0.83
DEFAULT_M = 3


@dataclass(frozen=True)
class McssTransformParams:
    U: float
    m: int
    s: float
    d: int

    @property
    def dim(self):
        return self.d + self.m


@dataclass(frozen=True, eq=False)
class TransformedDataset:
    base: Dataset
    params: McssTransformParams
    data: np.ndarray

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def dim(self):
        return self.data.shape[1]


@dataclass(frozen=True)
class NnsTransformParams:
    phi: float
    d: int

    @property
    def dim(self):
        return self.d + 1


def _max_norm(ds):
    max_norm = float(np.max(ds.norms))
    if max_norm == 0.0:
        raise DegenerateDataError('every vector in the dataset has zero norm')
    return max_norm


def fit_mcss(ds, U=DEFAULT_U, m=DEFAULT_M):
    """Picks s so that the largest scaled data norm equals U."""
    if not (0 < U < 1):
        raise ArgumentError(f'U must lie in the open interval (0, 1), got {U}')
    if int(m) != m or m < 1:
        raise ArgumentError(f'm must be a positive integer, got {m}')
    s = U / _max_norm(ds)
    return McssTransformParams(U=float(U), m=int(m), s=float(s), d=ds.d)


def _check_dim(x, d):
    if x.shape[-1] != d:
        raise ArgumentError(f'dimension mismatch: expected {d}, got {x.shape[-1]}')


def apply_p(x, params):
    """[s*x, 1/2 - |s*x|^2, 1/2 - |s*x|^4, ..., 1/2 - |s*x|^(2^m)], rowwise for 2-d input."""
    x = np.asarray(x, dtype=np.float64)
    _check_dim(x, params.d)
    scaled = params.s * x
    squared_norm = np.einsum('...i,...i->...', scaled, scaled)[..., None]
    exponents = 2.0 ** np.arange(params.m)
    tail = 0.5 - squared_norm ** exponents
    return np.concatenate([scaled, tail], axis=-1)


def apply_q(q, params):
    """[q, 0, ..., 0]; the query is not rescaled, so Q(q).P(x) = s * q.x."""
    q = np.asarray(q, dtype=np.float64)
    _check_dim(q, params.d)
    zeros = np.zeros(q.shape[:-1] + (params.m,), dtype=np.float64)
    return np.concatenate([q, zeros], axis=-1)


def transform_dataset(ds, params):
    data = apply_p(ds.data64, params)
    data.setflags(write=False)
    return TransformedDataset(base=ds, params=params, data=data)


def fit_transform_mcss(ds, U=DEFAULT_U, m=DEFAULT_M):
    params = fit_mcss(ds, U, m)
    logger.info(f'MCSS transform: U={params.U}, m={params.m}, s={params.s:.6g}, dim={params.dim}')
    return transform_dataset(ds, params)


def fit_apply_nns(ds):
    """Appends sqrt(phi^2 - |x|^2) so every data vector has norm phi = max |x|."""
    phi = _max_norm(ds)
    extra = np.sqrt(np.maximum(phi * phi - ds.norms ** 2, 0.0))
    augmented = np.concatenate([ds.data64, extra[:, None]], axis=1)
    return NnsTransformParams(phi=phi, d=ds.d), Dataset(augmented)


def apply_nns_query(q, params):
    q = np.asarray(q, dtype=np.float64)
    _check_dim(q, params.d)
    zeros = np.zeros(q.shape[:-1] + (1,), dtype=np.float64)
    return np.concatenate([q, zeros], axis=-1)


def norm_spread_bound(U, m):
    """Relative spread bound of |P(x)|^2 over any dataset: U^(2^(m+1)) / (m/4)."""
    return math.pow(U, 2 ** (m + 1)) / (m / 4.0)
