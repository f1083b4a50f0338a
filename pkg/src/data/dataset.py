from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import ArgumentError, VectorDataError

SUPPORTED_DTYPES = (np.dtype(np.float32), np.dtype(np.float64))


@dataclass(frozen=True, eq=False)
class VectorMatrix:
    """Immutable row-major matrix of real vectors; row i has id i."""
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 2:
            raise ArgumentError(f'expected a 2-d array of vectors, got shape {data.shape}')
        if data.dtype not in SUPPORTED_DTYPES:
            data = data.astype(np.float64)
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ArgumentError(f'vector matrix must have at least one row and one column, got {data.shape}')
        if not np.all(np.isfinite(data)):
            raise VectorDataError('vectors contain NaN or infinite components')
        data = np.array(data, dtype=data.dtype, order='C', copy=True)
        data.setflags(write=False)
        object.__setattr__(self, 'data', data)

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def d(self):
        return self.data.shape[1]

    @property
    def dtype(self):
        return self.data.dtype

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, VectorMatrix):
            return NotImplemented
        return self.dtype == other.dtype and np.array_equal(self.data, other.data)

    __hash__ = None

    @cached_property
    def data64(self):
        # scores are always accumulated in float64
        data64 = self.data.astype(np.float64)
        data64.setflags(write=False)
        return data64

    @cached_property
    def norms(self):
        norms = np.sqrt(np.einsum('ij,ij->i', self.data64, self.data64))
        norms.setflags(write=False)
        return norms

    def row(self, i):
        return self.data64[i]


class Dataset(VectorMatrix):
    pass


class QueryBatch(VectorMatrix):

    @property
    def m_q(self):
        return self.n
