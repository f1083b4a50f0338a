import logging
import struct

import numpy as np

from ..errors import StorageError, VectorDataError, VectorFormatError, VectorLengthError
from .dataset import Dataset, QueryBatch

logger = logging.getLogger(__name__)

MAGIC = b'MIPS'
VERSION = 1
# magic, version, element type, n, d
HEADER = struct.Struct('<4sBBQI')

ELEMENT_TYPES = {
    0: np.dtype('<f4'),
    1: np.dtype('<f8'),
}
ELEMENT_CODES = {np.dtype(np.float32): 0, np.dtype(np.float64): 1}


def read_file(path):
    try:
        with open(path, 'rb') as f:
            return f.read()
    except OSError as e:
        raise StorageError(f'cannot read {path!r}: {e.strerror or e}') from e


def write_file(path, blob):
    try:
        with open(path, 'wb') as f:
            f.write(blob)
    except OSError as e:
        raise StorageError(f'cannot write {path!r}: {e.strerror or e}') from e


def encode_vectors(vectors):
    code = ELEMENT_CODES[np.dtype(vectors.dtype)]
    header = HEADER.pack(MAGIC, VERSION, code, vectors.n, vectors.d)
    return header + vectors.data.astype(ELEMENT_TYPES[code], copy=False).tobytes()


def decode_vectors(blob, cls=Dataset, source='<bytes>'):
    if len(blob) < HEADER.size:
        raise VectorFormatError(f'{source}: file too short for a vector header ({len(blob)} bytes)')
    magic, version, code, n, d = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise VectorFormatError(f'{source}: bad magic {magic!r}, expected {MAGIC!r}')
    if version != VERSION:
        raise VectorFormatError(f'{source}: unsupported version {version}')
    if code not in ELEMENT_TYPES:
        raise VectorFormatError(f'{source}: unknown element type {code}')
    if n < 1 or d < 1:
        raise VectorFormatError(f'{source}: header declares an empty matrix (n={n}, d={d})')
    dtype = ELEMENT_TYPES[code]
    expected = n * d * dtype.itemsize
    payload = memoryview(blob)[HEADER.size:]
    if len(payload) != expected:
        raise VectorLengthError(f'{source}: header declares {n}x{d} elements ({expected} bytes) '
                                f'but payload has {len(payload)} bytes')
    data = np.frombuffer(payload, dtype=dtype).reshape(n, d)
    if not np.all(np.isfinite(data)):
        raise VectorDataError(f'{source}: payload contains NaN or infinite values')
    return cls(data.astype(dtype.newbyteorder('='), copy=False))


def load_dataset(path):
    dataset = decode_vectors(read_file(path), Dataset, source=path)
    logger.info(f'Loaded dataset {path}: n={dataset.n}, d={dataset.d}, dtype={dataset.dtype}')
    return dataset


def load_queries(path):
    queries = decode_vectors(read_file(path), QueryBatch, source=path)
    logger.info(f'Loaded queries {path}: m_q={queries.n}, d={queries.d}, dtype={queries.dtype}')
    return queries


def save_dataset(ds, path):
    write_file(path, encode_vectors(ds))


save_queries = save_dataset
