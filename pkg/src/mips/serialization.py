"""Binary index files: a 4-byte magic naming the index kind, a version byte, then the
index's scalars and arrays, little-endian throughout.

Arrays are written as ``<dtype code u8><ndim u8><shape u64 * ndim><raw bytes>``.
"""
import io
import logging
import struct

import numpy as np

from ..data import read_file, write_file
from ..errors import ArgumentError, VectorFormatError, VectorLengthError
from .hashing import SrpIndex, WtaIndex
from .hierarchical import HierIndex
from .kmeans import ClusterIndex
from .pca_tree import PcaTree
from .transform import McssTransformParams, NnsTransformParams

logger = logging.getLogger(__name__)

VERSION = 1
PREAMBLE = struct.Struct('<4sB')
MCSS_PARAMS = struct.Struct('<dIdI')
ARRAY_DTYPES = {0: np.dtype('<f8'), 1: np.dtype('<i8'), 2: np.dtype('<u8')}
ARRAY_CODES = {dtype.kind: code for code, dtype in ARRAY_DTYPES.items()}


class _Writer:

    def __init__(self, magic):
        self.buffer = io.BytesIO()
        self.buffer.write(PREAMBLE.pack(magic, VERSION))

    def pack(self, fmt, *values):
        self.buffer.write(struct.pack(fmt, *values))

    def params(self, params):
        self.buffer.write(MCSS_PARAMS.pack(params.U, params.m, params.s, params.d))

    def array(self, array):
        array = np.asarray(array)
        code = ARRAY_CODES[array.dtype.kind]
        self.pack('<BB', code, array.ndim)
        self.pack(f'<{array.ndim}Q', *array.shape)
        self.buffer.write(np.ascontiguousarray(array, dtype=ARRAY_DTYPES[code]).tobytes())

    def getvalue(self):
        return self.buffer.getvalue()


class _Reader:

    def __init__(self, blob, source):
        self.blob = memoryview(blob)
        self.offset = PREAMBLE.size
        self.source = source

    def _take(self, size):
        if self.offset + size > len(self.blob):
            raise VectorLengthError(f'{self.source}: index file is truncated')
        chunk = self.blob[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt):
        values = struct.unpack(fmt, self._take(struct.calcsize(fmt)))
        return values[0] if len(values) == 1 else values

    def params(self):
        U, m, s, d = MCSS_PARAMS.unpack(self._take(MCSS_PARAMS.size))
        return McssTransformParams(U=U, m=m, s=s, d=d)

    def array(self):
        code, ndim = self.unpack('<BB')
        if code not in ARRAY_DTYPES:
            raise VectorFormatError(f'{self.source}: unknown array type code {code}')
        shape = self.unpack(f'<{ndim}Q') if ndim else ()
        shape = (shape,) if isinstance(shape, int) else tuple(shape)
        dtype = ARRAY_DTYPES[code]
        count = int(np.prod(shape, dtype=np.int64))
        data = np.frombuffer(self._take(count * dtype.itemsize), dtype=dtype).reshape(shape)
        return data.astype(dtype.newbyteorder('='))

    def finish(self):
        if self.offset != len(self.blob):
            raise VectorLengthError(f'{self.source}: {len(self.blob) - self.offset} trailing bytes after the index')


def _write_kmeans(w, index):
    w.params(index.params)
    w.pack('<I', index.iters_run)
    w.array(index.centroids)
    w.array(index.assignments)
    w.array(np.asarray(index.objective_trace, dtype=np.float64))


def _read_kmeans(r):
    params = r.params()
    iters_run = r.unpack('<I')
    centroids, assignments, trace = r.array(), r.array(), r.array()
    return ClusterIndex.from_assignments(centroids, assignments, params, iters_run, trace.tolist())


def _write_hierarchical(w, index):
    w.params(index.params)
    w.pack('<B', index.L)
    for centroids, parents in zip(index.centroids, index.parents):
        w.array(centroids)
        w.array(parents)


def _read_hierarchical(r):
    params = r.params()
    levels = r.unpack('<B')
    centroids, parents = [], []
    for _ in range(levels):
        centroids.append(r.array())
        parents.append(r.array())
    return HierIndex.from_parents(centroids, parents, params)


def _write_pca_tree(w, tree):
    w.pack('<IdI', tree.depth, tree.nns.phi, tree.nns.d)
    w.array(tree.mean)
    w.array(tree.directions)
    w.array(tree.thresholds)
    w.array(np.array([len(leaf) for leaf in tree.leaves], dtype=np.int64))
    w.array(np.concatenate(tree.leaves))


def _read_pca_tree(r):
    depth, phi, d = r.unpack('<IdI')
    mean, directions, thresholds = r.array(), r.array(), r.array()
    sizes, ids = r.array(), r.array()
    leaves = np.split(ids, np.cumsum(sizes)[:-1])
    for array in (mean, directions, thresholds):
        array.setflags(write=False)
    return PcaTree(depth=depth, nns=NnsTransformParams(phi=phi, d=d), mean=mean,
                   directions=directions, thresholds=thresholds, leaves=leaves)


def _write_srp(w, index):
    w.params(index.params)
    w.pack('<I', index.p_bits)
    w.array(index.projections)
    w.array(index.codes)


def _read_srp(r):
    params = r.params()
    p_bits = r.unpack('<I')
    projections, codes = r.array(), r.array()
    return SrpIndex.from_codes(params, codes, p_bits, projections)


def _write_wta(w, index):
    w.params(index.params)
    w.pack('<III', index.p_perms, index.prefix_k, index.cost_dim)
    w.array(index.permutations)
    w.array(index.codes)


def _read_wta(r):
    params = r.params()
    p_perms, prefix_k, cost_dim = r.unpack('<III')
    permutations, codes = r.array(), r.array()
    return WtaIndex.from_codes(params, codes, p_perms, prefix_k, permutations, cost_dim)


FORMATS = [
    (b'KMIX', ClusterIndex, _write_kmeans, _read_kmeans),
    (b'HKIX', HierIndex, _write_hierarchical, _read_hierarchical),
    (b'PCAT', PcaTree, _write_pca_tree, _read_pca_tree),
    (b'SRPI', SrpIndex, _write_srp, _read_srp),
    (b'WTAI', WtaIndex, _write_wta, _read_wta),
]


def encode_index(index):
    for magic, cls, writer, _ in FORMATS:
        if type(index) is cls:
            w = _Writer(magic)
            writer(w, index)
            return w.getvalue()
    raise ArgumentError(f'cannot serialize an index of type {type(index).__name__}')


def decode_index(blob, source='<bytes>'):
    if len(blob) < PREAMBLE.size:
        raise VectorFormatError(f'{source}: file too short for an index header')
    magic, version = PREAMBLE.unpack_from(blob)
    if version != VERSION:
        raise VectorFormatError(f'{source}: unsupported index version {version}')
    for known, _, _, reader in FORMATS:
        if magic == known:
            r = _Reader(blob, source)
            index = reader(r)
            r.finish()
            return index
    raise VectorFormatError(f'{source}: unknown index magic {magic!r}')


def save_index(index, path):
    write_file(path, encode_index(index))
    logger.info(f'Saved {type(index).__name__} to {path}')


def load_index(path):
    index = decode_index(read_file(path), source=path)
    logger.info(f'Loaded {type(index).__name__} from {path}')
    return index
