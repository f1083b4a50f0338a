"""Linear-scan oracles for K-MIPS, K-MCSS and K-NNS and the ground-truth cache."""
import hashlib
import logging
import struct
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from ..data import read_file, write_file
from ..errors import ArgumentError, DegenerateDataError, VectorFormatError, VectorLengthError
from ..utils import BAR_FORMAT
from .metrics import CostLedger, RERANK, SCAN, SearchResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TopK:
    ids: np.ndarray
    scores: np.ndarray

    @classmethod
    def empty_result(cls):
        return cls(ids=np.empty(0, dtype=np.int64), scores=np.empty(0, dtype=np.float64))

    @property
    def empty(self):
        return len(self.ids) == 0

    def __len__(self):
        return len(self.ids)


def select_top(scores, ids, K, descending=True):
    """The K best (score, id) pairs; ties broken by ascending id.

    Only entries tied with the K-th score are fully sorted, so the result is exact
    while the bulk of the work stays an O(n) partition.
    """
    scores = np.asarray(scores, dtype=np.float64)
    ids = np.asarray(ids, dtype=np.int64)
    keys = -scores if descending else scores
    K = min(K, len(keys))
    if K == 0:
        return TopK.empty_result()
    if K < len(keys):
        kth = np.partition(keys, K - 1)[K - 1]
        keep = np.flatnonzero(keys <= kth)
        keys, ids, scores = keys[keep], ids[keep], scores[keep]
    order = np.lexsort((ids, keys))[:K]
    return TopK(ids=ids[order], scores=scores[order])


def _check_query(ds, q, K):
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 1 or q.shape[0] != ds.d:
        raise ArgumentError(f'query must be a vector of dimension {ds.d}, got shape {q.shape}')
    if int(K) != K or K < 1:
        raise ArgumentError(f'K must be a positive integer, got {K}')
    if K > ds.n:
        raise ArgumentError(f'K ({K}) cannot exceed the number of vectors ({ds.n})')
    return q


def inner_products(ds, q, rows=None):
    # einsum reduces each row the same way whatever subset of rows is scored
    data = ds.data64 if rows is None else ds.data64[rows]
    return np.einsum('ij,j->i', data, q)


def exact_mips(ds, q, K, ledger=None):
    q = _check_query(ds, q, K)
    if ledger is not None:
        ledger.add(SCAN, ds.n)
    return select_top(inner_products(ds, q), np.arange(ds.n), K)


def exact_mcss(ds, q, K, ledger=None):
    """argmax q.x_i / |x_i| over rows with nonzero norm (1/|q| does not change the argmax)."""
    q = _check_query(ds, q, K)
    valid = np.flatnonzero(ds.norms > 0)
    if len(valid) == 0:
        raise DegenerateDataError('all rows have zero norm; cosine similarity is undefined')
    if ledger is not None:
        ledger.add(SCAN, ds.n)
    scores = inner_products(ds, q)[valid] / ds.norms[valid]
    return select_top(scores, valid, K)


def exact_nns(ds, q, K, ledger=None):
    q = _check_query(ds, q, K)
    if ledger is not None:
        ledger.add(SCAN, ds.n)
    diff = ds.data64 - q
    distances = np.einsum('ij,ij->i', diff, diff)
    return select_top(distances, np.arange(ds.n), K, descending=False)


def rerank(ds, q, candidates, K, ledger=None):
    """Exact K-MIPS restricted to the candidate ids; costs one dot product per candidate."""
    q = np.asarray(q, dtype=np.float64)
    if int(K) != K or K < 1:
        raise ArgumentError(f'K must be a positive integer, got {K}')
    candidates = np.asarray(candidates, dtype=np.int64)
    if ledger is not None:
        ledger.add(RERANK, len(candidates))
    if len(candidates) == 0:
        return TopK.empty_result()
    if candidates.min() < 0 or candidates.max() >= ds.n:
        raise ArgumentError('candidate ids fall outside the dataset')
    scores = inner_products(ds, q, candidates)
    return select_top(scores, candidates, K)


class ExactIndex:
    """The full linear scan behind the index interface; cost n per query."""

    def __init__(self, n):
        self.n = n

    def search(self, ds, q, K):
        ledger = CostLedger()
        topk = exact_mips(ds, q, K, ledger)
        return SearchResult(candidates=np.arange(ds.n), topk=topk, cost=ledger)


@dataclass(frozen=True, eq=False)
class GroundTruth:
    ids: np.ndarray
    scores: np.ndarray
    fingerprint: bytes = b''

    @property
    def m_q(self):
        return self.ids.shape[0]

    @property
    def K(self):
        return self.ids.shape[1]

    def topk(self, i, K):
        if K > self.K:
            raise ArgumentError(f'ground truth holds top-{self.K}, requested top-{K}')
        return TopK(ids=self.ids[i, :K], scores=self.scores[i, :K])

    def covers(self, ds, queries, K):
        return self.m_q == queries.n and self.K >= min(K, ds.n) and \
            self.fingerprint == data_fingerprint(ds, queries)


def data_fingerprint(ds, queries):
    """Digest of the shapes and float64 contents of the dataset and the queries."""
    digest = hashlib.blake2b(digest_size=GT_DIGEST_SIZE)
    for matrix in (ds, queries):
        digest.update(struct.pack('<QI', matrix.n, matrix.d))
        digest.update(np.ascontiguousarray(matrix.data64, dtype='<f8').tobytes())
    return digest.digest()


def compute_ground_truth(ds, queries, K, n_jobs=1):
    """Exact top-K for every query; the top-K of smaller K is a prefix of this."""
    K = min(K, ds.n)

    def _one(i):
        return exact_mips(ds, queries.row(i), K)

    iterator = tqdm(range(queries.n), desc='[ground truth]', bar_format=BAR_FORMAT)
    if n_jobs == 1:
        results = [_one(i) for i in iterator]
    else:
        results = Parallel(n_jobs=n_jobs, prefer='threads')(delayed(_one)(i) for i in iterator)
    return GroundTruth(ids=np.stack([r.ids for r in results]), scores=np.stack([r.scores for r in results]),
                       fingerprint=data_fingerprint(ds, queries))


GT_MAGIC = b'MGTC'
GT_VERSION = 2
GT_DIGEST_SIZE = 32
GT_HEADER = struct.Struct(f'<4sBQI{GT_DIGEST_SIZE}s')


def save_ground_truth(gt, path):
    header = GT_HEADER.pack(GT_MAGIC, GT_VERSION, gt.m_q, gt.K, gt.fingerprint)
    write_file(path, header + gt.ids.astype('<i8').tobytes() + gt.scores.astype('<f8').tobytes())


def load_ground_truth(path):
    blob = read_file(path)
    if len(blob) < GT_HEADER.size:
        raise VectorFormatError(f'{path}: file too short for a ground-truth header')
    magic, version, m_q, K, digest = GT_HEADER.unpack_from(blob)
    if magic != GT_MAGIC or version != GT_VERSION:
        raise VectorFormatError(f'{path}: not a ground-truth cache (magic {magic!r}, version {version})')
    expected = m_q * K * 16
    payload = memoryview(blob)[GT_HEADER.size:]
    if len(payload) != expected:
        raise VectorLengthError(f'{path}: expected {expected} payload bytes, found {len(payload)}')
    ids = np.frombuffer(payload[:m_q * K * 8], dtype='<i8').reshape(m_q, K).astype(np.int64)
    scores = np.frombuffer(payload[m_q * K * 8:], dtype='<f8').reshape(m_q, K).astype(np.float64)
    return GroundTruth(ids=ids, scores=scores, fingerprint=digest)
