"""Signed-random-projection and winner-take-all hashing over P-transformed data.

Each table keys its buckets by the packed code (at most 64 bits); a query's candidates
are the union of the buckets its own code falls into, one per table.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from ..errors import ArgumentError
from ..utils import make_rng
from .exact import rerank
from .kmeans import inverted_lists
from .metrics import CostLedger, HASHING, SearchResult
from .transform import McssTransformParams, apply_q

logger = logging.getLogger(__name__)

MAX_CODE_BITS = 64


def _check_count(name, value):
    if int(value) != value or value < 1:
        raise ArgumentError(f'{name} must be a positive integer, got {value}')
    return int(value)


def build_tables(codes):
    """One {code: sorted ids} map per column of an (n, n_tables) code matrix."""
    tables = []
    for column in codes.T:
        keys, inverse = np.unique(column, return_inverse=True)
        lists = inverted_lists(inverse.reshape(-1), len(keys))
        tables.append({int(key): ids for key, ids in zip(keys, lists)})
    return tables


@dataclass(frozen=True, eq=False)
class _BucketIndex(ABC):
    params: McssTransformParams
    codes: np.ndarray
    tables: List[Dict[int, np.ndarray]]

    @property
    def n(self):
        return self.codes.shape[0]

    @property
    def n_tables(self):
        return self.codes.shape[1]

    @abstractmethod
    def hash(self, vectors):
        """(n, n_tables) uint64 codes of the rows of `vectors`."""

    @abstractmethod
    def hash_cost(self):
        """Dot-equivalents spent hashing one query."""

    def candidates(self, q_t, ledger=None):
        code = self.hash(np.asarray(q_t, dtype=np.float64)[None, :])[0]
        if ledger is not None:
            ledger.add(HASHING, self.hash_cost())
        buckets = [table.get(int(c)) for table, c in zip(self.tables, code)]
        buckets = [b for b in buckets if b is not None]
        if not buckets:
            return np.empty(0, dtype=np.int64)
        return np.unique(np.concatenate(buckets))

    def search(self, ds, q, K):
        ledger = CostLedger()
        candidates = self.candidates(apply_q(q, self.params), ledger)
        topk = rerank(ds, q, candidates, K, ledger)
        if topk.empty:
            logger.debug('hash lookup matched no bucket in any table')
        return SearchResult(candidates=candidates, topk=topk, cost=ledger)


@dataclass(frozen=True, eq=False)
class SrpIndex(_BucketIndex):
    """p_bits signs of random projections per table; bit b is set when r_b . x >= 0."""
    p_bits: int = 1
    projections: np.ndarray = None

    @staticmethod
    def draw_projections(n_tables, p_bits, dim, seed):
        # one block in table-major order, so the first T tables never depend on n_tables
        projections = make_rng(seed).standard_normal((n_tables, p_bits, dim))
        projections /= np.linalg.norm(projections, axis=2, keepdims=True)
        return projections

    @classmethod
    def build(cls, tds, n_tables, p_bits, seed=0):
        n_tables = _check_count('n_tables', n_tables)
        p_bits = _check_count('p_bits', p_bits)
        if p_bits > MAX_CODE_BITS:
            raise ArgumentError(f'p_bits must be at most {MAX_CODE_BITS}, got {p_bits}')
        projections = cls.draw_projections(n_tables, p_bits, tds.dim, seed)
        codes = srp_codes(tds.data, projections)
        index = cls.from_codes(tds.params, codes, p_bits, projections)
        logger.info(f'Built SRP index: {n_tables} tables x {p_bits} bits, '
                    f'{np.mean([len(t) for t in index.tables]):.1f} buckets per table')
        return index

    @classmethod
    def from_codes(cls, params, codes, p_bits, projections):
        codes.setflags(write=False)
        projections.setflags(write=False)
        return cls(params=params, codes=codes, tables=build_tables(codes), p_bits=p_bits, projections=projections)

    def hash(self, vectors):
        return srp_codes(vectors, self.projections)

    def hash_cost(self):
        return self.n_tables * self.p_bits


def srp_codes(vectors, projections):
    vectors = np.asarray(vectors, dtype=np.float64)
    n_tables, p_bits, _ = projections.shape
    weights = np.left_shift(np.uint64(1), np.arange(p_bits, dtype=np.uint64))
    codes = np.empty((len(vectors), n_tables), dtype=np.uint64)
    for t in range(n_tables):
        bits = (vectors @ projections[t].T) >= 0
        codes[:, t] = np.bitwise_or.reduce(np.where(bits, weights, np.uint64(0)), axis=1)
    return codes


def symbol_width(prefix_k):
    return max(1, int(math.ceil(math.log2(prefix_k)))) if prefix_k > 1 else 1


@dataclass(frozen=True, eq=False)
class WtaIndex(_BucketIndex):
    """p_perms argmax positions per table, each over the first prefix_k permuted coordinates.

    ``cost_dim`` is the dimension the hashing cost is normalized by.
    """
    p_perms: int = 1
    prefix_k: int = 1
    permutations: np.ndarray = None
    cost_dim: int = 1

    @staticmethod
    def draw_permutations(n_tables, p_perms, prefix_k, dim, seed):
        rng = make_rng(seed)
        prefixes = np.empty((n_tables, p_perms, prefix_k), dtype=np.int64)
        for t in range(n_tables):
            for j in range(p_perms):
                prefixes[t, j] = rng.permutation(dim)[:prefix_k]
        return prefixes

    @classmethod
    def build(cls, tds, n_tables, p_perms, prefix_k, seed=0, cost_original_dim=False):
        n_tables = _check_count('n_tables', n_tables)
        p_perms = _check_count('p_perms', p_perms)
        prefix_k = _check_count('prefix_k', prefix_k)
        if prefix_k > tds.dim:
            raise ArgumentError(f'prefix_k ({prefix_k}) cannot exceed the hashed dimension ({tds.dim})')
        if p_perms * symbol_width(prefix_k) > MAX_CODE_BITS:
            raise ArgumentError(f'p_perms * ceil(log2 prefix_k) must be at most {MAX_CODE_BITS}, '
                                f'got {p_perms} * {symbol_width(prefix_k)}')
        permutations = cls.draw_permutations(n_tables, p_perms, prefix_k, tds.dim, seed)
        codes = wta_codes(tds.data, permutations)
        cost_dim = tds.params.d if cost_original_dim else tds.dim
        index = cls.from_codes(tds.params, codes, p_perms, prefix_k, permutations, cost_dim)
        logger.info(f'Built WTA index: {n_tables} tables x {p_perms} permutations, prefix {prefix_k}, '
                    f'{np.mean([len(t) for t in index.tables]):.1f} buckets per table')
        return index

    @classmethod
    def from_codes(cls, params, codes, p_perms, prefix_k, permutations, cost_dim):
        codes.setflags(write=False)
        permutations.setflags(write=False)
        return cls(params=params, codes=codes, tables=build_tables(codes), p_perms=p_perms,
                   prefix_k=prefix_k, permutations=permutations, cost_dim=int(cost_dim))

    def hash(self, vectors):
        return wta_codes(vectors, self.permutations)

    def hash_cost(self):
        return self.n_tables * self.p_perms * self.prefix_k / self.cost_dim


def wta_codes(vectors, permutations):
    vectors = np.asarray(vectors, dtype=np.float64)
    n_tables, p_perms, prefix_k = permutations.shape
    shifts = np.arange(p_perms, dtype=np.uint64) * np.uint64(symbol_width(prefix_k))
    codes = np.empty((len(vectors), n_tables), dtype=np.uint64)
    for t in range(n_tables):
        # (n, p_perms, prefix_k); argmax keeps the first of tied maxima
        symbols = np.argmax(vectors[:, permutations[t]], axis=2).astype(np.uint64)
        codes[:, t] = np.bitwise_or.reduce(np.left_shift(symbols, shifts), axis=1)
    return codes
