import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from ..errors import ArgumentError
from ..utils import make_rng
from .exact import rerank, select_top
from .metrics import CostLedger, ROUTING, SearchResult
from .transform import McssTransformParams, apply_q

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERS = 50
# relative slack allowed when checking the objective trace in floating point
MONOTONICITY_RTOL = 1e-9


def default_k(n):
    return max(1, int(round(math.sqrt(n))))


def _random_unit(rng, dim):
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _repair_empty_clusters(points, assignments, k):
    """Each empty cluster takes the member of the currently largest cluster that is
    farthest in cosine from that cluster's normalized mean."""
    counts = np.bincount(assignments, minlength=k)
    for empty in np.flatnonzero(counts == 0):
        largest = int(np.argmax(counts))
        members = np.flatnonzero(assignments == largest)
        total = points[members].sum(axis=0)
        norm = np.linalg.norm(total)
        if norm > 0:
            cosines = (points[members] @ (total / norm)) / np.maximum(np.linalg.norm(points[members], axis=1), 1e-300)
        else:
            cosines = np.zeros(len(members))
        victim = members[int(np.argmin(cosines))]
        assignments[victim] = empty
        counts[largest] -= 1
        counts[empty] += 1
    return assignments


def _update_centroids(points, assignments, k, rng):
    sums = np.zeros((k, points.shape[1]), dtype=np.float64)
    np.add.at(sums, assignments, points)
    norms = np.linalg.norm(sums, axis=1)
    centroids = np.empty_like(sums)
    for i in range(k):
        if norms[i] > 0:
            centroids[i] = sums[i] / norms[i]
        else:
            # members cancel out exactly; any direction scores them equally (zero)
            centroids[i] = _random_unit(rng, points.shape[1])
    return centroids


def _assign(points, centroids):
    similarities = points @ centroids.T
    assignments = np.argmax(similarities, axis=1)
    objective = float(np.sum(similarities[np.arange(len(points)), assignments]))
    return assignments, objective


def spherical_kmeans(points, k, max_iters, rng):
    """Clusters points by direction.

    Starts from uniform random assignments, then alternates the normalized-mean
    centroid update and the argmax-cosine assignment until no assignment changes or
    max_iters updates have run.

    Returns:
        centroids: (k, dim) unit rows
        assignments: (n,) cluster ids
        iters_run: number of update/assign rounds
        objective_trace: sum_j x_j . c_{a_j} after every assignment step
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if int(k) != k or not 1 <= k <= n:
        raise ArgumentError(f'k must satisfy 1 <= k <= n ({n}), got {k}')
    if int(max_iters) != max_iters or max_iters < 1:
        raise ArgumentError(f'max_iters must be a positive integer, got {max_iters}')

    assignments = rng.integers(0, k, size=n)
    objective_trace = []
    iters_run = 0
    while iters_run < max_iters:
        iters_run += 1
        assignments = _repair_empty_clusters(points, assignments, k)
        centroids = _update_centroids(points, assignments, k, rng)
        new_assignments, objective = _assign(points, centroids)
        if objective_trace and objective < objective_trace[-1] - MONOTONICITY_RTOL * abs(objective_trace[-1]):
            raise AssertionError(f'spherical k-means objective decreased: {objective_trace[-1]} -> {objective}')
        objective_trace.append(objective)
        changed = int(np.count_nonzero(new_assignments != assignments))
        assignments = new_assignments
        if changed == 0:
            break
    logger.debug(f'spherical k-means k={k}: {iters_run} iterations, objective {objective_trace[-1]:.6f}')
    return centroids, assignments.astype(np.int64), iters_run, objective_trace


def inverted_lists(assignments, k):
    order = np.argsort(assignments, kind='stable')
    bounds = np.searchsorted(assignments[order], np.arange(k + 1))
    return [order[bounds[i]:bounds[i + 1]].astype(np.int64) for i in range(k)]


def top_centroids(centroids, q_t, p, ids=None):
    """The p best-scoring centroid ids (descending score, ties by ascending id)."""
    ids = np.arange(len(centroids)) if ids is None else ids
    scores = centroids[ids] @ q_t
    return select_top(scores, ids, p).ids


@dataclass(frozen=True, eq=False)
class ClusterIndex:
    """Flat spherical k-means index over P-transformed data."""
    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    inverted_lists: List[np.ndarray]
    params: McssTransformParams
    iters_run: int
    objective_trace: List[float]

    @classmethod
    def train(cls, tds, k, max_iters=DEFAULT_MAX_ITERS, seed=0):
        if int(k) != k or not 1 <= k <= tds.n:
            raise ArgumentError(f'k must satisfy 1 <= k <= n ({tds.n}), got {k}')
        centroids, assignments, iters_run, trace = spherical_kmeans(tds.data, k, max_iters, make_rng(seed))
        logger.info(f'Trained k-means index: k={k}, {iters_run} iterations, objective {trace[-1]:.4f}')
        return cls.from_assignments(centroids, assignments, tds.params, iters_run, trace)

    @classmethod
    def from_assignments(cls, centroids, assignments, params, iters_run, objective_trace):
        k = centroids.shape[0]
        centroids.setflags(write=False)
        assignments.setflags(write=False)
        return cls(k=k, centroids=centroids, assignments=assignments,
                   inverted_lists=inverted_lists(assignments, k), params=params,
                   iters_run=iters_run, objective_trace=list(objective_trace))

    @property
    def n(self):
        return len(self.assignments)

    def top_p_clusters(self, q_t, p, ledger=None):
        if int(p) != p or not 1 <= p <= self.k:
            raise ArgumentError(f'p must satisfy 1 <= p <= k ({self.k}), got {p}')
        if ledger is not None:
            ledger.add(ROUTING, self.k)
        return top_centroids(self.centroids, np.asarray(q_t, dtype=np.float64), p)

    def candidates(self, q_t, p, ledger=None):
        clusters = self.top_p_clusters(q_t, p, ledger)
        return np.sort(np.concatenate([self.inverted_lists[c] for c in clusters]))

    def search(self, ds, q, p, K):
        ledger = CostLedger()
        candidates = self.candidates(apply_q(q, self.params), p, ledger)
        topk = rerank(ds, q, candidates, K, ledger)
        return SearchResult(candidates=candidates, topk=topk, cost=ledger)
