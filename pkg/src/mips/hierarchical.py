"""Bottom-up hierarchical spherical k-means and the top-p walk down its levels.

Level 0 is the coarsest level of centroids, level L-1 the finest and level L stands
for the data points themselves. ``parents[l]`` maps every item of level l + 1 to its
cluster at level l.
"""
import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from ..errors import ArgumentError
from ..utils import make_rng
from .exact import rerank
from .kmeans import DEFAULT_MAX_ITERS, inverted_lists, spherical_kmeans, top_centroids
from .metrics import CostLedger, ROUTING, SearchResult
from .transform import McssTransformParams, apply_q

logger = logging.getLogger(__name__)

MAX_LEVELS = 3


def default_level_sizes(n):
    """Two levels of roughly n^(2/3) and n^(1/3) clusters, finest first."""
    fine = min(n, int(math.ceil(n ** (2.0 / 3.0))))
    coarse = min(fine - 1, int(math.ceil(n ** (1.0 / 3.0))))
    return [fine, coarse] if coarse >= 1 else [fine]


@dataclass(frozen=True, eq=False)
class HierIndex:
    centroids: List[np.ndarray]
    parents: List[np.ndarray]
    children: List[List[np.ndarray]]
    params: McssTransformParams

    @property
    def L(self):
        return len(self.centroids)

    @property
    def widths(self):
        return [len(c) for c in self.centroids]

    @property
    def level_sizes(self):
        """Cluster counts from finest to coarsest, the order ``build`` takes them in."""
        return list(reversed(self.widths))

    @property
    def n(self):
        return len(self.parents[-1])

    @classmethod
    def build(cls, tds, level_sizes, max_iters=DEFAULT_MAX_ITERS, seed=0):
        level_sizes = [int(s) for s in level_sizes]
        if not 1 <= len(level_sizes) <= MAX_LEVELS:
            raise ArgumentError(f'between 1 and {MAX_LEVELS} levels are supported, got {len(level_sizes)}')
        if any(s < 1 for s in level_sizes):
            raise ArgumentError(f'level sizes must be positive, got {level_sizes}')
        if any(a <= b for a, b in zip(level_sizes, level_sizes[1:])):
            raise ArgumentError(f'level sizes must be strictly decreasing from finest to coarsest, got {level_sizes}')
        if level_sizes[0] > tds.n:
            raise ArgumentError(f'finest level size {level_sizes[0]} exceeds the number of points {tds.n}')

        rng = make_rng(seed)
        items = tds.data
        centroids_fine_to_coarse = []
        parents_fine_to_coarse = []
        for level, size in enumerate(level_sizes):
            centroids, assignments, iters_run, trace = spherical_kmeans(items, size, max_iters, rng)
            logger.info(f'Level {len(level_sizes) - 1 - level}: {size} clusters over {len(items)} items, '
                        f'{iters_run} iterations, objective {trace[-1]:.4f}')
            centroids_fine_to_coarse.append(centroids)
            parents_fine_to_coarse.append(assignments)
            items = centroids

        centroids = list(reversed(centroids_fine_to_coarse))
        parents = list(reversed(parents_fine_to_coarse))
        return cls.from_parents(centroids, parents, tds.params)

    @classmethod
    def from_parents(cls, centroids, parents, params):
        for array in list(centroids) + list(parents):
            array.setflags(write=False)
        children = [inverted_lists(parents[l], len(centroids[l])) for l in range(len(centroids))]
        return cls(centroids=list(centroids), parents=list(parents), children=children, params=params)

    def walk(self, q_t, p, ledger=None):
        """Keeps the p best members of each frontier and expands their children."""
        if int(p) != p or p < 1:
            raise ArgumentError(f'p must be a positive integer, got {p}')
        q_t = np.asarray(q_t, dtype=np.float64)
        frontier = np.arange(self.widths[0], dtype=np.int64)
        for level in range(self.L):
            if ledger is not None:
                ledger.add(ROUTING, len(frontier))
            if len(frontier) == 0:
                break
            kept = top_centroids(self.centroids[level], q_t, p, ids=frontier)
            children = [self.children[level][i] for i in kept]
            frontier = np.sort(np.concatenate(children)) if children else np.empty(0, dtype=np.int64)
        return frontier

    def search(self, ds, q, p, K):
        ledger = CostLedger()
        candidates = self.walk(apply_q(q, self.params), p, ledger)
        topk = rerank(ds, q, candidates, K, ledger)
        return SearchResult(candidates=candidates, topk=topk, cost=ledger)
