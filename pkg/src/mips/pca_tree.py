import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from ..errors import ArgumentError
from ..utils import make_rng
from .exact import rerank
from .metrics import CostLedger, ROUTING, SearchResult
from .transform import NnsTransformParams, apply_nns_query, fit_apply_nns

logger = logging.getLogger(__name__)

POWER_ITERATIONS = 100
POWER_TOLERANCE = 1e-7


def principal_directions(centered, depth, max_iters=POWER_ITERATIONS, tol=POWER_TOLERANCE, seed=0):
    """Top `depth` eigenvectors of the covariance by power iteration with deflation.

    Each iterate is re-orthogonalized against the directions already found.
    """
    dim = centered.shape[1]
    covariance = centered.T @ centered / len(centered)
    rng = make_rng(seed)
    directions = np.zeros((depth, dim), dtype=np.float64)
    eigenvalues = np.zeros(depth, dtype=np.float64)
    for level in range(depth):
        v = rng.standard_normal(dim)
        found = directions[:level]
        for _ in range(max_iters):
            v = v - found.T @ (found @ v)
            v /= np.linalg.norm(v)
            w = covariance @ v
            w = w - found.T @ (found @ w)
            norm = np.linalg.norm(w)
            if norm == 0:
                break
            w /= norm
            converged = np.linalg.norm(w - v) < tol
            v = w
            if converged:
                break
        v = v - found.T @ (found @ v)
        v /= np.linalg.norm(v)
        directions[level] = v
        eigenvalues[level] = v @ covariance @ v
        covariance = covariance - eigenvalues[level] * np.outer(v, v)
    return directions, eigenvalues


def project(centered, direction):
    # row-independent reduction, so routing a single row reproduces its build-time projection
    return np.einsum('ij,j->i', centered, direction)


@dataclass(frozen=True, eq=False)
class PcaTree:
    """Balanced median-split tree over NNS-augmented, centered, PCA-projected data.

    Internal nodes are stored in level order (children of node i are 2i+1 and 2i+2);
    node i at level l splits on direction l.
    """
    depth: int
    nns: NnsTransformParams
    mean: np.ndarray
    directions: np.ndarray
    thresholds: np.ndarray
    leaves: List[np.ndarray]

    @property
    def n_leaves(self):
        return 2 ** self.depth

    @classmethod
    def build(cls, ds, depth, power_iters=POWER_ITERATIONS, seed=0):
        if int(depth) != depth or depth < 0:
            raise ArgumentError(f'depth must be a nonnegative integer, got {depth}')
        if 2 ** depth > ds.n:
            raise ArgumentError(f'depth {depth} needs at least {2 ** depth} points, dataset has {ds.n}')
        if depth > ds.d + 1:
            raise ArgumentError(f'depth {depth} exceeds the augmented dimension {ds.d + 1}')

        nns, augmented = fit_apply_nns(ds)
        mean = augmented.data64.mean(axis=0)
        centered = augmented.data64 - mean
        directions, eigenvalues = principal_directions(centered, depth, max_iters=power_iters, seed=seed)
        projections = np.stack([project(centered, direction) for direction in directions], axis=1) \
            if depth else np.empty((ds.n, 0))

        thresholds = np.zeros(2 ** depth - 1, dtype=np.float64)
        nodes = [np.arange(ds.n, dtype=np.int64)]
        for level in range(depth):
            next_nodes = []
            for offset, members in enumerate(nodes):
                node = 2 ** level - 1 + offset
                if len(members) == 0:
                    next_nodes.extend([members, members])
                    continue
                values = projections[members, level]
                # lower median; every point tied with it goes left, as routing does
                thresholds[node] = np.sort(values)[(len(members) - 1) // 2]
                left = values <= thresholds[node]
                next_nodes.append(members[left])
                next_nodes.append(members[~left])
            nodes = next_nodes
        logger.info(f'Built PCA-Tree: depth={depth}, leaves={len(nodes)}, '
                    f'leaf sizes {min(len(l) for l in nodes)}..{max(len(l) for l in nodes)}, '
                    f'eigenvalues {np.round(eigenvalues, 4).tolist()}')
        for array in (mean, directions, thresholds):
            array.setflags(write=False)
        return cls(depth=int(depth), nns=nns, mean=mean, directions=directions, thresholds=thresholds, leaves=nodes)

    def route_augmented(self, v, ledger=None):
        """Leaf id for a vector already in the augmented (d+1)-dimensional space."""
        centered = np.asarray(v, dtype=np.float64) - self.mean
        if ledger is not None:
            ledger.add(ROUTING, self.depth)
        node = 0
        for level in range(self.depth):
            projection = project(centered[None, :], self.directions[level])[0]
            node = 2 * node + (1 if projection <= self.thresholds[node] else 2)
        return node - (2 ** self.depth - 1)

    def route(self, q, ledger=None):
        return self.route_augmented(apply_nns_query(q, self.nns), ledger)

    def search(self, ds, q, K):
        ledger = CostLedger()
        candidates = self.leaves[self.route(q, ledger)]
        topk = rerank(ds, q, candidates, K, ledger)
        return SearchResult(candidates=candidates, topk=topk, cost=ledger)
