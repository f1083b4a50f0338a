from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..errors import ArgumentError

ROUTING = 'routing'
HASHING = 'hashing'
RERANK = 'rerank'
SCAN = 'scan'

CSV_COLUMNS = ['method', 'hyperparams', 'K', 'mean_precision', 'mean_cost', 'speedup', 'n_queries', 'seed']


@dataclass
class CostLedger:
    """Dot-equivalent operations spent by one search, broken down by phase.

    One unit is a full dot product in the searched space; hashing may add fractions.
    """
    breakdown: Dict[str, float] = field(default_factory=OrderedDict)

    def add(self, label, amount):
        if amount < 0:
            raise ArgumentError(f'cost must be nonnegative, got {amount} for {label!r}')
        self.breakdown[label] = self.breakdown.get(label, 0.0) + float(amount)
        return self

    @property
    def dot_equivalents(self):
        return float(sum(self.breakdown.values()))

    total = dot_equivalents

    def get(self, label):
        return self.breakdown.get(label, 0.0)

    def merge(self, other):
        for label, amount in other.breakdown.items():
            self.add(label, amount)
        return self


@dataclass(frozen=True)
class SearchResult:
    candidates: np.ndarray
    topk: 'TopK'
    cost: CostLedger

    @property
    def empty(self):
        return self.topk.empty


@dataclass(frozen=True)
class PrecisionReport:
    precisions: np.ndarray
    mean_precision: float
    mean_cost: float
    speedup: float
    n: int

    @property
    def n_queries(self):
        return len(self.precisions)

    def to_row(self, method, hyperparams, K, seed):
        return OrderedDict([
            ('method', method),
            ('hyperparams', format_hyperparams(hyperparams)),
            ('K', int(K)),
            ('mean_precision', self.mean_precision),
            ('mean_cost', self.mean_cost),
            ('speedup', self.speedup),
            ('n_queries', self.n_queries),
            ('seed', int(seed)),
        ])


def _ids(result):
    ids = getattr(result, 'ids', result)
    return np.asarray(ids).ravel().tolist()


def precision_at_k(true_topk, retrieved_topk, K):
    """|retrieved top-K intersected with true top-K| / K."""
    if K < 1:
        raise ArgumentError(f'K must be >= 1, got {K}')
    true_ids = _ids(true_topk)
    retrieved_ids = _ids(retrieved_topk)
    if len(true_ids) > K or len(retrieved_ids) > K:
        raise ArgumentError(f'top-K lists longer than K={K}: {len(true_ids)} and {len(retrieved_ids)}')
    return len(set(true_ids) & set(retrieved_ids)) / K


def speedup(exact_cost, approx_cost):
    if not approx_cost > 0:
        raise ArgumentError(f'approximate cost must be positive, got {approx_cost}')
    return exact_cost / approx_cost


def aggregate(per_query, n):
    """Means over (precision, cost) pairs; speedup is n over the mean cost."""
    if len(per_query) == 0:
        raise ArgumentError('cannot aggregate an empty list of query results')
    precisions = np.array([p for p, _ in per_query], dtype=np.float64)
    costs = np.array([c for _, c in per_query], dtype=np.float64)
    if np.any(precisions < 0) or np.any(precisions > 1):
        raise ArgumentError('precision values must lie in [0, 1]')
    mean_cost = float(np.mean(costs))
    return PrecisionReport(precisions=precisions,
                           mean_precision=float(np.mean(precisions)),
                           mean_cost=mean_cost,
                           speedup=speedup(float(n), mean_cost),
                           n=int(n))


def format_hyperparams(hyperparams):
    return ';'.join(f'{key}={_format_value(value)}' for key, value in sorted(hyperparams.items()))


def _format_value(value):
    if isinstance(value, (list, tuple)):
        return ','.join(str(v) for v in value)
    return str(value)


def parse_hyperparams(text):
    if not text:
        return {}
    return dict(item.split('=', 1) for item in text.split(';'))
