from dataclasses import dataclass, field
from typing import List, Optional

COMMANDS = ['gen-data', 'build-index', 'query', 'ground-truth', 'sweep', 'noise', 'calibrate', 'plot']


@dataclass
class ProgramArguments:
    run_base_path: Optional[str] = field(
        default='./runs',
        metadata={'help': 'Base path where to save runs.'}
    )

    run_name: Optional[str] = field(
        default=None,
        metadata={'help': 'Name to identify the run and logging directory.'}
    )

    data: Optional[str] = field(
        default=None,
        metadata={'help': 'Path to the dataset vector file.'}
    )

    queries: Optional[str] = field(
        default=None,
        metadata={'help': 'Path to the query vector file. If missing, queries are sampled from the dataset rows.'}
    )

    out: Optional[str] = field(
        default=None,
        metadata={'help': 'Output path (CSV for sweep/noise/calibrate/query, image for plot).'}
    )

    index: Optional[str] = field(
        default=None,
        metadata={'help': 'Index file written by build-index and read by query.'}
    )

    gt_cache: Optional[str] = field(
        default=None,
        metadata={'help': 'Ground-truth cache file. Loaded when it covers the requested K, written otherwise.'}
    )

    results: Optional[List[str]] = field(
        default=None,
        metadata={'help': 'Result CSV files to plot.'}
    )

    method: List[str] = field(
        default_factory=lambda: ['kmeans'],
        metadata={'help': 'Methods: kmeans, hier-kmeans, pca-tree, srp, wta, exact.'}
    )

    k_clusters: Optional[List[int]] = field(
        default=None,
        metadata={'help': 'Number of clusters of the flat k-means index (default round(sqrt(n))).'}
    )

    top_p: Optional[List[int]] = field(
        default=None,
        metadata={'help': 'Clusters kept per level (default 3 for kmeans, 8 for hier-kmeans).'}
    )

    levels: Optional[List[int]] = field(
        default=None,
        metadata={'help': 'Hierarchical level sizes from finest to coarsest (default ceil(n^2/3), ceil(n^1/3)).'}
    )

    pca_depth: Optional[List[int]] = field(
        default=None,
        metadata={'help': 'PCA-Tree depths.'}
    )

    tables: Optional[List[int]] = field(
        default=None,
        metadata={'help': 'Number of hash tables for srp and wta.'}
    )

    bits: List[int] = field(
        default_factory=lambda: [16],
        metadata={'help': 'Random projections per SRP table.'}
    )

    perms: List[int] = field(
        default_factory=lambda: [8],
        metadata={'help': 'Permutations per WTA table.'}
    )

    prefix_k: List[int] = field(
        default_factory=lambda: [16],
        metadata={'help': 'WTA permutation prefix length.'}
    )

    mcss_u: float = field(
        default=0.83,
        metadata={'help': 'Largest scaled data norm U of the cosine-search transform.'}
    )

    mcss_m: int = field(
        default=3,
        metadata={'help': 'Number of norm components m appended by the cosine-search transform.'}
    )

    topk: List[int] = field(
        default_factory=lambda: [1, 10, 100],
        metadata={'help': 'K values for precision@K.'}
    )

    sigma: List[float] = field(
        default_factory=lambda: [0.0, 0.1, 0.2, 0.3, 0.4],
        metadata={'help': 'Scales of the Gaussian noise added to queries in the noise experiment.'}
    )

    target_speedup: float = field(
        default=30.0,
        metadata={'help': 'Speedup the calibration searches hyperparameters for.'}
    )

    tolerance: float = field(
        default=0.2,
        metadata={'help': 'Relative tolerance on the calibrated speedup.'}
    )

    calibration_queries: int = field(
        default=200,
        metadata={'help': 'Number of queries used to measure speedup during calibration.'}
    )

    skip_calibration: bool = field(
        default=False,
        metadata={'help': 'Use the first value of each grid in the noise experiment instead of calibrating.'}
    )

    wta_cost_original_dim: bool = field(
        default=False,
        metadata={'help': 'Normalize the WTA hashing cost by the original dimension d instead of d + m.'}
    )

    n_queries: Optional[int] = field(
        default=None,
        metadata={'help': 'Number of queries to generate or sample (default depends on --query_profile).'}
    )

    query_profile: str = field(
        default='embedding',
        metadata={'help': 'Default query count profile: cf (60,000) or embedding (2,000), capped at n.'}
    )

    max_iters: int = field(
        default=50,
        metadata={'help': 'Maximum spherical k-means iterations.'}
    )

    pca_iters: int = field(
        default=100,
        metadata={'help': 'Power iterations per PCA-Tree direction.'}
    )

    n_jobs: int = field(
        default=1,
        metadata={'help': 'Threads used to evaluate queries.'}
    )

    n: int = field(
        default=10000,
        metadata={'help': 'Number of synthetic data vectors for gen-data.'}
    )

    dim: int = field(
        default=64,
        metadata={'help': 'Dimension of synthetic vectors for gen-data.'}
    )

    n_clusters: int = field(
        default=100,
        metadata={'help': 'Number of Gaussian blobs for gen-data.'}
    )

    spread: float = field(
        default=0.5,
        metadata={'help': 'Standard deviation of the points around each blob center.'}
    )

    dtype: str = field(
        default='float32',
        metadata={'help': 'Element type of generated files: float32 or float64.'}
    )

    seed: int = field(
        default=42,
        metadata={'help': 'Seed for experiments replication.'}
    )
