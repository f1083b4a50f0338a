from .metrics import CostLedger, SearchResult, PrecisionReport, precision_at_k, speedup, aggregate, \
    format_hyperparams, parse_hyperparams, CSV_COLUMNS, ROUTING, HASHING, RERANK, SCAN
from .transform import McssTransformParams, NnsTransformParams, TransformedDataset, fit_mcss, apply_p, apply_q, \
    transform_dataset, fit_transform_mcss, fit_apply_nns, apply_nns_query, norm_spread_bound
from .exact import TopK, ExactIndex, GroundTruth, select_top, exact_mips, exact_mcss, exact_nns, rerank, \
    compute_ground_truth, save_ground_truth, load_ground_truth, data_fingerprint
from .kmeans import ClusterIndex, spherical_kmeans, default_k
from .hierarchical import HierIndex, default_level_sizes
from .pca_tree import PcaTree, principal_directions
from .hashing import SrpIndex, WtaIndex
from .serialization import save_index, load_index, encode_index, decode_index
