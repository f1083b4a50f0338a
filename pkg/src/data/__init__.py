from .dataset import Dataset, QueryBatch, VectorMatrix
from .data_loading import load_dataset, save_dataset, load_queries, save_queries, \
    read_file, write_file, encode_vectors, decode_vectors
from .synthetic import gen_synthetic, gen_synthetic_with_queries, sample_queries, \
    corrupt_queries, default_query_count, QUERY_COUNTS
