import os
import tempfile
import unittest

import numpy as np

from src.data import Dataset, QueryBatch, gen_synthetic
from src.errors import ArgumentError, DegenerateDataError, VectorFormatError
from src.mips import CostLedger, ExactIndex, select_top, exact_mips, exact_mcss, exact_nns, rerank, \
    compute_ground_truth, save_ground_truth, load_ground_truth, data_fingerprint, SCAN, RERANK


class TestExactSearch(unittest.TestCase):

    def test_small_example(self):
        ds = Dataset(np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 3.0]]))
        result = exact_mips(ds, np.array([1.0, 1.0]), 2)
        np.testing.assert_array_equal(result.ids, [2, 1])
        np.testing.assert_allclose(result.scores, [6.0, 2.0])

    def test_ties_break_by_ascending_id(self):
        ds = Dataset(np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]))
        result = exact_mips(ds, np.array([1.0, 0.0]), 2)
        np.testing.assert_array_equal(result.ids, [0, 1])
        top = select_top(np.array([5.0, 7.0, 7.0, 7.0, 1.0]), np.array([9, 4, 2, 8, 0]), 3)
        np.testing.assert_array_equal(top.ids, [2, 4, 8])

    def test_matches_full_sort(self):
        ds = gen_synthetic(3000, 12, 30, 0.3, seed=0)
        q = np.random.default_rng(1).standard_normal(12)
        result = exact_mips(ds, q, 100)
        scores = ds.data64 @ q
        order = np.lexsort((np.arange(ds.n), -scores))[:100]
        np.testing.assert_array_equal(result.ids, order)

    def test_mcss_ignores_norms(self):
        ds = Dataset(np.array([[10.0, 10.0], [1.0, 0.0], [0.0, 0.0]]))
        result = exact_mcss(ds, np.array([1.0, 0.0]), 2)
        np.testing.assert_array_equal(result.ids, [1, 0])
        with self.assertRaises(DegenerateDataError):
            exact_mcss(Dataset(np.zeros((2, 2))), np.ones(2), 1)

    def test_nns_orders_by_distance(self):
        ds = Dataset(np.array([[0.0, 0.0], [5.0, 5.0], [1.0, 1.0]]))
        np.testing.assert_array_equal(exact_nns(ds, np.array([0.9, 0.9]), 3).ids, [2, 0, 1])

    def test_argument_errors(self):
        ds = Dataset(np.ones((4, 3)))
        with self.assertRaises(ArgumentError):
            exact_mips(ds, np.ones(3), 0)
        with self.assertRaises(ArgumentError):
            exact_mips(ds, np.ones(3), 5)
        with self.assertRaises(ArgumentError):
            exact_mips(ds, np.ones(2), 1)

    def test_rerank_restricts_to_candidates_and_counts_cost(self):
        ds = gen_synthetic(500, 6, 5, 0.5, seed=2)
        q = np.random.default_rng(0).standard_normal(6)
        candidates = np.arange(0, 500, 7)
        ledger = CostLedger()
        result = rerank(ds, q, candidates, 5, ledger)
        self.assertTrue(set(result.ids.tolist()) <= set(candidates.tolist()))
        self.assertEqual(ledger.get(RERANK), len(candidates))
        full = exact_mips(Dataset(ds.data[candidates]), q, 5)
        np.testing.assert_array_equal(result.ids, candidates[full.ids])
        np.testing.assert_array_equal(result.scores, full.scores)

    def test_positive_query_scaling_keeps_the_ranking(self):
        ds = gen_synthetic(3000, 12, 30, 0.3, seed=4)
        q = np.random.default_rng(5).standard_normal(12)
        base = exact_mips(ds, q, 50).ids
        for c in (0.5, 3.7, 1e3):
            np.testing.assert_array_equal(exact_mips(ds, c * q, 50).ids, base)

    def test_equal_norms_make_all_three_searches_agree(self):
        raw = gen_synthetic(2000, 10, 20, 0.5, seed=6, dtype=np.float64).data
        ds = Dataset(2.0 * raw / np.linalg.norm(raw, axis=1, keepdims=True))
        rng = np.random.default_rng(8)
        for _ in range(10):
            q = rng.standard_normal(10)
            mips = exact_mips(ds, q, 10).ids
            np.testing.assert_array_equal(exact_mcss(ds, q, 10).ids, mips)
            np.testing.assert_array_equal(exact_nns(ds, q, 10).ids, mips)

    def test_rerank_on_nested_candidates_finds_no_fewer_true_items(self):
        ds = gen_synthetic(1000, 8, 10, 0.5, seed=9)
        rng = np.random.default_rng(10)
        for _ in range(20):
            q = rng.standard_normal(8)
            truth = set(exact_mips(ds, q, 10).ids.tolist())
            order = rng.permutation(ds.n)
            found = [len(truth & set(rerank(ds, q, np.sort(order[:size]), 10).ids.tolist()))
                     for size in (50, 200, 500, 1000)]
            self.assertEqual(found, sorted(found))
            self.assertEqual(found[-1], 10)

    def test_rerank_empty_candidates(self):
        ds = Dataset(np.ones((3, 2)))
        ledger = CostLedger()
        result = rerank(ds, np.ones(2), np.array([], dtype=np.int64), 2, ledger)
        self.assertTrue(result.empty)
        self.assertEqual(ledger.total, 0.0)
        with self.assertRaises(ArgumentError):
            rerank(ds, np.ones(2), np.array([3]), 1)

    def test_exact_index_costs_n(self):
        ds = gen_synthetic(200, 4, 4, 0.5, seed=0)
        result = ExactIndex(ds.n).search(ds, np.ones(4), 10)
        self.assertEqual(result.cost.total, 200.0)
        self.assertEqual(result.cost.get(SCAN), 200.0)
        np.testing.assert_array_equal(result.topk.ids, exact_mips(ds, np.ones(4), 10).ids)


class TestGroundTruth(unittest.TestCase):

    def setUp(self):
        self.ds = gen_synthetic(400, 8, 8, 0.4, seed=1)
        self.queries = QueryBatch(np.random.default_rng(4).standard_normal((12, 8)))

    def test_prefix_property(self):
        gt = compute_ground_truth(self.ds, self.queries, 20)
        for i in range(self.queries.n):
            np.testing.assert_array_equal(gt.topk(i, 5).ids, exact_mips(self.ds, self.queries.row(i), 5).ids)
        with self.assertRaises(ArgumentError):
            gt.topk(0, 21)

    def test_parallel_matches_serial(self):
        serial = compute_ground_truth(self.ds, self.queries, 10)
        threaded = compute_ground_truth(self.ds, self.queries, 10, n_jobs=3)
        np.testing.assert_array_equal(serial.ids, threaded.ids)
        np.testing.assert_array_equal(serial.scores, threaded.scores)

    def test_cache_round_trip(self):
        gt = compute_ground_truth(self.ds, self.queries, 10)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'gt.bin')
            save_ground_truth(gt, path)
            loaded = load_ground_truth(path)
            with open(path, 'r+b') as f:
                f.write(b'NOPE')
            with self.assertRaises(VectorFormatError):
                load_ground_truth(path)
        np.testing.assert_array_equal(loaded.ids, gt.ids)
        np.testing.assert_array_equal(loaded.scores, gt.scores)
        self.assertEqual(loaded.fingerprint, gt.fingerprint)
        self.assertTrue(loaded.covers(self.ds, self.queries, 10))

    def test_covers_only_its_own_inputs(self):
        gt = compute_ground_truth(self.ds, self.queries, 10)
        self.assertTrue(gt.covers(self.ds, self.queries, 5))
        self.assertFalse(gt.covers(self.ds, self.queries, 11))
        other_queries = QueryBatch(np.random.default_rng(5).standard_normal((12, 8)))
        self.assertFalse(gt.covers(self.ds, other_queries, 10))
        other_ds = gen_synthetic(400, 8, 8, 0.4, seed=2)
        self.assertFalse(gt.covers(other_ds, self.queries, 10))
        self.assertEqual(data_fingerprint(self.ds, self.queries), gt.fingerprint)
