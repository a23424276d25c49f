import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hypergraph_ssl import (
    ClusterAssignment,
    ExpressionMatrix,
    cluster_count,
    compute_degrees,
    generate_synthetic,
    incidence_from_clusters,
    kmeans,
    propagation_matrix,
    zscore_rows,
)


class TestZscore:
    def test_hand_row(self):
        z = zscore_rows(np.array([[1.0, 2.0, 3.0]]))
        r = np.sqrt(1.5)
        np.testing.assert_allclose(z, [[-r, 0.0, r]], atol=1e-15)

    def test_constant_row(self):
        np.testing.assert_array_equal(zscore_rows(np.array([[5.0, 5.0, 5.0]])), 0.0)

    def test_keeps_type(self):
        x = ExpressionMatrix([[1, 2], [3, 5]], ["a", "b"])
        z = zscore_rows(x)
        assert isinstance(z, ExpressionMatrix) and z.gene_ids == ("a", "b")

    def test_needs_two_columns(self):
        with pytest.raises(ValueError):
            zscore_rows(np.ones((3, 1)))

    @settings(max_examples=100, deadline=None)
    @given(arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(2, 12)),
                  elements=st.floats(-1e3, 1e3, allow_nan=False)))
    def test_moments_and_idempotence(self, X):
        Z = zscore_rows(X)
        assert np.all(np.abs(Z.mean(axis=1)) <= 1e-12 * max(1.0, np.abs(Z).max()))
        sd = Z.std(axis=1)
        nonconst = sd > 0
        np.testing.assert_allclose(sd[nonconst], 1.0, atol=1e-10)
        np.testing.assert_allclose(zscore_rows(Z)[nonconst], Z[nonconst], atol=1e-10)


class TestClusterCount:
    @pytest.mark.parametrize("n,k", [(4062, 45), (8, 2), (200, 10), (4, 2), (300, 12), (5, 2)])
    def test_values(self, n, k):
        assert cluster_count(n) == k

    def test_rounding_boundary(self):
        # sqrt(6) = 2.449, sqrt(6.5) = 2.550
        assert cluster_count(12) == 2 and cluster_count(13) == 3

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            cluster_count(3)


def _within_between(X, labels):
    within, between = [], []
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            d = np.sum((X[i] - X[j]) ** 2)
            (within if labels[i] == labels[j] else between).append(d)
    return max(within), min(between)


class TestKmeans:
    def test_two_groups(self, rng):
        X = np.vstack([rng.normal(0, 1, (10, 2)), rng.normal(100, 1, (10, 2))])
        a = kmeans(X, 2, seed=3)
        assert a.k == 2
        assert len(set(a.labels[:10])) == 1 and len(set(a.labels[10:])) == 1
        assert a.labels[0] != a.labels[10]
        w, b = _within_between(X, a.labels)
        assert w < b

    def test_deterministic(self, rng):
        X = rng.standard_normal((60, 5))
        a, b = kmeans(X, 6, seed=11), kmeans(X, 6, seed=11)
        np.testing.assert_array_equal(a.labels, b.labels)
        assert a.objective_history == b.objective_history

    def test_planted_pairs(self, rng):
        centers = rng.uniform(-1000, 1000, size=(8, 3))
        X = np.repeat(centers, 2, axis=0) + rng.normal(0, 0.01, (16, 3))
        a = kmeans(X, 8, seed=0)
        assert a.k == 8
        for p in range(8):
            assert a.labels[2 * p] == a.labels[2 * p + 1]
        assert len(set(a.labels)) == 8

    def test_objective_non_increasing(self, rng):
        for seed in range(5):
            X = rng.standard_normal((80, 4))
            hist = np.array(kmeans(X, 6, seed=seed).objective_history)
            assert np.all(np.diff(hist) <= 1e-9 * hist[0])

    def test_singleton_merge(self):
        X = np.vstack([np.zeros((4, 2)) + [[0, 0], [0, 1], [1, 0], [1, 1]],
                       50 + np.array([[0, 0], [0, 1], [1, 0], [1, 1]]),
                       [[1000.0, 1000.0]]])
        a = kmeans(X, 3, seed=0)
        assert a.n_repaired == 1 and a.k == 2
        assert a.labels[8] == a.labels[4]
        assert np.all(np.bincount(a.labels) >= 2)

    def test_empty_clusters_dropped(self):
        X = np.vstack([np.zeros((4, 2)), np.ones((4, 2))])
        a = kmeans(X, 3, seed=1)
        assert a.k == 2
        assert np.all(np.bincount(a.labels) == 4)

    @pytest.mark.parametrize("k", [1, 6])
    def test_k_range(self, k):
        with pytest.raises(ValueError):
            kmeans(np.zeros((10, 2)), k)

    def test_sizes_at_least_two(self, rng):
        X = rng.standard_normal((40, 3)) * rng.uniform(0.1, 10, size=(40, 1))
        for seed in range(10):
            a = kmeans(X, 20, seed=seed)
            assert np.all(np.bincount(a.labels, minlength=a.k) >= 2)


class TestIncidence:
    def test_definition(self):
        h = incidence_from_clusters(ClusterAssignment(np.array([0, 0, 1, 1]), 2, 0))
        np.testing.assert_array_equal(h.incidence, [[1, 0], [1, 0], [0, 1], [0, 1]])
        np.testing.assert_array_equal(h.edge_weights, [1, 1])

    def test_pipeline_properties(self):
        x, _ = generate_synthetic(120, 10, 6, 3, 0.5, seed=2)
        a = kmeans(zscore_rows(x), cluster_count(120), seed=0)
        h = incidence_from_clusters(a)
        np.testing.assert_array_equal(h.incidence.sum(axis=1), 1)
        np.testing.assert_array_equal(h.incidence.sum(axis=0), np.bincount(a.labels))
        d = compute_degrees(h)
        np.testing.assert_array_equal(d.vertex_degrees, 1)
        H = h.incidence
        S = propagation_matrix(h, d, "rw").values
        np.testing.assert_allclose(S, H @ np.diag(1 / d.edge_degrees) @ H.T, atol=1e-15)

    def test_pipeline_bit_identical(self):
        x, _ = generate_synthetic(120, 10, 6, 3, 0.5, seed=2)
        H1 = incidence_from_clusters(kmeans(zscore_rows(x), 8, seed=4)).incidence
        x2, _ = generate_synthetic(120, 10, 6, 3, 0.5, seed=2)
        H2 = incidence_from_clusters(kmeans(zscore_rows(x2), 8, seed=4)).incidence
        assert H1.tobytes() == H2.tobytes()
