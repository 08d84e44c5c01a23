"""Neighbor graph and layout reduction tests."""

import numpy as np
import pytest

from agftopics.reduce import (
    ReduceConfig,
    find_ab,
    fuzzy_union,
    knn_graph,
    load_points,
    pairwise_distances,
    reduce_embeddings,
    reduce_matrix,
    save_points,
)

from conftest import two_blob_points


class TestKnnGraph:
    def test_equilateral_triangle_neighbors(self):
        points = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
        knn = knn_graph(points, 2)
        for i in range(3):
            assert sorted(knn.indices[i].tolist()) == sorted({0, 1, 2} - {i})

    def test_nearest_neighbor_membership_is_one(self):
        rng = np.random.default_rng(3)
        points = rng.normal(size=(12, 5))
        knn = knn_graph(points, 4)
        assert knn.memberships[:, 0] == pytest.approx(np.ones(12))

    def test_neighbor_sets_match_brute_force(self):
        rng = np.random.default_rng(8)
        points = rng.normal(size=(10, 4))
        knn = knn_graph(points, 3)
        dist = pairwise_distances(points)
        np.fill_diagonal(dist, np.inf)
        for i in range(10):
            expected = set(np.argsort(dist[i])[:3].tolist())
            assert set(knn.indices[i].tolist()) == expected

    def test_memberships_decrease_with_distance(self):
        rng = np.random.default_rng(1)
        points = rng.normal(size=(15, 3))
        knn = knn_graph(points, 5)
        for row in knn.memberships:
            assert all(row[j] >= row[j + 1] - 1e-12 for j in range(len(row) - 1))

    def test_membership_sum_calibrated(self):
        rng = np.random.default_rng(2)
        points = rng.normal(size=(20, 6))
        k = 4
        knn = knn_graph(points, k)
        sums = knn.memberships.sum(axis=1)
        assert sums == pytest.approx(np.full(20, np.log2(k)), rel=1e-3)

    def test_duplicate_points_keep_full_membership(self):
        points = np.array([[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [5.0, 5.0]])
        knn = knn_graph(points, 2)
        # Both neighbors of a duplicated point sit at distance zero.
        assert knn.rho[0] == 0.0
        assert knn.memberships[0] == pytest.approx(np.ones(2))
        # The far point sees the duplicates at their true distance.
        assert knn.rho[3] == pytest.approx(np.sqrt(50))
        assert knn.memberships[3] == pytest.approx(np.ones(2))

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError, match="at least"):
            knn_graph(np.zeros((3, 2)), 3)


class TestFuzzyUnion:
    def test_symmetric_result(self):
        rng = np.random.default_rng(4)
        points = rng.normal(size=(9, 3))
        knn = knn_graph(points, 3)
        weights = fuzzy_union(knn, 9)
        assert np.allclose(weights, weights.T)

    def test_union_bounds(self):
        rng = np.random.default_rng(5)
        points = rng.normal(size=(9, 3))
        weights = fuzzy_union(knn_graph(points, 3), 9)
        assert weights.min() >= 0.0
        assert weights.max() <= 1.0 + 1e-12

    def test_one_sided_edge_kept(self):
        # a + b - ab with b = 0 reduces to a.
        directed_only = fuzzy_union(knn_graph(np.array([[0.0], [1.0], [3.0]]), 1), 3)
        assert directed_only[2, 1] == pytest.approx(1.0)


class TestFindAb:
    def test_kernel_matches_target_shape(self):
        a, b = find_ab(0.1)
        assert a > 0 and b > 0
        kernel = lambda d: 1.0 / (1.0 + a * d ** (2 * b))
        assert kernel(0.01) == pytest.approx(1.0, abs=0.05)
        assert kernel(3.0) < 0.1

    def test_cached_and_stable(self):
        assert find_ab(0.1) == find_ab(0.1)


class TestReduceMatrix:
    def test_output_cardinality_and_dim(self):
        rng = np.random.default_rng(0)
        points = rng.normal(size=(12, 16))
        reduced = reduce_matrix(points, ReduceConfig(n_epochs=50))
        assert reduced.shape == (12, 2)
        assert np.isfinite(reduced).all()

    def test_blob_locality_preserved(self):
        points = two_blob_points(seed=0)
        reduced = reduce_matrix(points, ReduceConfig(seed=0))
        n = points.shape[0]
        half = n // 2
        for i in range(n):
            dist = np.linalg.norm(reduced - reduced[i], axis=1)
            dist[i] = np.inf
            nearest = int(np.argmin(dist))
            assert (i < half) == (nearest < half)

    def test_identical_seeds_identical_layouts(self):
        points = two_blob_points(seed=3)
        first = reduce_matrix(points, ReduceConfig(seed=7))
        second = reduce_matrix(points, ReduceConfig(seed=7))
        assert np.array_equal(first, second)

    def test_different_seeds_differ(self):
        points = two_blob_points(seed=3)
        first = reduce_matrix(points, ReduceConfig(seed=0))
        second = reduce_matrix(points, ReduceConfig(seed=1))
        assert not np.array_equal(first, second)

    def test_disconnected_groups_stay_apart(self):
        # Two tight groups whose kNN graphs never cross: the layout
        # starts one component per circle slot and keeps them separate.
        rng = np.random.default_rng(6)
        group_a = rng.normal(0.0, 0.01, (4, 8))
        group_b = rng.normal(0.0, 0.01, (4, 8))
        group_b[:, 0] += 100.0
        reduced = reduce_matrix(np.vstack([group_a, group_b]), ReduceConfig(seed=2))
        centroid_a = reduced[:4].mean(axis=0)
        centroid_b = reduced[4:].mean(axis=0)
        spread = max(
            np.linalg.norm(reduced[:4] - centroid_a, axis=1).max(),
            np.linalg.norm(reduced[4:] - centroid_b, axis=1).max(),
        )
        assert np.linalg.norm(centroid_a - centroid_b) > spread

    def test_invalid_config_rejected(self):
        points = np.zeros((5, 3))
        with pytest.raises(ValueError):
            reduce_matrix(points, ReduceConfig(n_neighbors=0))
        with pytest.raises(ValueError):
            reduce_matrix(points, ReduceConfig(target_dim=0))


class TestReduceEmbeddings:
    def test_node_set_preserved(self):
        rng = np.random.default_rng(9)
        embeddings = {f"w{i}": rng.normal(size=8) for i in range(10)}
        reduced = reduce_embeddings(embeddings, ReduceConfig(n_epochs=50))
        assert sorted(reduced) == sorted(embeddings)
        for vector in reduced.values():
            assert vector.shape == (2,)


class TestPointPersistence:
    def test_round_trip(self, tmp_path):
        points = {"a": np.array([1.5, -2.25]), "b": np.array([0.1, 0.2])}
        path = str(tmp_path / "points.tsv")
        save_points(points, path)
        loaded = load_points(path)
        assert sorted(loaded) == ["a", "b"]
        for node in points:
            assert np.array_equal(loaded[node], points[node])
