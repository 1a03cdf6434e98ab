import numpy as np
import pytest

from stgl import (DegenerateInput, InsufficientSpatialEigenvectors,
                  adjusted_rand_index, eigendecompose, kmeans, per_view_labels,
                  score_against, select_spatial, spectral_cluster,
                  static_blocks)
from stgl.clustering import _lloyd
from stgl.laplacian import SpectralEmbedding

from util import ari_pair_oracle


def make_embedding(vectors, tags, n, M):
    vals = np.linspace(1.0, 0.5, vectors.shape[1])
    folded = tuple(vectors[:, j].reshape(M, n) for j in range(vectors.shape[1]))
    return SpectralEmbedding(n=n, M=M, eigenvalues=vals, vectors=vectors,
                             folded=folded, tags=tuple(tags))


class TestSelectSpatial:
    def test_skips_temporal(self):
        rng = np.random.default_rng(0)
        vecs = rng.standard_normal((12, 5))
        emb = make_embedding(vecs, ["constant", "temporal", "spatial",
                                    "temporal", "spatial"], n=4, M=3)
        sel = select_spatial(emb, 3)
        assert sel.selection == (0, 2, 4)
        np.testing.assert_array_equal(sel.points, vecs[:, [0, 2, 4]])

    def test_all_spatial_takes_first_k(self):
        vecs = np.random.default_rng(1).standard_normal((8, 4))
        emb = make_embedding(vecs, ["spatial"] * 4, n=4, M=2)
        assert select_spatial(emb, 2).selection == (0, 1)

    def test_insufficient_raises(self):
        vecs = np.random.default_rng(2).standard_normal((8, 3))
        emb = make_embedding(vecs, ["constant", "temporal", "temporal"],
                             n=4, M=2)
        with pytest.raises(InsufficientSpatialEigenvectors) as err:
            select_spatial(emb, 2)
        assert err.value.available == 1
        assert err.value.requested == 2

    def test_impossible_request(self):
        vecs = np.random.default_rng(3).standard_normal((8, 4))
        emb = make_embedding(vecs, ["spatial"] * 4, n=4, M=2)
        with pytest.raises(InsufficientSpatialEigenvectors):
            select_spatial(emb, 9)


class TestKmeans:
    def test_k1_mean(self):
        pts = np.arange(10.0).reshape(5, 2)
        res = kmeans(pts, 1, seed=0, restarts=2)
        assert np.all(res.labels == 0)
        expected = float(((pts - pts.mean(axis=0)) ** 2).sum())
        assert res.inertia == pytest.approx(expected, abs=1e-9)

    def test_two_point_masses(self):
        pts = np.array([[0.0, 0.0]] * 5 + [[3.0, 4.0]] * 5)
        res = kmeans(pts, 2, seed=0, restarts=3)
        assert res.inertia == pytest.approx(0.0, abs=1e-12)
        labels = res.labels.ravel()
        assert len(set(labels[:5])) == 1
        assert len(set(labels[5:])) == 1
        assert labels[0] != labels[-1]

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        pts = rng.standard_normal((40, 3))
        a = kmeans(pts, 4, seed=9, restarts=5)
        b = kmeans(pts, 4, seed=9, restarts=5)
        assert np.array_equal(a.labels, b.labels)
        assert a.inertia == b.inertia

    def test_inertia_matches_recomputed_objective(self):
        rng = np.random.default_rng(6)
        pts = rng.standard_normal((50, 2))
        res = kmeans(pts, 3, seed=1, restarts=4)
        labels = res.labels.ravel()
        centroids = np.vstack([pts[labels == c].mean(axis=0) for c in range(3)])
        objective = float(((pts - centroids[labels]) ** 2).sum())
        assert res.inertia == pytest.approx(objective, abs=1e-9)

    def test_lloyd_inertia_non_increasing(self):
        rng = np.random.default_rng(7)
        pts = rng.standard_normal((60, 2))
        for r in range(5):
            _, _, history = _lloyd(pts, 4, np.random.default_rng((7, r)))
            assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))

    def test_views_folding(self):
        pts = np.vstack([np.zeros((4, 1)), np.ones((4, 1))])
        res = kmeans(pts, 2, seed=0, restarts=2, views=2)
        assert res.labels.shape == (2, 4)
        rows = per_view_labels(res)
        assert len(rows) == 2
        assert np.array_equal(rows[0], res.labels[0])

    def test_single_view_flat(self):
        pts = np.random.default_rng(8).standard_normal((6, 2))
        res = kmeans(pts, 2, seed=0, restarts=2, views=1)
        rows = per_view_labels(res)
        assert len(rows) == 1
        assert np.array_equal(rows[0], res.labels.ravel())

    def test_more_clusters_than_points_rejected(self):
        with pytest.raises(ValueError):
            kmeans(np.zeros((2, 2)), 3)


class TestAdjustedRandIndex:
    def test_identical_is_one(self):
        labels = np.array([0, 0, 1, 2, 2, 1])
        assert adjusted_rand_index(labels, labels) == 1.0

    def test_relabel_invariance(self):
        a = np.array([0, 0, 1, 1, 2, 2])
        b = np.array([5, 5, 3, 3, 9, 9])
        assert adjusted_rand_index(a, b) == 1.0

    def test_frozen_hand_case(self):
        assert adjusted_rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == -0.5

    def test_matches_pair_oracle_exactly(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = int(rng.integers(2, 13))
            ka = int(rng.integers(1, 5))
            kb = int(rng.integers(1, 5))
            a = rng.integers(0, ka, n)
            b = rng.integers(0, kb, n)
            assert adjusted_rand_index(a, b) == ari_pair_oracle(a, b)

    def test_symmetry(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            n = int(rng.integers(2, 20))
            a = rng.integers(0, 4, n)
            b = rng.integers(0, 4, n)
            assert adjusted_rand_index(a, b) == adjusted_rand_index(b, a)

    def test_degenerate_input(self):
        with pytest.raises(DegenerateInput):
            adjusted_rand_index([0], [0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            adjusted_rand_index([0, 1], [0, 1, 2])


class TestPipeline:
    def test_static_blocks_recovered_every_view(self):
        graph, truth = static_blocks(n=30, blocks=2, M=3, p_in=0.9,
                                     p_out=0.05, seed=0)
        result = spectral_cluster(graph, 2, seed=1, truth=truth)
        assert result.ari_per_view == (1.0, 1.0, 1.0)
        labels = result.clustering.labels
        for t in range(1, 3):
            assert np.array_equal(labels[t], labels[0])

    def test_pipeline_deterministic(self):
        graph, truth = static_blocks(n=24, blocks=2, M=3, seed=3)
        a = spectral_cluster(graph, 2, seed=4, restarts=5)
        b = spectral_cluster(graph, 2, seed=4, restarts=5)
        assert np.array_equal(a.clustering.labels, b.clustering.labels)

    def test_embedding_row_indexing(self):
        graph, _ = static_blocks(n=20, blocks=2, M=4, seed=2)
        res = spectral_cluster(graph, 2, seed=0)
        points = res.selected.points
        assert points.shape == (graph.M * graph.n, 2)
        emb = res.embedding
        j = res.selected.selection[1]
        np.testing.assert_array_equal(points[:, 1],
                                      emb.folded[j].ravel())

    def test_score_against(self):
        labels = np.array([[0, 0, 1, 1], [1, 1, 0, 0]])
        truth = np.array([[1, 1, 0, 0], [1, 1, 0, 0]])
        assert score_against(labels, truth) == (1.0, 1.0)

    def test_growing_eigenvector_request(self):
        # a request that can only be satisfied after widening the basis
        graph, _ = static_blocks(n=12, blocks=3, M=3, p_in=0.9,
                                 p_out=0.05, seed=6)
        res = spectral_cluster(graph, 3, seed=0, k_eigs=1)
        assert res.selected.points.shape[1] == 3
