import numpy as np
import pytest

from leadrank import (
    LeadGraph,
    ValidationError,
    build_graph,
    column_normalize,
    pairwise_matrix,
    threshold,
)

from conftest import make_noise_panel


class TestThreshold:
    def test_rule_on_mixed_signs(self):
        strengths = np.array([
            [0.0, 0.15, 0.05],
            [-0.12, 0.0, 0.0],
            [0.0, 0.0, 0.0],
        ])
        W = threshold(strengths, 0.1)
        assert W[0, 1] == 0.15
        assert W[1, 0] == 0.12
        assert W[0, 2] == 0.0

    def test_zero_cutoff_keeps_all_nonzero(self):
        strengths = np.array([[0.0, -0.3], [0.2, 0.0]])
        assert np.array_equal(threshold(strengths, 0.0), [[0.0, 0.3], [0.2, 0.0]])

    def test_everything_below_cutoff_gives_zero_matrix(self):
        strengths = np.array([[0.0, 0.09], [-0.1, 0.0]])
        assert np.array_equal(threshold(strengths, 0.1), np.zeros((2, 2)))

    def test_strictly_greater_at_boundary(self):
        W = threshold(np.array([[0.0, 0.1], [0.0, 0.0]]), 0.1)
        assert W[0, 1] == 0.0

    def test_diagonal_forced_to_zero(self):
        W = threshold(np.array([[0.9, 0.5], [0.5, 0.9]]), 0.1)
        assert np.all(np.diagonal(W) == 0.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_monotone_in_cutoff(self, seed):
        gen = np.random.default_rng(seed)
        strengths = gen.uniform(-1, 1, size=(6, 6))
        np.fill_diagonal(strengths, 0.0)
        lo = threshold(strengths, 0.1) > 0
        hi = threshold(strengths, 0.4) > 0
        assert np.all(lo | ~hi)

    def test_negative_cutoff_rejected(self):
        with pytest.raises(ValidationError):
            threshold(np.zeros((2, 2)), -0.1)


class TestColumnNormalize:
    def test_single_edge(self):
        W = np.zeros((2, 2))
        W[0, 1] = 0.3
        H = column_normalize(W)
        assert H[0, 1] == 1.0
        assert H.sum() == 1.0

    def test_already_stochastic_column_kept(self):
        W = np.zeros((3, 3))
        W[:, 2] = [0.2, 0.3, 0.5]
        H = column_normalize(W)
        assert np.allclose(H[:, 2], [0.2, 0.3, 0.5], atol=1e-15)

    def test_zero_matrix_stays_zero(self):
        assert np.array_equal(column_normalize(np.zeros((3, 3))), np.zeros((3, 3)))

    @pytest.mark.parametrize("seed", range(5))
    def test_nonzero_columns_sum_to_one(self, seed):
        gen = np.random.default_rng(10 + seed)
        W = threshold(gen.uniform(-1, 1, size=(8, 8)), 0.2)
        H = column_normalize(W)
        colsums = H.sum(axis=0)
        nonzero = W.sum(axis=0) > 0
        assert np.allclose(colsums[nonzero], 1.0, atol=1e-12)
        assert np.all(colsums[~nonzero] == 0.0)

    def test_idempotent_on_nonzero_columns(self, rng):
        W = threshold(rng.uniform(-1, 1, size=(6, 6)), 0.2)
        H = column_normalize(W)
        assert np.allclose(column_normalize(H), H, atol=1e-15)

    def test_scale_invariance(self, rng):
        W = threshold(rng.uniform(-1, 1, size=(6, 6)), 0.2)
        assert np.allclose(column_normalize(3.7 * W), column_normalize(W), atol=1e-15)

    def test_negative_weights_rejected(self):
        with pytest.raises(ValidationError):
            column_normalize(np.array([[0.0, -0.1], [0.0, 0.0]]))


class TestLeadGraph:
    def test_build_from_matrix(self):
        m = pairwise_matrix(make_noise_panel(5, 150, seed=2), max_lag=5)
        g = build_graph(m, cutoff=0.05)
        assert g.labels == m.labels
        assert g.threshold == 0.05
        assert np.array_equal(g.weights > 0, g.transition > 0)

    def test_edge_sparsity_matches(self):
        m = pairwise_matrix(make_noise_panel(4, 150, seed=4), max_lag=5)
        g = build_graph(m, cutoff=0.03)
        edges = g.edges()
        assert len(edges) == int((g.weights > 0).sum())
        for a, b, w in edges:
            i, j = g.labels.index(a), g.labels.index(b)
            assert g.weights[i, j] == w

    def test_two_way_edges_allowed(self):
        strengths = np.array([[0.0, 0.5], [0.4, 0.0]])
        g = LeadGraph(("a", "b"), threshold(strengths, 0.1),
                      column_normalize(threshold(strengths, 0.1)), 0.1)
        assert g.weights[0, 1] == 0.5 and g.weights[1, 0] == 0.4

    def test_json_round_trip(self, tmp_path):
        m = pairwise_matrix(make_noise_panel(4, 120, seed=6), max_lag=4)
        g = build_graph(m, cutoff=0.02)
        path = tmp_path / "graph.json"
        g.to_json(path)
        back = LeadGraph.from_json(path)
        assert back.labels == g.labels
        assert back.threshold == g.threshold
        assert np.array_equal(back.weights, g.weights)
        assert np.array_equal(back.transition, g.transition)

    def test_json_uses_external_key_names(self, tmp_path):
        import json

        m = pairwise_matrix(make_noise_panel(3, 120, seed=7), max_lag=4)
        g = build_graph(m, cutoff=0.02)
        path = tmp_path / "graph.json"
        g.to_json(path)
        doc = json.loads(path.read_text(encoding="utf-8"))
        assert set(doc) == {"labels", "lambda", "W", "H"}

    def test_edge_csv(self, tmp_path):
        strengths = np.array([[0.0, 0.5], [0.0, 0.0]])
        W = threshold(strengths, 0.1)
        g = LeadGraph(("a", "b"), W, column_normalize(W), 0.1)
        path = tmp_path / "edges.csv"
        g.to_edge_csv(path)
        assert path.read_text(encoding="utf-8") == "from,to,weight\na,b,0.5\n"

    def test_invariants_enforced(self):
        with pytest.raises(ValidationError, match="diagonal"):
            LeadGraph(("a",), [[0.5]], [[1.0]], 0.1)
        W = np.array([[0.0, 0.05], [0.0, 0.0]])  # below the declared threshold
        with pytest.raises(ValidationError):
            LeadGraph(("a", "b"), W, column_normalize(W), 0.1)
        W = np.array([[0.0, 0.5], [0.0, 0.0]])
        with pytest.raises(ValidationError, match="sum"):
            LeadGraph(("a", "b"), W, [[0.0, 0.7], [0.0, 0.0]], 0.1)
