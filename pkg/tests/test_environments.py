"""Round generation and reward revelation for all four environments, plus
the dataset loaders."""
import numpy as np
import pytest

from prbandits import environments, pagerank
from prbandits.environments import (EnvOutcome, NodeClassificationEnv,
                                    RecommendationEnv, SocialEnv,
                                    SyntheticEnv, adjacency_from_edges,
                                    load_edge_list, load_features,
                                    load_labels, pseudo_features,
                                    purchases_from_edges)
from prbandits.graph import new_graph


def _rec_env(seed=0, n_users=30, n_items=200, per_user=15, d=6):
    rng = np.random.default_rng(seed)
    purchases = [set(rng.choice(n_items, size=per_user, replace=False).tolist())
                 for _ in range(n_users)]
    features = rng.standard_normal((n_items, d))
    return RecommendationEnv(purchases, features, np.random.default_rng(seed + 1))


# ---------------------------------------------------------------------------
# recommendation


def test_recommendation_round_shape():
    env = _rec_env()
    spec = env.next_round()
    assert len(spec.candidates) == 100
    assert len(spec.hidden_positive) == 10
    assert spec.contexts.shape == (100, 6)
    np.testing.assert_allclose(np.linalg.norm(spec.contexts, axis=1), np.ones(100))


def test_recommendation_positives_are_owned_items():
    env = _rec_env()
    for _ in range(10):
        spec = env.next_round()
        user = spec.serving
        owned = set(env.purchases[user].tolist())
        for idx in range(100):
            item = int(spec.candidates[idx]) - env.n_users
            assert (item in owned) == (idx in spec.hidden_positive) or item in owned
        # every hidden positive really is owned; negatives never are
        for idx in spec.hidden_positive:
            assert int(spec.candidates[idx]) - env.n_users in owned
        for idx in set(range(100)) - spec.hidden_positive:
            assert int(spec.candidates[idx]) - env.n_users not in owned


def test_recommendation_candidate_nodes_live_in_item_range():
    env = _rec_env()
    spec = env.next_round()
    assert np.all(spec.candidates >= env.n_users)
    assert np.all(spec.candidates < env.n_users + env.n_items)


def test_recommendation_determinism():
    a, b = _rec_env(seed=5), _rec_env(seed=5)
    for _ in range(5):
        sa, sb = a.next_round(), b.next_round()
        assert sa.serving == sb.serving
        np.testing.assert_array_equal(sa.candidates, sb.candidates)
        assert sa.hidden_positive == sb.hidden_positive


def test_recommendation_reveal_semantics():
    env = _rec_env()
    spec = env.next_round()
    hit = next(iter(spec.hidden_positive))
    out = env.reveal(spec, hit)
    assert out == EnvOutcome(reward=1, regret=0.0,
                             graph_delta=(spec.serving, int(spec.candidates[hit])))
    miss = next(iter(set(range(100)) - spec.hidden_positive))
    out = env.reveal(spec, miss)
    assert out.reward == 0 and out.regret == 1.0 and out.graph_delta is None
    with pytest.raises(IndexError):
        env.reveal(spec, 100)


def test_recommendation_requires_a_rich_enough_user():
    rng = np.random.default_rng(1)
    purchases = [set(range(5)) for _ in range(4)]  # everyone below 10 purchases
    with pytest.raises(ValueError):
        RecommendationEnv(purchases, rng.standard_normal((50, 4)), rng)


# ---------------------------------------------------------------------------
# social


def _social_env(seed=0, n=150, d=5):
    rng = np.random.default_rng(seed)
    adj = [set() for _ in range(n)]
    # ring plus chords guarantees everyone at least 10 neighbors
    for v in range(n):
        for step in range(1, 6):
            u = (v + step) % n
            adj[v].add(u)
            adj[u].add(v)
    feats = rng.standard_normal((n, d))
    return SocialEnv(adj, feats, np.random.default_rng(seed + 1))


def test_social_round_shape_and_positives_are_true_neighbors():
    env = _social_env()
    spec = env.next_round()
    assert len(spec.candidates) == 100
    assert len(spec.hidden_positive) == 10
    neighbors = set(env.adj[spec.serving].tolist())
    for idx in spec.hidden_positive:
        assert int(spec.candidates[idx]) in neighbors


def test_social_reward_inserts_predicted_edge():
    env = _social_env()
    spec = env.next_round()
    hit = next(iter(spec.hidden_positive))
    out = env.reveal(spec, hit)
    assert out.graph_delta == (spec.serving, int(spec.candidates[hit]))


def test_social_candidates_exclude_serving_node():
    env = _social_env()
    for _ in range(5):
        spec = env.next_round()
        assert spec.serving not in set(spec.candidates.tolist())


# ---------------------------------------------------------------------------
# node classification


def _nodeclass_env(reveal_truth=False, seed=0, n=40, d=4, k=3):
    rng = np.random.default_rng(seed)
    feats = rng.standard_normal((n, d))
    labels = rng.integers(k, size=n)
    return NodeClassificationEnv(feats, labels, k, np.random.default_rng(seed + 1),
                                 reveal_truth=reveal_truth)


def test_nodeclass_contexts_are_single_block():
    env = _nodeclass_env()
    spec = env.next_round()
    assert spec.contexts.shape == (3, 12)
    for i in range(3):
        block = spec.contexts[i, i * 4:(i + 1) * 4]
        rest = np.delete(spec.contexts[i], np.arange(i * 4, (i + 1) * 4))
        assert np.linalg.norm(block) == pytest.approx(1.0)
        np.testing.assert_array_equal(rest, np.zeros(8))
        # the block is the serving node's feature up to one positive scalar
        x = env.features[spec.serving]
        np.testing.assert_allclose(block / np.linalg.norm(block), x, atol=1e-12)


def test_nodeclass_candidates_are_the_supernodes():
    env = _nodeclass_env()
    spec = env.next_round()
    np.testing.assert_array_equal(spec.candidates, [40, 41, 42])
    assert env.n_graph == 43


def test_nodeclass_reveal_default_keeps_graph_on_failure():
    env = _nodeclass_env()
    spec = env.next_round()
    truth = next(iter(spec.hidden_positive))
    wrong = (truth + 1) % 3
    assert env.reveal(spec, truth) == EnvOutcome(
        reward=1, regret=0.0, graph_delta=(spec.serving, env.supernode(truth)))
    out = env.reveal(spec, wrong)
    assert out.reward == 0 and out.regret == 1.0 and out.graph_delta is None


def test_nodeclass_reveal_truth_flag_adds_true_edge_on_failure():
    env = _nodeclass_env(reveal_truth=True)
    spec = env.next_round()
    truth = next(iter(spec.hidden_positive))
    wrong = (truth + 1) % 3
    out = env.reveal(spec, wrong)
    assert out.reward == 0
    assert out.graph_delta == (spec.serving, env.supernode(truth))


def test_nodeclass_rejects_out_of_range_labels():
    rng = np.random.default_rng(2)
    with pytest.raises(ValueError):
        NodeClassificationEnv(rng.standard_normal((5, 3)), [0, 1, 2, 3, 1], 3, rng)


# ---------------------------------------------------------------------------
# synthetic


def _synth(seed=0, n=25, d=6, k=5, alpha=0.85, hidden="linear"):
    return SyntheticEnv(n, d, k, alpha, np.random.default_rng(seed), hidden=hidden)


def test_synthetic_contexts_are_fixed_per_node():
    env = _synth()
    g = new_graph(env.n)
    seen = {}
    for _ in range(30):
        spec = env.next_round(g)
        np.testing.assert_allclose(np.linalg.norm(spec.contexts, axis=1),
                                   np.ones(env.k))
        for idx, node in enumerate(spec.candidates.tolist()):
            if node in seen:
                np.testing.assert_array_equal(spec.contexts[idx], seen[node])
            seen[node] = spec.contexts[idx]


def test_synthetic_oracle_values_match_dense_solve():
    env = _synth()
    g = new_graph(env.n)
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    spec = env.next_round(g)
    y = np.zeros(env.n)
    y[spec.candidates] = env.node_y[spec.candidates]
    v = pagerank.solve_exact(g, y, env.alpha)
    np.testing.assert_allclose(spec.oracle_values, v[spec.candidates])


def test_synthetic_regret_nonneg_and_zero_iff_argmax():
    env = _synth(seed=3)
    g = new_graph(env.n)
    for _ in range(20):
        spec = env.next_round(g)
        best = int(np.argmax(spec.oracle_values))
        for chosen in range(env.k):
            out = env.reveal(spec, chosen)
            assert out.regret >= 0.0
            if chosen == best:
                assert out.regret == 0.0
            else:
                assert (out.regret == 0.0) == (
                    spec.oracle_values[chosen] == spec.oracle_values[best])
        out = env.reveal(spec, best)
        if out.reward:
            g.add_edge(*out.graph_delta)


def test_synthetic_alpha_zero_oracle_is_hidden_function():
    env = _synth(alpha=0.0)
    g = new_graph(env.n)
    spec = env.next_round(g)
    np.testing.assert_allclose(spec.oracle_values, env.node_y[spec.candidates])


def test_synthetic_empty_graph_scales_hidden_function():
    env = _synth(alpha=0.85)
    spec = env.next_round(new_graph(env.n))
    np.testing.assert_allclose(spec.oracle_values,
                               0.15 * env.node_y[spec.candidates], atol=1e-12)


def test_synthetic_hidden_function_bounds():
    lin = _synth(hidden="linear")
    assert np.all(lin.node_y >= 0.0) and np.all(lin.node_y <= 1.0)
    quad = _synth(hidden="quadratic")
    assert np.all(quad.node_y >= 0.0) and np.all(quad.node_y <= 1.0)


def test_synthetic_reward_is_bernoulli_of_clamped_oracle():
    env = _synth(seed=9)
    g = new_graph(env.n)
    spec = env.next_round(g)
    rewards = {env.reveal(spec, 0).reward for _ in range(50)}
    assert rewards <= {0, 1}


def test_synthetic_configuration_errors():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        SyntheticEnv(pagerank.MAX_EXACT_N + 1, 4, 3, 0.85, rng)
    with pytest.raises(ValueError):
        SyntheticEnv(20, 4, 1, 0.85, rng)      # k too small
    with pytest.raises(ValueError):
        SyntheticEnv(20, 4, 20, 0.85, rng)     # k == n
    with pytest.raises(ValueError):
        SyntheticEnv(20, 4, 5, 1.0, rng)       # alpha at the excluded limit
    with pytest.raises(ValueError):
        SyntheticEnv(20, 4, 5, 0.85, rng, hidden="cubic")


def test_synthetic_reveal_range_check():
    env = _synth()
    spec = env.next_round(new_graph(env.n))
    with pytest.raises(IndexError):
        env.reveal(spec, env.k)


# ---------------------------------------------------------------------------
# loaders


def test_load_edge_list(tmp_path):
    p = tmp_path / "edges.txt"
    p.write_text("# comment\n0 1\n2 4  # trailing\n\n1 2\n")
    n, edges = load_edge_list(p)
    assert n == 5
    assert edges == [(0, 1), (2, 4), (1, 2)]


def test_load_edge_list_reports_line_numbers(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("0 1\n0 1 2\n")
    with pytest.raises(ValueError, match=":2:"):
        load_edge_list(p)
    p.write_text("0 x\n")
    with pytest.raises(ValueError, match=":1:"):
        load_edge_list(p)
    p.write_text("0 -2\n")
    with pytest.raises(ValueError, match="negative"):
        load_edge_list(p)


def test_load_features(tmp_path):
    p = tmp_path / "feats.txt"
    p.write_text("2 3\n1 0 0\n3 4 0\n")
    n, d, feats = load_features(p)
    assert (n, d) == (2, 3)
    np.testing.assert_allclose(feats, [[1, 0, 0], [0.6, 0.8, 0]])


def test_load_features_errors(tmp_path):
    p = tmp_path / "feats.txt"
    p.write_text("2\n1 0\n")
    with pytest.raises(ValueError, match=":1:"):
        load_features(p)
    p.write_text("1 3\n1 0\n")
    with pytest.raises(ValueError, match=":2:"):
        load_features(p)


def test_load_labels(tmp_path):
    p = tmp_path / "labels.txt"
    p.write_text("4 3\n0\n2\n1\n0\n")
    n, k, labels = load_labels(p)
    assert (n, k) == (4, 3)
    np.testing.assert_array_equal(labels, [0, 2, 1, 0])
    p.write_text("2 2\n0\n5\n")
    with pytest.raises(ValueError, match="label outside"):
        load_labels(p)


def test_pseudo_features_deterministic_and_unit_norm():
    a = pseudo_features(6, 4, seed=7)
    b = pseudo_features(6, 4, seed=7)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_allclose(np.linalg.norm(a, axis=1), np.ones(6))
    # a node's row depends only on (seed, node id), not on n
    c = pseudo_features(3, 4, seed=7)
    np.testing.assert_array_equal(a[:3], c)
    assert not np.array_equal(a, pseudo_features(6, 4, seed=8))


def test_adjacency_and_purchases_range_checks():
    with pytest.raises(ValueError):
        adjacency_from_edges(3, [(0, 5)])
    with pytest.raises(ValueError):
        purchases_from_edges(2, 4, [(2, 0)])
    with pytest.raises(ValueError):
        purchases_from_edges(2, 4, [(0, 4)])
    purchases = purchases_from_edges(2, 4, [(0, 1), (0, 1), (1, 3)])
    assert purchases == [{1}, {3}]


def test_unit_rows_rejects_zero_rows():
    with pytest.raises(ValueError, match="zero"):
        environments._unit_rows(np.array([[1.0, 0.0], [0.0, 0.0]]))
