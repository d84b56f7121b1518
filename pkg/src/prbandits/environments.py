"""Round generation and reward revelation.

Three file-backed online protocols (recommendation, social, node
classification) plus a synthetic environment whose per-candidate expected
rewards are the exact stationary vector of a hidden bounded score function,
making pseudo-regret exactly measurable.
"""
from dataclasses import dataclass

import numpy as np

from . import pagerank

NORM_TOL = 1e-6


@dataclass
class RoundSpec:
    serving: int
    candidates: np.ndarray   # k node ids, distinct, serving excluded
    contexts: np.ndarray     # (k, d) unit-norm rows
    hidden_positive: frozenset = None  # candidate indices that pay reward 1
    oracle_values: np.ndarray = None   # synthetic env: expected reward per candidate


@dataclass
class EnvOutcome:
    reward: int
    regret: float
    graph_delta: tuple = None  # (u, v) edge to insert, or None


def _unit_rows(X, what="row"):
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0):
        bad = int(np.flatnonzero(norms == 0)[0])
        raise ValueError(f"zero {what} {bad} cannot be unit-normalized")
    return X / norms[:, None]


class RecommendationEnv:
    """Bipartite purchases: each round serves a random user with 100
    candidate items, 10 of them the user's own purchases."""

    n_pos = 10
    k = 100

    def __init__(self, purchases, item_features, rng):
        self.purchases = [np.asarray(sorted(p), dtype=np.int64) for p in purchases]
        self.features = _unit_rows(np.asarray(item_features, dtype=np.float64),
                                   "item feature")
        self.n_users = len(purchases)
        self.n_items = self.features.shape[0]
        self.n_graph = self.n_users + self.n_items
        self.context_dim = self.features.shape[1]
        self.rng = rng
        self._eligible = [u for u, p in enumerate(self.purchases) if len(p) >= self.n_pos]
        if not self._eligible:
            raise ValueError(f"no user has >= {self.n_pos} purchases")

    def _item_node(self, item):
        return self.n_users + item

    def next_round(self, g=None):
        user = self._eligible[self.rng.integers(len(self._eligible))]
        owned = self.purchases[user]
        pos = self.rng.choice(owned, size=self.n_pos, replace=False)
        owned_set = set(owned.tolist())
        neg = []
        while len(neg) < self.k - self.n_pos:
            cand = int(self.rng.integers(self.n_items))
            if cand not in owned_set and cand not in neg:
                neg.append(cand)
        items = np.concatenate([pos, np.asarray(neg, dtype=np.int64)])
        order = self.rng.permutation(self.k)
        items = items[order]
        positive = frozenset(np.flatnonzero(order < self.n_pos).tolist())
        return RoundSpec(
            serving=user,
            candidates=self._item_node(items),
            contexts=self.features[items],
            hidden_positive=positive)

    def reveal(self, round_spec, chosen):
        if not 0 <= chosen < len(round_spec.candidates):
            raise IndexError(f"chosen index {chosen} out of range")
        hit = chosen in round_spec.hidden_positive
        delta = (round_spec.serving, int(round_spec.candidates[chosen])) if hit else None
        return EnvOutcome(reward=int(hit), regret=1.0 - int(hit), graph_delta=delta)


class SocialEnv(RecommendationEnv):
    """Ground-truth friendship graph kept private; the evolving graph starts
    empty and only gains correctly predicted edges."""

    def __init__(self, true_adjacency, features, rng):
        self.adj = [np.asarray(sorted(a), dtype=np.int64) for a in true_adjacency]
        self.features = np.asarray(features, dtype=np.float64)
        self.features = _unit_rows(self.features, "node feature")
        self.n = len(self.adj)
        self.n_graph = self.n
        self.context_dim = self.features.shape[1]
        self.rng = rng
        self._eligible = [v for v, a in enumerate(self.adj) if len(a) >= self.n_pos]
        if not self._eligible:
            raise ValueError(f"no node has >= {self.n_pos} neighbors")

    def next_round(self, g=None):
        serving = self._eligible[self.rng.integers(len(self._eligible))]
        neighbors = self.adj[serving]
        pos = self.rng.choice(neighbors, size=self.n_pos, replace=False)
        nbr_set = set(neighbors.tolist())
        neg = []
        while len(neg) < self.k - self.n_pos:
            cand = int(self.rng.integers(self.n))
            if cand != serving and cand not in nbr_set and cand not in neg:
                neg.append(cand)
        nodes = np.concatenate([pos, np.asarray(neg, dtype=np.int64)])
        order = self.rng.permutation(self.k)
        nodes = nodes[order]
        positive = frozenset(np.flatnonzero(order < self.n_pos).tolist())
        return RoundSpec(
            serving=serving,
            candidates=nodes,
            contexts=self.features[nodes],
            hidden_positive=positive)


class NodeClassificationEnv:
    """k-class node classification recast as link prediction against k
    supernodes. Candidate i's context is the serving node's feature placed
    in block i of a k*d vector, renormalized to unit length."""

    def __init__(self, features, labels, num_classes, rng, reveal_truth=False):
        self.features = _unit_rows(np.asarray(features, dtype=np.float64), "node feature")
        self.labels = np.asarray(labels, dtype=np.int64)
        if self.labels.min() < 0 or self.labels.max() >= num_classes:
            raise ValueError("labels must lie in [0, num_classes)")
        self.k = int(num_classes)
        self.n = self.features.shape[0]
        self.d = self.features.shape[1]
        self.n_graph = self.n + self.k
        self.context_dim = self.k * self.d
        self.rng = rng
        self.reveal_truth = reveal_truth

    def supernode(self, cls):
        return self.n + cls

    def next_round(self, g=None):
        serving = int(self.rng.integers(self.n))
        x = self.features[serving]
        contexts = np.zeros((self.k, self.k * self.d))
        for i in range(self.k):
            contexts[i, i * self.d:(i + 1) * self.d] = x
        contexts = _unit_rows(contexts, "block context")
        return RoundSpec(
            serving=serving,
            candidates=np.arange(self.n, self.n + self.k, dtype=np.int64),
            contexts=contexts,
            hidden_positive=frozenset([int(self.labels[serving])]))

    def reveal(self, round_spec, chosen):
        if not 0 <= chosen < self.k:
            raise IndexError(f"chosen index {chosen} out of range")
        hit = chosen in round_spec.hidden_positive
        if hit:
            delta = (round_spec.serving, self.supernode(chosen))
        elif self.reveal_truth:
            truth = next(iter(round_spec.hidden_positive))
            delta = (round_spec.serving, self.supernode(truth))
        else:
            delta = None
        return EnvOutcome(reward=int(hit), regret=1.0 - int(hit), graph_delta=delta)


class SyntheticEnv:
    """Oracle environment: expected reward of candidate i is v*[i] where
    v* = alpha*P*v* + (1-alpha)*y over the current graph and y is a hidden
    bounded function of the context. Pseudo-regret is exact by construction.

    Each node carries a fixed unit-norm context drawn once at construction;
    a round samples a serving node plus k candidate nodes and exposes the
    candidates' contexts.
    """

    def __init__(self, n, d, k, alpha, rng, hidden="linear"):
        if n > pagerank.MAX_EXACT_N:
            raise ValueError(
                f"synthetic env needs the dense oracle: n <= {pagerank.MAX_EXACT_N}")
        if not 0.0 <= alpha < 1.0:
            raise ValueError(f"alpha must be in [0, 1), got {alpha}")
        if k < 2 or k > n - 1:
            raise ValueError(f"need 2 <= k <= n-1, got k={k}, n={n}")
        self.n_graph = self.n = int(n)
        self.context_dim = self.d = int(d)
        self.k = int(k)
        self.alpha = float(alpha)
        self.rng = rng
        theta = rng.normal(size=d)
        self.theta_star = theta / np.linalg.norm(theta)
        if hidden == "linear":
            self.y = lambda X: (X @ self.theta_star + 1.0) / 2.0
        elif hidden == "quadratic":
            self.y = lambda X: (X @ self.theta_star) ** 2
        else:
            raise ValueError(f"unknown hidden function {hidden!r}")
        self.node_contexts = _unit_rows(rng.normal(size=(n, d)), "context")
        self.node_y = self.y(self.node_contexts)

    def next_round(self, g):
        serving = int(self.rng.integers(self.n))
        others = np.delete(np.arange(self.n), serving)
        candidates = self.rng.choice(others, size=self.k, replace=False)
        y_vec = np.zeros(self.n)
        y_vec[candidates] = self.node_y[candidates]
        v_star = pagerank.solve_exact(g, y_vec, self.alpha)
        return RoundSpec(
            serving=serving,
            candidates=candidates,
            contexts=self.node_contexts[candidates],
            oracle_values=v_star[candidates])

    def reveal(self, round_spec, chosen):
        v = round_spec.oracle_values
        if not 0 <= chosen < len(v):
            raise IndexError(f"chosen index {chosen} out of range")
        p = float(np.clip(v[chosen], 0.0, 1.0))
        reward = int(self.rng.random() < p)
        regret = float(v.max() - v[chosen])
        delta = (round_spec.serving, int(round_spec.candidates[chosen])) if reward else None
        return EnvOutcome(reward=reward, regret=regret, graph_delta=delta)


# ---------------------------------------------------------------------------
# dataset loading

def load_edge_list(path):
    """One 'u v' pair per line, 0-indexed; '#' comments and blank lines
    skipped. Returns (n, edges) with n = max id + 1."""
    edges = []
    top = -1
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v', got {body!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer node id in {body!r}")
            if u < 0 or v < 0:
                raise ValueError(f"{path}:{lineno}: negative node id")
            edges.append((u, v))
            top = max(top, u, v)
    return top + 1, edges


def load_features(path):
    """Header 'n d', then n lines of d reals; rows unit-normalized."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}:1: expected header 'n d'")
        n, d = int(header[0]), int(header[1])
        rows = np.empty((n, d))
        for i in range(n):
            parts = fh.readline().split()
            if len(parts) != d:
                raise ValueError(f"{path}:{i + 2}: expected {d} values, got {len(parts)}")
            rows[i] = [float(p) for p in parts]
    return n, d, _unit_rows(rows, "feature row")


def load_labels(path):
    """Header 'n k', then n integer class labels, one per line."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}:1: expected header 'n k'")
        n, k = int(header[0]), int(header[1])
        labels = np.empty(n, dtype=np.int64)
        for i in range(n):
            labels[i] = int(fh.readline())
    if labels.min() < 0 or labels.max() >= k:
        raise ValueError(f"{path}: label outside [0, {k})")
    return n, k, labels


def pseudo_features(n, d, seed):
    """Deterministic unit-norm per-node features for datasets without any:
    node v's row depends only on (seed, v)."""
    rows = np.empty((n, d))
    for v in range(n):
        rng = np.random.default_rng(np.random.SeedSequence((int(seed), v)))
        rows[v] = rng.normal(size=d)
    return _unit_rows(rows, "pseudo feature")


def adjacency_from_edges(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u >= n or v >= n:
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def purchases_from_edges(n_users, n_items, edges):
    """Bipartite 'user item' pairs -> per-user purchase lists."""
    purchases = [set() for _ in range(n_users)]
    for u, i in edges:
        if u >= n_users:
            raise ValueError(f"user id {u} out of range for n_users={n_users}")
        if i >= n_items:
            raise ValueError(f"item id {i} out of range for n_items={n_items}")
        purchases[u].add(i)
    return purchases
