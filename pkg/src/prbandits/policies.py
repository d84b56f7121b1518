"""Decision policies: PageRank-fused bandits and neural baselines.

All policies share the same pattern: score the k candidates, pick an argmax
(ties broken uniformly at random), then log the outcome and retrain the
networks at schedule checkpoints. The PageRank-fused policies additionally
push the candidate scores through the fixed point v = alpha*P*v +
(1-alpha)*h on the evolving graph and argmax over v instead.
"""
import time
from dataclasses import dataclass, field

import numpy as np

from . import nets, pagerank


@dataclass
class TrainSchedule:
    """Checkpointed retraining: every `early` rounds while t < switch,
    every `late` rounds afterwards."""
    early: int = 50
    switch: int = 2000
    late: int = 100

    def is_checkpoint(self, t):
        period = self.early if t < self.switch else self.late
        return t % period == 0


@dataclass
class PolicyConfig:
    alpha: float = 0.85
    pr_cfg: pagerank.PageRankConfig = field(default_factory=pagerank.PageRankConfig)
    nu: float = 0.01
    lam: float = 1.0
    grad_scale: float = 1.0  # scale on squared gradients entering z_diag
    phi_norm: bool = True    # feed f2 unit-normalized gradient features
    width: int = 100
    depth: int = 2
    lr1: float = 0.001  # grid used in tuning: {0.01, 0.001, 0.0005, 0.0001}
    lr2: float = 0.001
    epochs: int = 5
    batch_size: int = 32
    schedule: TrainSchedule = field(default_factory=TrainSchedule)
    # nu grid {0.001, 0.01, 0.1, 1}, lambda grid {0.01, 0.1, 1}


@dataclass
class Decision:
    chosen_index: int
    scores: np.ndarray      # final decision values per candidate
    h_snapshot: np.ndarray  # exploitation(+exploration) scores per candidate
    pr_iters: int = 0
    solve_seconds: float = 0.0
    # decision-time snapshots consumed by observe()
    f1_values: np.ndarray = None
    phi: np.ndarray = None  # per-candidate gradient features, (k, p)


def argmax_tiebreak(scores, rng):
    """Argmax with uniform random tie-breaking; draws from rng only on ties
    so policies with identical score streams consume rng identically."""
    top = np.flatnonzero(scores == scores.max())
    if len(top) == 1:
        return int(top[0])
    return int(top[rng.integers(len(top))])


def _net_dims(d_in, width, depth):
    return [d_in] + [width] * (depth - 1) + [1]


class NeuralPolicy:
    """Shared state: exploitation net f1, optional exploration net f2 over
    gradient features, optional diagonal confidence accumulator."""

    has_f2 = False
    has_zdiag = False
    uses_graph = False

    def __init__(self, context_dim, cfg, f1_rng, f2_rng, tie_rng, ts_rng, train_rng):
        self.cfg = cfg
        self.tie_rng = tie_rng
        self.ts_rng = ts_rng
        self.train_rng = train_rng
        dims1 = _net_dims(context_dim, cfg.width, cfg.depth)
        self.f1 = nets.init_mlp(dims1, f1_rng)
        self.opt1 = nets.OptimizerState(kind="sgd", learning_rate=cfg.lr1)
        self.buf1 = nets.TrainBuffer(context_dim)
        if self.has_f2:
            dims2 = _net_dims(self.f1.num_params, cfg.width, cfg.depth)
            self.f2 = nets.init_mlp(dims2, f2_rng)
            # exploration starts at the additive identity: f2's output layer
            # is zeroed so early decisions are pure exploitation and the
            # correction grows only out of observed residuals
            self.f2.weights[-1][:] = 0.0
            self.opt2 = nets.OptimizerState(kind="adam", learning_rate=cfg.lr2)
            # raw (context, reward) pairs; gradient features and residual
            # targets are recomputed against the current f1 at each
            # training checkpoint
            self.buf2 = nets.TrainBuffer(context_dim)
        if self.has_zdiag:
            self.z_diag = np.full(self.f1.num_params, cfg.lam)

    def _phi_features(self, phi):
        """Gradient features as fed to f2 (unit L2 rows when phi_norm)."""
        if not self.cfg.phi_norm:
            return phi
        norms = np.linalg.norm(phi, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return phi / norms

    def exploit_explore_scores(self, contexts):
        """(scores, f1_values, phi): f1 + f2-on-gradient per candidate, or
        plain f1 when the policy has no exploration net."""
        f1_vals = nets.forward_batch(self.f1, contexts)
        if not self.has_f2:
            return f1_vals, f1_vals, None
        phi = nets.gradient_batch(self.f1, contexts)
        scores = f1_vals + nets.forward_batch(self.f2, self._phi_features(phi))
        return scores, f1_vals, phi

    def decide(self, round_spec, g=None):
        raise NotImplementedError

    def observe(self, round_spec, decision, reward, t):
        """Log the outcome and retrain at schedule checkpoints. Returns
        seconds spent training."""
        i = decision.chosen_index
        x = round_spec.contexts[i]
        self.buf1.append(x, reward)
        if self.has_f2:
            self.buf2.append(x, reward)
        if self.has_zdiag:
            grad = decision.phi[i] if decision.phi is not None \
                else nets.gradient(self.f1, x)
            self.z_diag += self.cfg.grad_scale * grad * grad
        if not self.cfg.schedule.is_checkpoint(t):
            return 0.0
        t0 = time.perf_counter()
        nets.train(self.f1, self.opt1, self.buf1, self.cfg.epochs,
                   self.cfg.batch_size, seed=self.train_rng.integers(2**63))
        if self.has_f2:
            # build f2's training set against the freshly trained f1, so the
            # residual targets track the current exploitation error instead
            # of the error frozen at decision time
            X, r = self.buf2.as_arrays()
            f1_vals = nets.forward_batch(self.f1, X)
            feats = self._phi_features(nets.gradient_batch(self.f1, X))
            resid_buf = nets.TrainBuffer(self.f1.num_params)
            resid_buf.inputs = list(feats)
            resid_buf.targets = list(r - f1_vals)
            nets.train(self.f2, self.opt2, resid_buf, self.cfg.epochs,
                       self.cfg.batch_size, seed=self.train_rng.integers(2**63))
        return time.perf_counter() - t0


class NeuralGreedy(NeuralPolicy):
    def decide(self, round_spec, g=None):
        scores, f1_vals, phi = self.exploit_explore_scores(round_spec.contexts)
        chosen = argmax_tiebreak(scores, self.tie_rng)
        return Decision(chosen, scores, scores, f1_values=f1_vals, phi=phi)


class EENet(NeuralPolicy):
    has_f2 = True
    decide = NeuralGreedy.decide


class NeuralUCB(NeuralPolicy):
    has_zdiag = True

    def decide(self, round_spec, g=None):
        f1_vals = nets.forward_batch(self.f1, round_spec.contexts)
        phi = nets.gradient_batch(self.f1, round_spec.contexts)
        width2 = self.cfg.grad_scale * (phi * phi) @ (1.0 / self.z_diag)
        scores = f1_vals + self.cfg.nu * np.sqrt(width2)
        chosen = argmax_tiebreak(scores, self.tie_rng)
        return Decision(chosen, scores, scores, f1_values=f1_vals, phi=phi)


class NeuralTS(NeuralPolicy):
    has_zdiag = True

    def decide(self, round_spec, g=None):
        f1_vals = nets.forward_batch(self.f1, round_spec.contexts)
        phi = nets.gradient_batch(self.f1, round_spec.contexts)
        var = self.cfg.nu ** 2 * (self.cfg.grad_scale * (phi * phi) @ (1.0 / self.z_diag))
        scores = self.ts_rng.normal(f1_vals, np.sqrt(var))
        chosen = argmax_tiebreak(scores, self.tie_rng)
        return Decision(chosen, scores, scores, f1_values=f1_vals, phi=phi)


class _PageRankMixin:
    """Argmax over the stationary vector seeded with the candidate scores;
    warm-started from the previous round's solution."""

    uses_graph = True
    _warm = None

    def decide(self, round_spec, g=None):
        if g is None:
            raise ValueError("PageRank policies need the current graph")
        h_cand, f1_vals, phi = self.exploit_explore_scores(round_spec.contexts)
        h = np.zeros(g.n)
        h[round_spec.candidates] = h_cand
        cfg = pagerank.PageRankConfig(
            alpha=self.cfg.alpha,
            epsilon=self.cfg.pr_cfg.epsilon,
            max_iters=self.cfg.pr_cfg.max_iters)
        t0 = time.perf_counter()
        v, iters = pagerank.solve(g, h, cfg, warm_start=self._warm)
        solve_s = time.perf_counter() - t0
        self._warm = v
        v_cand = v[round_spec.candidates]
        chosen = argmax_tiebreak(v_cand, self.tie_rng)
        return Decision(chosen, v_cand, h_cand, pr_iters=iters,
                        solve_seconds=solve_s, f1_values=f1_vals, phi=phi)


class PRB(_PageRankMixin, NeuralPolicy):
    has_f2 = True


class PRBGreedy(_PageRankMixin, NeuralPolicy):
    pass


class RandomPolicy(NeuralPolicy):
    """Uniform-random baseline; keeps no networks worth training."""

    def __init__(self, context_dim, cfg, f1_rng, f2_rng, tie_rng, ts_rng, train_rng):
        self.cfg = cfg
        self.tie_rng = tie_rng

    def decide(self, round_spec, g=None):
        k = len(round_spec.candidates)
        chosen = int(self.tie_rng.integers(k))
        scores = np.zeros(k)
        return Decision(chosen, scores, scores)

    def observe(self, round_spec, decision, reward, t):
        return 0.0


POLICIES = {
    "prb": PRB,
    "prb_greedy": PRBGreedy,
    "eenet": EENet,
    "neural_greedy": NeuralGreedy,
    "neural_ucb": NeuralUCB,
    "neural_ts": NeuralTS,
    "random": RandomPolicy,
}


def make_policy(kind, context_dim, cfg, rngs):
    if kind not in POLICIES:
        raise ValueError(f"unknown policy {kind!r}; options: {sorted(POLICIES)}")
    return POLICIES[kind](context_dim, cfg, rngs["f1"], rngs["f2"],
                          rngs["tie"], rngs["ts"], rngs["train"])
