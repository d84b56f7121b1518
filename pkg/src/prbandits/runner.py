"""T-round experiment driver: round -> decide -> reveal -> graph update ->
observe, per seed, with CSV output."""
import time
from dataclasses import dataclass, field

import numpy as np

from . import environments, pagerank, policies, seeding
from .graph import new_graph


@dataclass
class ExperimentConfig:
    # environment
    env_kind: str = "synthetic"   # synthetic | recommendation | social | nodeclass
    env_n: int = 300
    env_d: int = 20
    env_k: int = 20
    env_hidden: str = "linear"    # linear | quadratic
    env_edges: str = ""
    env_features: str = ""
    env_labels: str = ""
    env_n_users: int = 0          # 0 -> inferred from the edge file
    env_n_items: int = 0
    env_reveal_truth: bool = False
    env_feature_seed: int = 7     # pseudo-feature generator for raw graphs
    # policy
    policy_kind: str = "prb"
    alpha: float = 0.85
    nu: float = 0.01
    lam: float = 1.0
    grad_scale: float = 1.0
    phi_norm: bool = True
    # pagerank solver
    pr_epsilon: float = 1e-6
    pr_max_iters: int = 10_000
    # networks
    width: int = 100
    depth: int = 2
    lr1: float = 0.001
    lr2: float = 0.001
    epochs: int = 5
    batch_size: int = 32
    # training schedule
    sched_early: int = 50
    sched_switch: int = 2000
    sched_late: int = 100
    # run
    T: int = 2000
    seeds: tuple = tuple(range(10))
    output_dir: str = "results"

    def policy_config(self):
        return policies.PolicyConfig(
            alpha=self.alpha,
            pr_cfg=pagerank.PageRankConfig(
                alpha=self.alpha, epsilon=self.pr_epsilon, max_iters=self.pr_max_iters),
            nu=self.nu, lam=self.lam, grad_scale=self.grad_scale,
            phi_norm=self.phi_norm,
            width=self.width, depth=self.depth,
            lr1=self.lr1, lr2=self.lr2,
            epochs=self.epochs, batch_size=self.batch_size,
            schedule=policies.TrainSchedule(
                early=self.sched_early, switch=self.sched_switch, late=self.sched_late))


@dataclass
class RegretLog:
    seed: int
    rounds: list = field(default_factory=list)  # (t, chosen, reward, regret, cum, pr_iters)
    phase_seconds: dict = field(default_factory=lambda: {
        "scoring": 0.0, "solve": 0.0, "training": 0.0})

    @property
    def final_cum_regret(self):
        return self.rounds[-1][4]

    @property
    def cum_regrets(self):
        return np.array([r[4] for r in self.rounds])


def build_env(cfg, env_rng):
    kind = cfg.env_kind
    if kind == "synthetic":
        return environments.SyntheticEnv(
            cfg.env_n, cfg.env_d, cfg.env_k, cfg.alpha, env_rng, hidden=cfg.env_hidden)
    if kind == "recommendation":
        n_inferred, edges = environments.load_edge_list(cfg.env_edges)
        n_users = cfg.env_n_users or max(u for u, _ in edges) + 1
        n_items = cfg.env_n_items or max(i for _, i in edges) + 1
        purchases = environments.purchases_from_edges(n_users, n_items, edges)
        if cfg.env_features:
            n_f, _, feats = environments.load_features(cfg.env_features)
            if n_f != n_items:
                raise ValueError(f"feature rows {n_f} != item count {n_items}")
        else:
            feats = environments.pseudo_features(n_items, cfg.env_d, cfg.env_feature_seed)
        return environments.RecommendationEnv(purchases, feats, env_rng)
    if kind == "social":
        n, edges = environments.load_edge_list(cfg.env_edges)
        adj = environments.adjacency_from_edges(n, edges)
        if cfg.env_features:
            n_f, _, feats = environments.load_features(cfg.env_features)
            if n_f != n:
                raise ValueError(f"feature rows {n_f} != node count {n}")
        else:
            feats = environments.pseudo_features(n, cfg.env_d, cfg.env_feature_seed)
        return environments.SocialEnv(adj, feats, env_rng)
    if kind == "nodeclass":
        _, _, feats = environments.load_features(cfg.env_features)
        n_l, k, labels = environments.load_labels(cfg.env_labels)
        if n_l != feats.shape[0]:
            raise ValueError(f"label rows {n_l} != feature rows {feats.shape[0]}")
        return environments.NodeClassificationEnv(
            feats, labels, k, env_rng, reveal_truth=cfg.env_reveal_truth)
    raise ValueError(f"unknown environment {kind!r}")


def run_one(cfg, seed, env=None):
    """One fully deterministic T-round run. An in-memory environment can be
    injected for testing; it must have been built with this seed's env
    stream."""
    streams = seeding.all_streams(seed)
    if env is None:
        env = build_env(cfg, streams["env"])
    g = new_graph(env.n_graph)
    policy = policies.make_policy(cfg.policy_kind, env.context_dim,
                                  cfg.policy_config(), streams)
    log = RegretLog(seed=seed)
    cum = 0.0
    for t in range(1, cfg.T + 1):
        try:
            round_spec = env.next_round(g)
            t0 = time.perf_counter()
            decision = policy.decide(round_spec, g)
            decide_s = time.perf_counter() - t0
            outcome = env.reveal(round_spec, decision.chosen_index)
            if outcome.graph_delta is not None:
                g.add_edge(*outcome.graph_delta)
            train_s = policy.observe(round_spec, decision, outcome.reward, t)
        except Exception as exc:
            raise RuntimeError(f"run seed={seed} failed at round {t}: {exc}") from exc
        cum += outcome.regret
        chosen_node = int(round_spec.candidates[decision.chosen_index])
        log.rounds.append((t, chosen_node, outcome.reward, outcome.regret,
                           cum, decision.pr_iters))
        log.phase_seconds["scoring"] += decide_s - decision.solve_seconds
        log.phase_seconds["solve"] += decision.solve_seconds
        log.phase_seconds["training"] += train_s
    return log


def run_all(cfg):
    """Independent run per seed; returns (logs, summary). Failed seeds are
    reported and skipped in the summary."""
    logs, failures = [], []
    for seed in cfg.seeds:
        try:
            logs.append(run_one(cfg, seed))
        except RuntimeError as exc:
            failures.append((seed, str(exc)))
    finals = np.array([log.final_cum_regret for log in logs])
    summary = {
        "policy": cfg.policy_kind,
        "env": cfg.env_kind,
        "T": cfg.T,
        "seeds": len(logs),
        "mean_final_regret": float(finals.mean()) if len(finals) else float("nan"),
        "std_final_regret": float(finals.std(ddof=1)) if len(finals) > 1 else 0.0,
        "degenerate_sample": len(finals) < 2,
        "failures": failures,
    }
    return logs, summary


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{x:.9g}"


RUN_CSV_HEADER = "round,chosen,reward,regret,cum_regret,pr_iters"
SUMMARY_CSV_HEADER = "policy,env,T,seeds,mean_final_regret,std_final_regret"


def write_run_csv(log, path):
    with open(path, "w") as fh:
        fh.write(RUN_CSV_HEADER + "\n")
        for row in log.rounds:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_summary_csv(summary, path):
    with open(path, "w") as fh:
        fh.write(SUMMARY_CSV_HEADER + "\n")
        fh.write(",".join([
            summary["policy"], summary["env"], str(summary["T"]),
            str(summary["seeds"]),
            _fmt(summary["mean_final_regret"]),
            _fmt(summary["std_final_regret"])]) + "\n")
