"""Command-line entry point: run experiments, verify numerics, inspect
configs.

Config files are flat `section.key = value` text, '#' comments allowed;
unknown keys are hard errors. Command-line --set overrides apply after the
file, last writer wins.
"""
import argparse
import os
import sys

import numpy as np

from . import environments, nets, pagerank, runner, seeding
from .graph import new_graph
from .policies import PRB, EENet
from .runner import ExperimentConfig


def _parse_bool(s):
    if s.lower() in ("true", "1", "yes"):
        return True
    if s.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_seeds(s):
    return tuple(int(part) for part in s.split(",") if part.strip() != "")


# key -> (config field, parser, constraint description or None, checker)
CONFIG_KEYS = {
    "env.kind": ("env_kind", str, "one of synthetic|recommendation|social|nodeclass",
                 lambda v: v in ("synthetic", "recommendation", "social", "nodeclass")),
    "env.n": ("env_n", int, ">= 2", lambda v: v >= 2),
    "env.d": ("env_d", int, ">= 1", lambda v: v >= 1),
    "env.k": ("env_k", int, ">= 2", lambda v: v >= 2),
    "env.hidden": ("env_hidden", str, "one of linear|quadratic",
                   lambda v: v in ("linear", "quadratic")),
    "env.edges": ("env_edges", str, None, None),
    "env.features": ("env_features", str, None, None),
    "env.labels": ("env_labels", str, None, None),
    "env.n_users": ("env_n_users", int, ">= 0", lambda v: v >= 0),
    "env.n_items": ("env_n_items", int, ">= 0", lambda v: v >= 0),
    "env.reveal_truth": ("env_reveal_truth", _parse_bool, None, None),
    "env.feature_seed": ("env_feature_seed", int, None, None),
    "policy.kind": ("policy_kind", str,
                    "one of prb|prb_greedy|eenet|neural_greedy|neural_ucb|neural_ts|random",
                    lambda v: v in ("prb", "prb_greedy", "eenet", "neural_greedy",
                                    "neural_ucb", "neural_ts", "random")),
    "policy.alpha": ("alpha", float, "in [0, 1)", lambda v: 0.0 <= v < 1.0),
    "policy.nu": ("nu", float, ">= 0", lambda v: v >= 0.0),
    "policy.lambda": ("lam", float, "> 0", lambda v: v > 0.0),
    "policy.grad_scale": ("grad_scale", float, "> 0", lambda v: v > 0.0),
    "policy.phi_norm": ("phi_norm", _parse_bool, None, None),
    "pagerank.epsilon": ("pr_epsilon", float, "> 0", lambda v: v > 0.0),
    "pagerank.max_iters": ("pr_max_iters", int, ">= 1", lambda v: v >= 1),
    "net.width": ("width", int, ">= 1", lambda v: v >= 1),
    "net.depth": ("depth", int, ">= 2", lambda v: v >= 2),
    "net.lr1": ("lr1", float, ">= 0", lambda v: v >= 0.0),
    "net.lr2": ("lr2", float, ">= 0", lambda v: v >= 0.0),
    "net.epochs": ("epochs", int, ">= 1", lambda v: v >= 1),
    "net.batch_size": ("batch_size", int, ">= 1", lambda v: v >= 1),
    "schedule.early": ("sched_early", int, ">= 1", lambda v: v >= 1),
    "schedule.switch": ("sched_switch", int, ">= 1", lambda v: v >= 1),
    "schedule.late": ("sched_late", int, ">= 1", lambda v: v >= 1),
    "run.T": ("T", int, ">= 1", lambda v: v >= 1),
    "run.seeds": ("seeds", _parse_seeds, "at least one seed", lambda v: len(v) >= 1),
    "run.output_dir": ("output_dir", str, None, None),
}


class ConfigError(ValueError):
    pass


def _apply(cfg_dict, key, raw, where):
    if key not in CONFIG_KEYS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    attr, parse, constraint, check = CONFIG_KEYS[key]
    try:
        value = parse(raw)
    except ValueError:
        raise ConfigError(f"{where}: bad value for {key}: {raw!r}")
    if check is not None and not check(value):
        raise ConfigError(f"{where}: {key} must be {constraint}, got {raw!r}")
    cfg_dict[attr] = value


def parse_config(path=None, overrides=()):
    """File (optional) then overrides, last writer wins per layer."""
    cfg_dict = {}
    if path is not None:
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                body = line.split("#", 1)[0].strip()
                if not body:
                    continue
                if "=" not in body:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, raw = (part.strip() for part in body.split("=", 1))
                _apply(cfg_dict, key, raw, f"{path}:{lineno}")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        key, raw = (part.strip() for part in item.split("=", 1))
        _apply(cfg_dict, key, raw, f"--set {item}")
    return ExperimentConfig(**cfg_dict)


def config_as_lines(cfg):
    lines = []
    for key, (attr, _, _, _) in CONFIG_KEYS.items():
        value = getattr(cfg, attr)
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key} = {value}")
    return lines


def cmd_run(args):
    cfg = parse_config(args.config, args.set or [])
    if args.out:
        cfg.output_dir = args.out
    env_seed = os.environ.get("PRB_SEED")
    if env_seed is not None:
        cfg.seeds = (int(env_seed),)
    os.makedirs(cfg.output_dir, exist_ok=True)
    logs, summary = runner.run_all(cfg)
    for log in logs:
        runner.write_run_csv(log, os.path.join(cfg.output_dir, f"run_{log.seed}.csv"))
    runner.write_summary_csv(summary, os.path.join(cfg.output_dir, "summary.csv"))
    print(f"{summary['policy']} on {summary['env']}: "
          f"final regret {summary['mean_final_regret']:.9g} "
          f"+/- {summary['std_final_regret']:.9g} "
          f"({summary['seeds']} seeds, T={summary['T']})")
    if summary["degenerate_sample"]:
        print("note: fewer than 2 successful seeds, std reported as 0")
    for seed, msg in summary["failures"]:
        print(f"seed {seed} FAILED: {msg}", file=sys.stderr)
    return 1 if summary["failures"] else 0


def cmd_inspect(args):
    cfg = parse_config(args.config, args.set or [])
    for line in config_as_lines(cfg):
        print(line)
    return 0


# ---------------------------------------------------------------------------
# verification suites


def _random_graph(rng, n, density):
    g = new_graph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                g.add_edge(u, v)
    return g


def _suite_pagerank():
    rng = np.random.default_rng(12345)
    worst = 0.0
    for _ in range(60):
        n = int(rng.integers(2, 65))
        g = _random_graph(rng, n, rng.random() * 0.3)
        h = rng.normal(size=n)
        for alpha in (0.0, 0.5, 0.85, 0.99):
            cfg = pagerank.PageRankConfig(alpha=alpha, epsilon=1e-8, max_iters=20_000)
            v, _ = pagerank.solve(g, h, cfg)
            exact = pagerank.solve_exact(g, h, alpha)
            worst = max(worst, float(np.abs(v - exact).max()))
    return worst <= 1e-5, f"max |solve - exact| = {worst:.3e} (limit 1e-5)"


def _suite_gradient():
    rng = np.random.default_rng(999)
    worst = 0.0
    for _ in range(30):
        depth = int(rng.integers(2, 4))
        width = int(rng.choice([4, 16]))
        d = int(rng.integers(2, 9))
        dims = [d] + [width] * (depth - 1) + [1]
        p = nets.init_mlp(dims, rng)
        x = rng.normal(size=d)
        x /= np.linalg.norm(x)
        analytic = nets.gradient(p, x)
        step = 1e-4
        flat = np.concatenate([w.ravel() for w in p.weights])
        fd = np.empty_like(flat)
        for j in range(len(flat)):
            up, dn = flat.copy(), flat.copy()
            up[j] += step
            dn[j] -= step
            fd[j] = (nets.forward(_unflatten(p, up), x)
                     - nets.forward(_unflatten(p, dn), x)) / (2 * step)
        scale = max(1.0, float(np.abs(analytic).max()))
        worst = max(worst, float(np.abs(analytic - fd).max() / scale))
    return worst <= 1e-3, f"max relative gradient error = {worst:.3e} (limit 1e-3)"


def _unflatten(p, flat):
    weights, at = [], 0
    for w in p.weights:
        weights.append(flat[at:at + w.size].reshape(w.shape))
        at += w.size
    return nets.MLPParams(p.layer_dims, weights)


def _suite_alpha0():
    base = dict(env_kind="synthetic", env_n=50, env_d=8, env_k=5,
                alpha=0.0, width=16, T=200, seeds=(3,))
    chosen = {}
    for kind in ("prb", "eenet"):
        cfg = ExperimentConfig(policy_kind=kind, **base)
        log = runner.run_one(cfg, 3)
        chosen[kind] = [row[1] for row in log.rounds]
    ok = chosen["prb"] == chosen["eenet"]
    diff = sum(a != b for a, b in zip(chosen["prb"], chosen["eenet"]))
    return ok, f"{diff} of 200 decisions differ (expected 0)"


def _demo_rec_env(seed):
    data_rng = np.random.default_rng(2024)
    n_users, n_items, per_user, d = 50, 200, 12, 8
    purchases = [set(data_rng.choice(n_items, size=per_user, replace=False).tolist())
                 for _ in range(n_users)]
    feats = environments.pseudo_features(n_items, d, 11)
    return environments.RecommendationEnv(purchases, feats, seeding.stream(seed, "env"))


def _suite_random_band():
    cfg = ExperimentConfig(env_kind="recommendation", policy_kind="random", T=2000)
    log = runner.run_one(cfg, 0, env=_demo_rec_env(0))
    final = log.final_cum_regret
    return 1740 <= final <= 1860, f"random-policy regret {final:.0f} (band [1740, 1860])"


SUITES = [
    ("pagerank-oracle", _suite_pagerank),
    ("gradient-finite-difference", _suite_gradient),
    ("alpha0-equivalence", _suite_alpha0),
    ("random-policy-band", _suite_random_band),
]


def cmd_verify(args):
    failures = 0
    for name, fn in SUITES:
        ok, detail = fn()
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1
    return 1 if failures else 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="prb", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_run = sub.add_parser("run", help="run an experiment and write CSVs")
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--set", action="append", metavar="key=value")
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(fn=cmd_run)

    p_verify = sub.add_parser("verify", help="run the built-in numeric suites")
    p_verify.set_defaults(fn=cmd_verify)

    p_inspect = sub.add_parser("inspect", help="print the resolved config")
    p_inspect.add_argument("--config", default=None)
    p_inspect.add_argument("--set", action="append", metavar="key=value")
    p_inspect.set_defaults(fn=cmd_inspect)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
