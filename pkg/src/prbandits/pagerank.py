"""Fixed point v = alpha*P*v + (1-alpha)*h on the evolving graph.

solve() is warm-started power iteration (geometric convergence at rate
alpha); solve_exact() is a dense direct solve used as the test oracle and
by the synthetic environment. P is applied exactly as D^-1 A acting on the
left of v, not the transposed classical-PageRank convention.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels

MAX_EXACT_N = 512


class SolverError(RuntimeError):
    """Power iteration failed to reach the residual target."""

    def __init__(self, residual, max_iters):
        super().__init__(
            f"no convergence within {max_iters} iterations (residual {residual:.3e})")
        self.residual = residual


@dataclass
class PageRankConfig:
    alpha: float = 0.85
    epsilon: float = 1e-6
    max_iters: int = 10_000

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must be in [0, 1), got {self.alpha}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


def solve(g, h, cfg, warm_start=None):
    """Iterate v <- alpha*P*v + (1-alpha)*h until ||v - alpha*P*v -
    (1-alpha)*h||_1 <= cfg.epsilon. Returns (v, iterations)."""
    h = np.ascontiguousarray(h, dtype=np.float64)
    if h.shape != (g.n,):
        raise ValueError(f"expected h of length {g.n}, got shape {h.shape}")
    if warm_start is None:
        v0 = (1.0 - cfg.alpha) * h
    else:
        v0 = np.ascontiguousarray(warm_start, dtype=np.float64)
        if v0.shape != (g.n,):
            raise ValueError(f"warm_start length {v0.shape} != {g.n}")
    indptr, indices, inv_deg = g.csr()
    v, iters, residual = kernels.power_iterate(
        indptr, indices, inv_deg, h, cfg.alpha, cfg.epsilon, cfg.max_iters, v0)
    if residual > cfg.epsilon:
        raise SolverError(residual, cfg.max_iters)
    return v, iters


def solve_exact(g, h, alpha):
    """Dense oracle: v = (1-alpha) * (I - alpha*P)^-1 h."""
    if g.n > MAX_EXACT_N:
        raise ValueError(f"dense oracle limited to n <= {MAX_EXACT_N}, got {g.n}")
    h = np.asarray(h, dtype=np.float64)
    if h.shape != (g.n,):
        raise ValueError(f"expected h of length {g.n}, got shape {h.shape}")
    P = dense_transition(g)
    return np.linalg.solve(np.eye(g.n) - alpha * P, (1.0 - alpha) * h)


def dense_transition(g):
    """Materialized D^-1 A; test/oracle use only."""
    P = np.zeros((g.n, g.n))
    for v in range(g.n):
        if g.degrees[v] > 0:
            P[v, sorted(g.adjacency[v])] = 1.0 / g.degrees[v]
    return P
