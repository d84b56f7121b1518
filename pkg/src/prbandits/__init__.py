"""PageRank bandits: online link prediction with neural
exploitation/exploration scores propagated over an evolving graph."""
from .graph import EvolvingGraph, new_graph
from .kernels import BACKEND
from .pagerank import PageRankConfig, SolverError, solve, solve_exact

__all__ = [
    "EvolvingGraph", "new_graph", "BACKEND",
    "PageRankConfig", "SolverError", "solve", "solve_exact",
]
