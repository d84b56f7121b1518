"""Evolving undirected graph with a row-normalized transition operator."""
import numpy as np

from . import kernels


class EvolvingGraph:
    """Simple undirected graph over a fixed node set that grows one edge at
    a time. Keeps a CSR view of the adjacency for the transition operator
    P = D^-1 A; the view is rebuilt lazily after mutations.
    """

    def __init__(self, n):
        if n < 1:
            raise ValueError(f"graph needs at least one node, got n={n}")
        self.n = int(n)
        self.adjacency = [set() for _ in range(self.n)]
        self.degrees = np.zeros(self.n, dtype=np.int64)
        self._csr = None

    def add_edge(self, u, v):
        """Insert the undirected edge (u, v). Re-inserting is a no-op so
        degrees never double-count."""
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) rejected")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
        if v in self.adjacency[u]:
            return
        self.adjacency[u].add(v)
        self.adjacency[v].add(u)
        self.degrees[u] += 1
        self.degrees[v] += 1
        self._csr = None

    def num_edges(self):
        return int(self.degrees.sum()) // 2

    def csr(self):
        """(indptr, indices, inv_deg) arrays; neighbor ids sorted per row.
        Zero-degree rows get inv_deg 0 (their P row is all zeros)."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(self.degrees, out=indptr[1:])
            indices = np.empty(indptr[-1], dtype=np.int64)
            for v in range(self.n):
                indices[indptr[v]:indptr[v + 1]] = sorted(self.adjacency[v])
            inv_deg = np.zeros(self.n)
            nz = self.degrees > 0
            inv_deg[nz] = 1.0 / self.degrees[nz]
            self._csr = (indptr, indices, inv_deg)
        return self._csr

    def transition_apply(self, x):
        """Return P @ x without materializing P; O(edges)."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got shape {x.shape}")
        indptr, indices, inv_deg = self.csr()
        return kernels.transition_apply(indptr, indices, inv_deg, x)

    def __eq__(self, other):
        if not isinstance(other, EvolvingGraph):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def __repr__(self):
        return f"EvolvingGraph(n={self.n}, edges={self.num_edges()})"


def new_graph(n):
    return EvolvingGraph(n)
