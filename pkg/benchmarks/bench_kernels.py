#!/usr/bin/env python3
"""Compare the compiled power-iteration kernel against the numpy fallback.

Runs the same warm-started solves on random graphs through both backends and
reports per-solve wall time plus the speedup. The compiled backend must be
installed for the comparison; otherwise only the numpy numbers are printed.
"""
import argparse
import time

import numpy as np

from prbandits import kernels, pagerank
from prbandits.graph import new_graph


def random_graph(rng, n, density):
    g = new_graph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                g.add_edge(u, v)
    return g


def bench(fn, cases, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for indptr, indices, inv_deg, h, alpha, eps, max_iters, v0 in cases:
            fn(indptr, indices, inv_deg, h, alpha, eps, max_iters, np.zeros_like(v0))
        best = min(best, time.perf_counter() - t0)
    return best / len(cases)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="100,300,1000,3000")
    ap.add_argument("--density", type=float, default=0.05)
    ap.add_argument("--alpha", type=float, default=0.85)
    ap.add_argument("--solves", type=int, default=20)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    have_cython = kernels.BACKEND == "cython"
    print(f"active backend: {kernels.BACKEND}")
    header = f"{'n':>6} {'nnz':>9} {'numpy (us)':>12}"
    if have_cython:
        header += f" {'cython (us)':>12} {'speedup':>8}"
    print(header)

    for n in (int(s) for s in args.sizes.split(",")):
        g = random_graph(rng, n, min(args.density, 30.0 / n))
        indptr, indices, inv_deg = g.csr()
        cases = []
        for _ in range(args.solves):
            h = rng.normal(size=n)
            cases.append((indptr, indices, inv_deg, h, args.alpha, 1e-6,
                          10_000, np.zeros(n)))
        t_np = bench(kernels._power_iterate_np, cases, args.repeats)
        row = f"{n:>6} {len(indices):>9} {t_np * 1e6:>12.1f}"
        if have_cython:
            t_cy = bench(kernels._prkernel.power_iterate, cases, args.repeats)
            row += f" {t_cy * 1e6:>12.1f} {t_np / t_cy:>7.2f}x"
        print(row)

        # both backends must land on the same fixed point
        if have_cython:
            for case in cases[:3]:
                v_np, _, _ = kernels._power_iterate_np(*case[:-1], np.zeros(n))
                v_cy, _, _ = kernels._prkernel.power_iterate(*case[:-1], np.zeros(n))
                err = float(np.abs(v_np - v_cy).max())
                cfg_bound = 1e-6 / (1.0 - args.alpha)
                assert err <= 2 * cfg_bound, f"backend mismatch {err:.3e}"


if __name__ == "__main__":
    main()
