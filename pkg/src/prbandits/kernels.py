"""Hot-loop kernels: sparse transition apply and the fused power iteration.

At import time the compiled Cython kernel (prbandits._prkernel) is selected
if present; otherwise the numpy fallback below is used. Both expose the same
two functions and satisfy the same convergence contract, so everything above
this module is backend-agnostic. BACKEND names the active one.
"""
import numpy as np

try:
    from . import _prkernel

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    _prkernel = None
    BACKEND = "numpy"


def _transition_apply_np(indptr, indices, inv_deg, x):
    # segment sums via prefix sums; empty rows come out exactly 0
    csum = np.concatenate(([0.0], np.cumsum(x[indices])))
    return inv_deg * (csum[indptr[1:]] - csum[indptr[:-1]])


def _power_iterate_np(indptr, indices, inv_deg, h, alpha, eps, max_iters, v0):
    # one update step maps v to F(v) = alpha*P*v + (1-alpha)*h, so
    # ||F(v) - v||_1 is exactly the fixed-point residual of v; the iterate
    # returned is the one whose residual was measured and passed
    v = v0.copy()
    for it in range(1, max_iters + 1):
        v_new = alpha * _transition_apply_np(indptr, indices, inv_deg, v) + (1.0 - alpha) * h
        delta = float(np.abs(v_new - v).sum())
        if delta <= eps:
            return v, it, delta
        v = v_new
    return v, max_iters, delta


if BACKEND == "cython":
    def transition_apply(indptr, indices, inv_deg, x):
        return _prkernel.transition_apply(indptr, indices, inv_deg, x)

    def power_iterate(indptr, indices, inv_deg, h, alpha, eps, max_iters, v0):
        return _prkernel.power_iterate(indptr, indices, inv_deg, h, alpha, eps, max_iters, v0)
else:
    transition_apply = _transition_apply_np
    power_iterate = _power_iterate_np
