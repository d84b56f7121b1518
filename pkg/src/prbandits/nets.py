"""Fully-connected scorers with analytic gradients.

Architecture: f(x) = W_L relu(W_{L-1} ... relu(W_1 x)), no biases.
Initialization: hidden-layer entries ~ N(0, 2/m), output layer ~ N(0, 1/m)
where m is the width. gradient() returns the flat per-parameter derivative
of the output, layer-major (W_1 row-major first, then W_2, ...); it doubles
as the exploration feature phi(x).
"""
import struct
from dataclasses import dataclass, field

import numpy as np


class MLPParams:
    def __init__(self, layer_dims, weights):
        if len(layer_dims) < 3:
            raise ValueError("need at least one hidden layer: [d, m, ..., 1]")
        if layer_dims[-1] != 1:
            raise ValueError(f"output dimension must be 1, got {layer_dims[-1]}")
        self.layer_dims = list(layer_dims)
        self.weights = weights
        for l, w in enumerate(weights):
            expect = (layer_dims[l + 1], layer_dims[l])
            if w.shape != expect:
                raise ValueError(f"layer {l}: expected shape {expect}, got {w.shape}")

    @property
    def num_params(self):
        return sum(w.size for w in self.weights)

    def copy(self):
        return MLPParams(self.layer_dims, [w.copy() for w in self.weights])


def init_mlp(layer_dims, seed):
    """Seed-deterministic Gaussian init; seed may be an int or a Generator."""
    rng = np.random.default_rng(seed)
    weights = []
    for l in range(len(layer_dims) - 1):
        rows, cols = layer_dims[l + 1], layer_dims[l]
        # hidden entries ~ N(0, 2/m), output entries ~ N(0, 1/m), with m the
        # layer's width: rows for hidden layers, cols for the 1-row output
        var = 1.0 / cols if l == len(layer_dims) - 2 else 2.0 / rows
        weights.append(rng.normal(0.0, np.sqrt(var), size=(rows, cols)))
    return MLPParams(layer_dims, weights)


def _forward_acts(p, X):
    """Activations for a batch X (B, d): returns (acts, preacts)."""
    acts = [X]
    a = X
    for w in p.weights[:-1]:
        z = a @ w.T
        a = np.maximum(z, 0.0)
        acts.append(a)
    out = a @ p.weights[-1].T
    return acts, out[:, 0]


def forward(p, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (p.layer_dims[0],):
        raise ValueError(f"expected input of length {p.layer_dims[0]}, got {x.shape}")
    return float(_forward_acts(p, x[None, :])[1][0])


def forward_batch(p, X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != p.layer_dims[0]:
        raise ValueError(f"expected (B, {p.layer_dims[0]}) inputs, got {X.shape}")
    return _forward_acts(p, X)[1]


def gradient_batch(p, X):
    """Per-sample d f / d theta, shape (B, num_params)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != p.layer_dims[0]:
        raise ValueError(f"expected (B, {p.layer_dims[0]}) inputs, got {X.shape}")
    acts, _ = _forward_acts(p, X)
    B = X.shape[0]
    n_layers = len(p.weights)
    pieces = [None] * n_layers
    # output layer: d out / d W_L = last hidden activation
    pieces[-1] = acts[-1]
    delta = np.broadcast_to(p.weights[-1][0], (B, p.weights[-1].shape[1])).copy()
    for l in range(n_layers - 2, -1, -1):
        delta = delta * (acts[l + 1] > 0)
        pieces[l] = np.einsum("bi,bj->bij", delta, acts[l]).reshape(B, -1)
        if l > 0:
            delta = delta @ p.weights[l]
    return np.concatenate(pieces, axis=1)


def gradient(p, x):
    return gradient_batch(p, np.asarray(x, dtype=np.float64)[None, :])[0]


@dataclass
class OptimizerState:
    kind: str = "sgd"  # "sgd" | "adam"
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("sgd", "adam"):
            raise ValueError(f"unknown optimizer kind {self.kind!r}")

    def apply(self, params, grads):
        """One step on per-layer loss gradients; mutates params in place."""
        if self.kind == "sgd":
            for w, g in zip(params.weights, grads):
                w -= self.learning_rate * g
            return
        if not self.m:
            self.m = [np.zeros_like(w) for w in params.weights]
            self.v = [np.zeros_like(w) for w in params.weights]
        self.step_count += 1
        c1 = 1.0 - self.beta1 ** self.step_count
        c2 = 1.0 - self.beta2 ** self.step_count
        for w, g, m, v in zip(params.weights, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            w -= self.learning_rate * (m / c1) / (np.sqrt(v / c2) + self.eps)


class TrainBuffer:
    """Accumulated (input, scalar target) pairs."""

    def __init__(self, dim):
        self.dim = dim
        self.inputs = []
        self.targets = []

    def append(self, x, target):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise ValueError(f"expected input of length {self.dim}, got {x.shape}")
        self.inputs.append(x)
        self.targets.append(float(target))

    def __len__(self):
        return len(self.inputs)

    def as_arrays(self):
        return np.asarray(self.inputs), np.asarray(self.targets)


def _loss_grads(p, X, y):
    """Per-layer gradients of mean_b (f(x_b) - y_b)^2 / 2."""
    acts, out = _forward_acts(p, X)
    coef = (out - y) / X.shape[0]
    n_layers = len(p.weights)
    grads = [None] * n_layers
    grads[-1] = (coef @ acts[-1])[None, :]
    delta = coef[:, None] * p.weights[-1][0]
    for l in range(n_layers - 2, -1, -1):
        delta = delta * (acts[l + 1] > 0)
        grads[l] = delta.T @ acts[l]
        if l > 0:
            delta = delta @ p.weights[l]
    return grads, float(np.mean((out - y) ** 2))


def train(p, opt, buf, epochs=1, batch_size=32, seed=0):
    """Shuffled mini-batch training on the squared loss. Mutates p and opt;
    returns False (nothing trained) when the buffer is empty."""
    if len(buf) == 0:
        return False
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    rng = np.random.default_rng(seed)
    X, y = buf.as_arrays()
    n = len(buf)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            grads, _ = _loss_grads(p, X[idx], y[idx])
            opt.apply(p, grads)
    return True


def mse(p, buf):
    X, y = buf.as_arrays()
    return float(np.mean((forward_batch(p, X) - y) ** 2))


_MAGIC = b"PRBW"


def save_weights(p, path):
    """Little-endian flat binary: magic, uint32 dim count, uint32 dims,
    float64 row-major weights in layer order."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", len(p.layer_dims)))
        fh.write(struct.pack(f"<{len(p.layer_dims)}I", *p.layer_dims))
        for w in p.weights:
            fh.write(np.ascontiguousarray(w, dtype="<f8").tobytes())


def load_weights(path):
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError(f"{path}: not a weight checkpoint")
        (ndims,) = struct.unpack("<I", fh.read(4))
        dims = list(struct.unpack(f"<{ndims}I", fh.read(4 * ndims)))
        weights = []
        for l in range(ndims - 1):
            rows, cols = dims[l + 1], dims[l]
            raw = fh.read(8 * rows * cols)
            weights.append(np.frombuffer(raw, dtype="<f8").reshape(rows, cols).copy())
    return MLPParams(dims, weights)
