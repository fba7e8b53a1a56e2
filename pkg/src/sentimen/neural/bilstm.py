"""Bidirectional LSTM classifier: parameters, masked forward pass and BPTT.

Gate order inside the stacked ``4H`` rows is input, forget, cell, output.
Each direction carries two bias vectors (input-side and recurrent-side).
The forward direction reads positions ``0..len-1``, the backward direction
``len-1..0``; padded steps are computed but never update the state, so the
logits do not depend on the amount of trailing padding.  The classifier
reads ``concat(h_fwd[len-1], h_bwd[0])`` of the last layer through inverted
dropout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import DataError
from ..features.vocab import PAD_ID

EMBED_DIM = 128
HIDDEN = 128
LAYERS = 2
N_CLASSES = 3
DIRECTIONS = ("fwd", "bwd")


def param_shapes(vocab_size, embed_dim=EMBED_DIM, hidden=HIDDEN, layers=LAYERS, n_classes=N_CLASSES):
    """Ordered ``{name: shape}``; this order is also the checkpoint tensor order."""
    shapes = {"embedding": (vocab_size, embed_dim)}
    for layer in range(1, layers + 1):
        d_in = embed_dim if layer == 1 else 2 * hidden
        for d in DIRECTIONS:
            p = f"l{layer}_{d}"
            shapes[f"{p}_W"] = (4 * hidden, d_in)
            shapes[f"{p}_U"] = (4 * hidden, hidden)
            shapes[f"{p}_b_ih"] = (4 * hidden,)
            shapes[f"{p}_b_hh"] = (4 * hidden,)
    shapes["head_W"] = (2 * hidden, n_classes)
    shapes["head_b"] = (n_classes,)
    return shapes


def count_parameters(vocab_size, embed_dim=EMBED_DIM, hidden=HIDDEN, layers=LAYERS, n_classes=N_CLASSES):
    """Closed form: ``E*V + sum_l 2*(4H*D_l + 4H*H + 8H) + 2H*K + K``."""
    if vocab_size < 2:
        raise DataError(f"vocabulary size must be >= 2, got {vocab_size}")
    H = hidden
    total = embed_dim * vocab_size
    for layer in range(1, layers + 1):
        d_in = embed_dim if layer == 1 else 2 * H
        total += 2 * (4 * H * d_in + 4 * H * H + 8 * H)
    return total + 2 * H * n_classes + n_classes


@dataclass
class BilstmParams:
    tensors: dict
    embed_dim: int = EMBED_DIM
    hidden: int = HIDDEN
    layers: int = LAYERS
    n_classes: int = N_CLASSES

    @property
    def vocab_size(self):
        return self.tensors["embedding"].shape[0]

    @property
    def dtype(self):
        return self.tensors["embedding"].dtype

    def count(self):
        return int(sum(a.size for a in self.tensors.values()))

    def copy(self, dtype=None):
        dt = dtype or self.dtype
        return BilstmParams({k: np.array(v, dtype=dt) for k, v in self.tensors.items()},
                            self.embed_dim, self.hidden, self.layers, self.n_classes)

    def shapes(self):
        return param_shapes(self.vocab_size, self.embed_dim, self.hidden, self.layers, self.n_classes)


def init_params(vocab_size, rng, embed_dim=EMBED_DIM, hidden=HIDDEN, layers=LAYERS,
                n_classes=N_CLASSES, dtype=np.float32):
    """Embeddings ~ U(-0.1, 0.1) with a zero PAD row; everything else ~ U(+-1/sqrt(H))."""
    bound = 1.0 / np.sqrt(hidden)
    tensors = {}
    for name, shape in param_shapes(vocab_size, embed_dim, hidden, layers, n_classes).items():
        lim = 0.1 if name == "embedding" else bound
        tensors[name] = rng.uniform(-lim, lim, size=shape).astype(dtype)
    tensors["embedding"][PAD_ID] = 0
    return BilstmParams(tensors, embed_dim, hidden, layers, n_classes)


def _sigmoid(x):
    # tanh form never overflows
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _run_direction(x, mask, W, U, b, reverse):
    B, T, _ = x.shape
    H = U.shape[1]
    dt = x.dtype
    h = np.zeros((B, H), dtype=dt)
    c = np.zeros((B, H), dtype=dt)
    out = np.zeros((B, T, H), dtype=dt)
    cache = {k: np.zeros((T, B, H), dtype=dt) for k in ("h_prev", "c_prev", "i", "f", "g", "o", "tc")}
    steps = range(T - 1, -1, -1) if reverse else range(T)
    Wt, Ut = W.T, U.T
    for t in steps:
        m = mask[:, t][:, None]
        z = x[:, t] @ Wt + h @ Ut + b
        i = _sigmoid(z[:, :H])
        f = _sigmoid(z[:, H:2 * H])
        g = np.tanh(z[:, 2 * H:3 * H])
        o = _sigmoid(z[:, 3 * H:])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        cache["h_prev"][t], cache["c_prev"][t] = h, c
        cache["i"][t], cache["f"][t], cache["g"][t], cache["o"][t], cache["tc"][t] = i, f, g, o, tc
        h = np.where(m, h_new, h)
        c = np.where(m, c_new, c)
        out[:, t] = np.where(m, h_new, 0)
    cache["reverse"] = reverse
    return out, h, cache


def _back_direction(x, mask, W, U, cache, dout, dh_final):
    B, T, _ = x.shape
    H = U.shape[1]
    dt = x.dtype
    dW = np.zeros_like(W)
    dU = np.zeros_like(U)
    db = np.zeros(4 * H, dtype=dt)
    dx = np.zeros_like(x)
    dh = dh_final.astype(dt, copy=True)
    dc = np.zeros((B, H), dtype=dt)
    steps = range(T) if cache["reverse"] else range(T - 1, -1, -1)
    for t in steps:
        m = mask[:, t][:, None].astype(dt)
        dh = dh + dout[:, t] * m
        i, f, g, o, tc = (cache[k][t] for k in ("i", "f", "g", "o", "tc"))
        dh_new = dh * m
        dc_new = (dc + dh_new * o * (1 - tc * tc)) * m
        dz = np.concatenate(
            [dc_new * g * i * (1 - i), dc_new * cache["c_prev"][t] * f * (1 - f),
             dc_new * i * (1 - g * g), dh_new * tc * o * (1 - o)],
            axis=1,
        )
        dW += dz.T @ x[:, t]
        dU += dz.T @ cache["h_prev"][t]
        db += dz.sum(axis=0)
        dx[:, t] = dz @ W
        keep = 1 - m
        dh = dz @ U + dh * keep
        dc = dc_new * f + dc * keep
    return dx, dW, dU, db


@dataclass
class ForwardCache:
    ids: np.ndarray
    mask: np.ndarray
    inputs: list
    dir_caches: list
    readout: np.ndarray
    keep: np.ndarray | None


def bilstm_forward(params, ids, lengths, dropout=0.0, rng=None, dropout_mask=None):
    """Logits ``(B, n_classes)`` and the cache for :func:`bilstm_backward`.

    Dropout is active when ``dropout > 0`` and either ``rng`` or an explicit
    ``dropout_mask`` (already scaled by ``1/(1-p)``) is given.
    """
    P = params.tensors
    ids = np.asarray(ids, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.int64)
    if ids.ndim != 2 or lengths.shape != (ids.shape[0],):
        raise DataError(f"ids must be (batch, time) with one length per row; got {ids.shape} and {lengths.shape}")
    V = params.vocab_size
    if ids.size and (ids.min() < 0 or ids.max() >= V):
        raise DataError(f"token id out of range for vocabulary of size {V}")
    if lengths.size and (lengths.min() < 1 or lengths.max() > ids.shape[1]):
        raise DataError("every sequence needs 1 <= length <= max_len")
    dt = params.dtype
    mask = np.arange(ids.shape[1])[None, :] < lengths[:, None]
    x = P["embedding"][ids]
    inputs, dir_caches, finals = [], [], None
    for layer in range(1, params.layers + 1):
        inputs.append(x)
        outs, finals, caches = [], [], []
        for d in DIRECTIONS:
            p = f"l{layer}_{d}"
            b = P[f"{p}_b_ih"] + P[f"{p}_b_hh"]
            out, h_last, cache = _run_direction(x, mask, P[f"{p}_W"], P[f"{p}_U"], b, reverse=(d == "bwd"))
            outs.append(out)
            finals.append(h_last)
            caches.append(cache)
        dir_caches.append(caches)
        x = np.concatenate(outs, axis=2)
    readout = np.concatenate(finals, axis=1)
    keep = None
    if dropout_mask is not None:
        keep = np.asarray(dropout_mask, dtype=dt)
    elif dropout > 0 and rng is not None:
        keep = ((rng.random(readout.shape) >= dropout) / (1.0 - dropout)).astype(dt)
    r = readout * keep if keep is not None else readout
    logits = r @ P["head_W"] + P["head_b"]
    return logits, ForwardCache(ids, mask, inputs, dir_caches, readout, keep)


def bilstm_backward(params, cache, dlogits):
    """Exact gradients (dict keyed like ``params.tensors``); PAD row gradient is zero."""
    P = params.tensors
    dt = params.dtype
    dlogits = np.asarray(dlogits, dtype=dt)
    H = params.hidden
    grads = {}
    r = cache.readout * cache.keep if cache.keep is not None else cache.readout
    grads["head_W"] = r.T @ dlogits
    grads["head_b"] = dlogits.sum(axis=0)
    dr = dlogits @ P["head_W"].T
    if cache.keep is not None:
        dr = dr * cache.keep
    B, T = cache.ids.shape
    d_finals = [dr[:, :H], dr[:, H:]]
    dout = None
    for layer in range(params.layers, 0, -1):
        x = cache.inputs[layer - 1]
        dx_total = np.zeros_like(x)
        for k, d in enumerate(DIRECTIONS):
            p = f"l{layer}_{d}"
            do = np.zeros((B, T, H), dtype=dt) if dout is None else dout[:, :, k * H:(k + 1) * H]
            dx, dW, dU, db = _back_direction(
                x, cache.mask, P[f"{p}_W"], P[f"{p}_U"], cache.dir_caches[layer - 1][k], do, d_finals[k],
            )
            grads[f"{p}_W"], grads[f"{p}_U"] = dW, dU
            grads[f"{p}_b_ih"], grads[f"{p}_b_hh"] = db, db.copy()
            dx_total += dx
        dout = dx_total
        d_finals = [np.zeros((B, H), dtype=dt)] * 2
    dE = np.zeros_like(P["embedding"])
    np.add.at(dE, cache.ids.ravel(), dout.reshape(-1, dout.shape[-1]))
    dE[PAD_ID] = 0
    grads["embedding"] = dE
    return {name: grads[name] for name in P}


def softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def cross_entropy(logits, labels):
    """Mean negative log-likelihood and its gradient ``(softmax - onehot) / B``."""
    logits = np.asarray(logits)
    labels = np.asarray(labels, dtype=np.int64)
    B = logits.shape[0]
    z = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(z).sum(axis=1))
    rows = np.arange(B)
    loss = float(np.mean(log_norm - z[rows, labels]))
    grad = np.exp(z - log_norm[:, None])
    grad[rows, labels] -= 1
    return loss, grad / B


def predict_bilstm(params, ids, lengths, batch_size=256):
    """Labels (argmax, ties to the lowest class) and softmax probabilities."""
    ids = np.asarray(ids)
    probs = []
    for start in range(0, ids.shape[0], batch_size):
        logits, _ = bilstm_forward(params, ids[start:start + batch_size], np.asarray(lengths)[start:start + batch_size])
        probs.append(softmax(logits.astype(np.float64)))
    P = np.vstack(probs) if probs else np.zeros((0, params.n_classes))
    return np.argmax(P, axis=1), P
