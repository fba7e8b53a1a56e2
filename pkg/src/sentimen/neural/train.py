"""Adam, early stopping, the training loop, checkpoints and an estimator wrapper."""

from __future__ import annotations

import csv
import logging
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..container import read_container, write_container
from ..exceptions import ConfigError, DataError, TrainingError
from ..features.vocab import PAD_ID, build_vocab, compute_percentile_length, encode_batch
from ..rng import DEFAULT_SEED, make_rng
from .bilstm import (
    EMBED_DIM,
    HIDDEN,
    LAYERS,
    N_CLASSES,
    BilstmParams,
    bilstm_backward,
    bilstm_forward,
    cross_entropy,
    init_params,
    predict_bilstm,
)

log = logging.getLogger(__name__)

BETA1, BETA2, ADAM_EPS = 0.9, 0.999, 1e-8
CHECKPOINT_KIND = "sentimen.bilstm"
HISTORY_COLUMNS = ("epoch", "train_loss", "val_loss", "val_acc")
_EVAL_BATCH = 256


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    batch_size: int = 64
    max_epochs: int = 10
    patience: int = 3
    dropout: float = 0.5
    seed: int = DEFAULT_SEED
    embed_dim: int = EMBED_DIM
    hidden: int = HIDDEN
    layers: int = LAYERS
    min_freq: int = 2
    length_percentile: float = 95
    max_len: int | None = None
    float64: bool = False

    def __post_init__(self):
        for name in ("learning_rate", "batch_size", "max_epochs", "patience", "embed_dim", "hidden", "layers", "min_freq"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.patience >= self.max_epochs:
            raise ConfigError(f"patience ({self.patience}) must be smaller than max_epochs ({self.max_epochs})")
        if not 0 <= self.dropout < 1:
            raise ConfigError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.max_len is not None and self.max_len < 1:
            raise ConfigError(f"max_len must be positive, got {self.max_len}")

    @property
    def dtype(self):
        return np.float64 if self.float64 else np.float32


@dataclass
class AdamState:
    m: dict
    v: dict
    t: int = 0

    @classmethod
    def zeros_like(cls, params):
        return cls({k: np.zeros_like(a) for k, a in params.tensors.items()},
                   {k: np.zeros_like(a) for k, a in params.tensors.items()})


def adam_step(params, grads, state, lr, t=None):
    """One bias-corrected Adam update, in place; returns ``(params, state)``.

    The PAD embedding row is never modified.
    """
    state.t = state.t + 1 if t is None else t
    if state.t < 1:
        raise ConfigError("Adam step counter must start at 1")
    c1 = 1.0 - BETA1 ** state.t
    c2 = 1.0 - BETA2 ** state.t
    for name, p in params.tensors.items():
        g = grads[name]
        m, v = state.m[name], state.v[name]
        m *= BETA1
        m += (1 - BETA1) * g
        v *= BETA2
        v += (1 - BETA2) * g * g
        step = lr * (m / c1) / (np.sqrt(v / c2) + ADAM_EPS)
        if name == "embedding":
            step[PAD_ID] = 0
        p -= step.astype(p.dtype, copy=False)
    return params, state


class EarlyStopping:
    """Tracks the best validation loss; ``update`` returns True when training should stop."""

    def __init__(self, patience):
        self.patience = patience
        self.best = np.inf
        self.best_epoch = 0
        self.wait = 0

    def update(self, epoch, val_loss):
        if val_loss < self.best:
            self.best, self.best_epoch, self.wait = val_loss, epoch, 0
            return False
        self.wait += 1
        return self.wait >= self.patience


@dataclass
class TrainHistory:
    train_loss: list = field(default_factory=list)
    val_loss: list = field(default_factory=list)
    val_acc: list = field(default_factory=list)
    best_epoch: int = 0
    stop_reason: str = ""

    def rows(self):
        return [
            (e + 1, self.train_loss[e], self.val_loss[e], self.val_acc[e]) for e in range(len(self.train_loss))
        ]

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(HISTORY_COLUMNS)
            for epoch, tl, vl, va in self.rows():
                w.writerow([epoch, repr(float(tl)), repr(float(vl)), repr(float(va))])


def evaluate_loss(params, ids, lengths, y):
    """Mean loss and accuracy with dropout off."""
    total, correct = 0.0, 0
    for s in range(0, len(y), _EVAL_BATCH):
        logits, _ = bilstm_forward(params, ids[s:s + _EVAL_BATCH], lengths[s:s + _EVAL_BATCH])
        loss, _ = cross_entropy(logits.astype(np.float64), y[s:s + _EVAL_BATCH])
        total += loss * len(logits)
        correct += int((np.argmax(logits, axis=1) == y[s:s + _EVAL_BATCH]).sum())
    return total / len(y), correct / len(y)


def train_arrays(train, val, vocab_size, config, params=None):
    """Train on encoded arrays ``(ids, lengths, labels)``; returns the best-epoch params."""
    ids, lengths, y = (np.asarray(a) for a in train)
    v_ids, v_len, v_y = (np.asarray(a) for a in val)
    if len(y) == 0:
        raise TrainingError("training split is empty")
    if len(v_y) == 0:
        raise TrainingError("validation split is empty")
    if params is None:
        params = init_params(vocab_size, make_rng(config.seed, 0), config.embed_dim, config.hidden,
                             config.layers, N_CLASSES, config.dtype)
    shuffle_rng = make_rng(config.seed, 1)
    dropout_rng = make_rng(config.seed, 2)
    state = AdamState.zeros_like(params)
    history = TrainHistory()
    stopper = EarlyStopping(config.patience)
    best = params.copy()
    for epoch in range(1, config.max_epochs + 1):
        order = shuffle_rng.permutation(len(y))
        seen, running = 0, 0.0
        for s in range(0, len(y), config.batch_size):
            b = order[s:s + config.batch_size]
            logits, cache = bilstm_forward(params, ids[b], lengths[b], config.dropout, dropout_rng)
            loss, dlogits = cross_entropy(logits, y[b])
            grads = bilstm_backward(params, cache, dlogits)
            adam_step(params, grads, state, config.learning_rate)
            running += loss * len(b)
            seen += len(b)
        val_loss, val_acc = evaluate_loss(params, v_ids, v_len, v_y)
        history.train_loss.append(running / seen)
        history.val_loss.append(val_loss)
        history.val_acc.append(val_acc)
        log.info("epoch %d train_loss %.4f val_loss %.4f val_acc %.4f", epoch, running / seen, val_loss, val_acc)
        improved = val_loss < stopper.best
        stop = stopper.update(epoch, val_loss)
        if improved:
            best = params.copy()
        if stop:
            history.stop_reason = "early-stop"
            break
    else:
        history.stop_reason = "max-epochs"
    history.best_epoch = stopper.best_epoch
    return best, history


def encode_docs(docs, vocab, max_len):
    """Token lists -> ``(ids, lengths)``; every document needs at least one token."""
    docs = [list(d) for d in docs]
    if any(len(d) == 0 for d in docs):
        raise DataError("empty token sequence; drop empty reviews before encoding")
    return encode_batch(docs, vocab, max_len)


class BiLSTMClassifier(ClassifierMixin, BaseEstimator):
    """Token lists in, sentiment codes out.

    ``fit`` builds the vocabulary and sequence length from the training
    documents only.  Without ``validation_data`` the training set doubles as
    the validation set.
    """

    def __init__(self, learning_rate=1e-3, batch_size=64, max_epochs=10, patience=3, dropout=0.5,
                 random_state=DEFAULT_SEED, embed_dim=EMBED_DIM, hidden=HIDDEN, layers=LAYERS,
                 min_freq=2, length_percentile=95, max_len=None, float64=False):
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.dropout = dropout
        self.random_state = random_state
        self.embed_dim = embed_dim
        self.hidden = hidden
        self.layers = layers
        self.min_freq = min_freq
        self.length_percentile = length_percentile
        self.max_len = max_len
        self.float64 = float64

    def config(self):
        p = self.get_params()
        p["seed"] = p.pop("random_state")
        return TrainConfig(**p)

    def fit(self, X, y, validation_data=None):
        cfg = self.config()
        X = [list(d) for d in X]
        y = np.asarray(y, dtype=np.int64)
        if len(X) == 0:
            raise TrainingError("training split is empty")
        self.vocab_ = build_vocab(X, cfg.min_freq)
        self.max_len_ = cfg.max_len or compute_percentile_length(X, cfg.length_percentile)
        train = (*encode_docs(X, self.vocab_, self.max_len_), y)
        if validation_data is None:
            val = train
        else:
            vX, vy = validation_data
            val = (*encode_docs(vX, self.vocab_, self.max_len_), np.asarray(vy, dtype=np.int64))
        self.params_, self.history_ = train_arrays(train, val, len(self.vocab_), cfg)
        self.classes_ = np.arange(N_CLASSES)
        return self

    def encode(self, X):
        check_is_fitted(self, "params_")
        return encode_docs(X, self.vocab_, self.max_len_)

    def predict_proba(self, X):
        ids, lengths = self.encode(X)
        return predict_bilstm(self.params_, ids, lengths)[1]

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)


def train_bilstm(splits, vocab=None, config=None):
    """Train on ``splits.train``, early-stop on ``splits.validation``.

    Samples must carry tokens.  Returns ``(params, history, vocab, max_len)``.
    """
    config = config or TrainConfig()
    train_docs = [s.tokens for s in splits.train]
    if not train_docs:
        raise TrainingError("training split is empty")
    vocab = vocab or build_vocab(train_docs, config.min_freq)
    max_len = config.max_len or compute_percentile_length(train_docs, config.length_percentile)

    def arrays(samples):
        ids, lengths = encode_docs([s.tokens for s in samples], vocab, max_len)
        return ids, lengths, np.array([int(s.label) for s in samples], dtype=np.int64)

    params, history = train_arrays(arrays(splits.train), arrays(splits.validation), len(vocab), config)
    return params, history, vocab, max_len


def save_checkpoint(path, params, max_len, config=None):
    meta = {
        "vocab_size": params.vocab_size,
        "embed_dim": params.embed_dim,
        "hidden": params.hidden,
        "layers": params.layers,
        "n_classes": params.n_classes,
        "max_len": int(max_len),
        "config": asdict(config) if config is not None else None,
    }
    write_container(path, CHECKPOINT_KIND, meta, params.tensors, dtype="<f4")


def load_checkpoint(path):
    """Returns ``(params, header)``; tensors come back as float32."""
    header, arrays = read_container(path, CHECKPOINT_KIND)
    params = BilstmParams({k: a.astype(np.float32) for k, a in arrays.items()},
                          header["embed_dim"], header["hidden"], header["layers"], header["n_classes"])
    if params.vocab_size != header["vocab_size"]:
        raise DataError(f"{path}: embedding has {params.vocab_size} rows, header says {header['vocab_size']}")
    return params, header
