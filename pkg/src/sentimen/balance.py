"""SMOTE oversampling of minority classes, for use inside training folds only."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array

from .exceptions import BalancingError, ConfigError, DataError
from .rng import DEFAULT_SEED, make_rng

log = logging.getLogger(__name__)

_KNN_CHUNK = 512


@dataclass
class BalancedSet:
    """Originals (input order) followed by synthetics grouped by class code."""

    vectors: object
    labels: np.ndarray
    synthetic_flags: np.ndarray
    warnings: list = field(default_factory=list)


def nearest_neighbors(X, k, n_query=None):
    """Indices of the ``k`` nearest other rows of ``X`` for its first ``n_query`` rows.

    Ties go to the lower row index.  Distances use the expansion
    ``|a|^2 + |b|^2 - 2 a.b`` on dense row blocks.
    """
    n = X.shape[0] if n_query is None else n_query
    sq = np.asarray(X.multiply(X).sum(axis=1)).ravel() if sp.issparse(X) else np.einsum("ij,ij->i", X, X)
    out = np.empty((n, k), dtype=np.int64)
    for start in range(0, n, _KNN_CHUNK):
        rows = np.arange(start, min(start + _KNN_CHUNK, n))
        gram = X[rows] @ X.T
        gram = gram.toarray() if sp.issparse(gram) else np.asarray(gram)
        d = np.maximum(sq[rows, None] + sq[None, :] - 2.0 * gram, 0.0)
        d[np.arange(len(rows)), rows] = np.inf
        out[rows] = np.argsort(d, axis=1, kind="stable")[:, :k]
    return out


def smote_oversample(vectors, labels, k=5, seed=DEFAULT_SEED):
    """Upsample every class to the majority count with SMOTE interpolation.

    Each minority class cycles through its samples in input order; the
    ``j``-th synthetic of that class comes from sample ``j mod n_c``, one of
    its ``k`` nearest same-class neighbors (chosen uniformly) and
    ``u ~ U(0, 1)``.  Sparse input gives sparse output.
    """
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    sparse = sp.issparse(vectors)
    X = sp.csr_matrix(vectors, dtype=np.float64) if sparse else np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2:
        raise DataError(f"expected a 2-D feature matrix, got shape {X.shape}")
    y = np.asarray(labels)
    if y.shape != (X.shape[0],):
        raise DataError(f"{X.shape[0]} vectors but {y.shape[0]} labels")
    classes, counts = np.unique(y, return_counts=True)
    target = counts.max() if len(counts) else 0
    rng = make_rng(seed)
    notes = []
    synth_blocks, synth_labels = [], []
    for cls, n_c in zip(classes, counts):
        need = target - n_c
        if need == 0:
            continue
        if n_c < 2:
            raise BalancingError(cls, f"class {cls} has a single sample; SMOTE needs at least 2")
        k_c = k
        if k > n_c - 1:
            k_c = n_c - 1
            msg = f"class {cls}: k={k} exceeds class size - 1; using k={k_c}"
            log.warning(msg)
            notes.append(msg)
        idx = np.flatnonzero(y == cls)
        Xc = X[idx]
        base = np.arange(need) % n_c
        nn = nearest_neighbors(Xc, k_c, n_query=min(need, n_c))
        pick = np.empty(need, dtype=np.int64)
        u = np.empty(need)
        for j in range(need):
            pick[j] = nn[base[j], rng.integers(k_c)]
            u[j] = rng.random()
        a = Xc[base]
        b = Xc[pick]
        if sparse:
            synth = a + sp.diags(u) @ (b - a)
        else:
            synth = a + u[:, None] * (b - a)
        synth_blocks.append(synth)
        synth_labels.append(np.full(need, cls, dtype=y.dtype))
    if synth_blocks:
        stack = sp.vstack if sparse else np.vstack
        out = stack([X, *synth_blocks])
        out = out.tocsr() if sparse else out
        out_y = np.concatenate([y, *synth_labels])
    else:
        out, out_y = X, y.copy()
    flags = np.zeros(out.shape[0], dtype=bool)
    flags[X.shape[0]:] = True
    return BalancedSet(out, out_y, flags, notes)


class SMOTE(BaseEstimator):
    """Estimator-style wrapper exposing ``fit_resample``.

    Parameters
    ----------
    k_neighbors : int, default=5
    random_state : int, default=42
    """

    def __init__(self, k_neighbors=5, random_state=DEFAULT_SEED):
        self.k_neighbors = k_neighbors
        self.random_state = random_state

    def fit_resample(self, X, y):
        X = check_array(X, accept_sparse="csr", dtype=np.float64)
        result = smote_oversample(X, y, self.k_neighbors, self.random_state)
        self.synthetic_flags_ = result.synthetic_flags
        self.warnings_ = result.warnings
        return result.vectors, result.labels
