"""CART classification tree with exhaustive Gini splits on sparse features."""

import numpy as np
import scipy.sparse as sp

from ..exceptions import ConfigError
from .base import LinearClassifierBase, as_rows

_LEAF = -1
_PREDICT_CHUNK = 2048


def gini(hist):
    hist = np.asarray(hist, dtype=np.float64)
    n = hist.sum()
    if n == 0:
        return 0.0
    p = hist / n
    return float(1.0 - np.dot(p, p))


def best_split(X, y_idx, n_classes, min_samples_leaf=1):
    """Best ``(feature, threshold, score)`` for one node, or ``None``.

    ``X`` holds the node's rows.  Implicit zeros of a sparse column are
    folded into one block per feature, so the search costs O(nnz log nnz)
    rather than O(n * F).  The score is the weighted child Gini impurity;
    ties go to the lower feature, then the lower threshold.
    """
    n = X.shape[0]
    counts = np.bincount(y_idx, minlength=n_classes).astype(np.float64)
    coo = sp.coo_matrix(X) if sp.issparse(X) else sp.coo_matrix(np.asarray(X))
    coo.eliminate_zeros()
    F = X.shape[1]
    feat, val, lab = coo.col.astype(np.int64), coo.data, y_idx[coo.row]
    nz_counts = np.bincount(feat * n_classes + lab, minlength=F * n_classes).reshape(F, n_classes).astype(np.float64)
    zero_counts = counts[None, :] - nz_counts
    zfeat = np.flatnonzero(zero_counts.sum(axis=1) > 0)
    # only features with at least one explicit value can split
    active = np.zeros(F, dtype=bool)
    active[feat] = True
    zfeat = zfeat[active[zfeat]]
    e_feat = np.concatenate([feat, zfeat])
    e_val = np.concatenate([val, np.zeros(len(zfeat))])
    e_w = np.zeros((len(e_feat), n_classes))
    e_w[np.arange(len(feat)), lab] = 1.0
    e_w[len(feat):] = zero_counts[zfeat]
    if len(e_feat) < 2:
        return None
    order = np.lexsort((e_val, e_feat))
    e_feat, e_val, e_w = e_feat[order], e_val[order], e_w[order]
    cum = np.cumsum(e_w, axis=0)
    starts = np.flatnonzero(np.r_[True, e_feat[1:] != e_feat[:-1]])
    group = np.repeat(np.arange(len(starts)), np.diff(np.r_[starts, len(e_feat)]))
    before = np.vstack([np.zeros((1, n_classes)), cum[starts[1:] - 1]]) if len(starts) > 1 else np.zeros((1, n_classes))
    left = cum[:-1] - before[group[:-1]]
    ok = (e_feat[1:] == e_feat[:-1]) & (e_val[1:] > e_val[:-1])
    if not ok.any():
        return None
    left = left[ok]
    pos = np.flatnonzero(ok)
    right = counts[None, :] - left
    nl, nr = left.sum(axis=1), right.sum(axis=1)
    fits = (nl >= min_samples_leaf) & (nr >= min_samples_leaf)
    if not fits.any():
        return None
    left, right, nl, nr, pos = left[fits], right[fits], nl[fits], nr[fits], pos[fits]
    # weighted child impurity = (n - sum L^2/nl - sum R^2/nr) / n
    purity = (left * left).sum(axis=1) / nl + (right * right).sum(axis=1) / nr
    best = purity.max()
    k = int(np.flatnonzero(purity >= best - 1e-12 * max(n, 1.0))[0])
    p = pos[k]
    lo, hi = e_val[p], e_val[p + 1]
    thr = lo + (hi - lo) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return int(e_feat[p]), float(thr), float((n - purity[k]) / n)


class DecisionTree(LinearClassifierBase):
    """CART with the Gini criterion and best splits (``x[f] <= t`` goes left).

    Splitting stops at pure nodes, at ``max_depth``, below
    ``min_samples_split`` samples, or when no threshold separates the node's
    rows.  Splits that leave the impurity unchanged are still taken.

    Parameters
    ----------
    max_depth : int or None, default=None
    min_samples_leaf : int, default=1
    min_samples_split : int, default=2
    """

    def __init__(self, max_depth=None, min_samples_leaf=1, min_samples_split=2):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.min_samples_split = min_samples_split

    def _check_params(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigError(f"max_depth must be >= 0 or None, got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise ConfigError(f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}")
        if self.min_samples_split < 2:
            raise ConfigError(f"min_samples_split must be >= 2, got {self.min_samples_split}")

    def fit(self, X, y):
        self._check_params()
        X, y_idx = self._validate_fit(X, y)
        X = sp.csr_matrix(X)
        K = len(self.classes_)
        feature, threshold, left, right, value, depth = [], [], [], [], [], []

        def new_node(rows, d):
            feature.append(_LEAF)
            threshold.append(0.0)
            left.append(_LEAF)
            right.append(_LEAF)
            value.append(np.bincount(y_idx[rows], minlength=K).astype(np.float64))
            depth.append(d)
            return len(feature) - 1

        stack = [(new_node(np.arange(X.shape[0]), 0), np.arange(X.shape[0]))]
        while stack:
            node, rows = stack.pop()
            d = depth[node]
            hist = value[node]
            if (
                np.count_nonzero(hist) <= 1
                or (self.max_depth is not None and d >= self.max_depth)
                or len(rows) < self.min_samples_split
            ):
                continue
            sub = X[rows]
            split = best_split(sub, y_idx[rows], K, self.min_samples_leaf)
            if split is None:
                continue
            f, t, _ = split
            col = sub[:, f].toarray().ravel()
            go_left = col <= t
            li = new_node(rows[go_left], d + 1)
            ri = new_node(rows[~go_left], d + 1)
            feature[node], threshold[node], left[node], right[node] = f, t, li, ri
            stack.append((ri, rows[~go_left]))
            stack.append((li, rows[go_left]))
        self.feature_ = np.array(feature, dtype=np.int64)
        self.threshold_ = np.array(threshold, dtype=np.float64)
        self.children_left_ = np.array(left, dtype=np.int64)
        self.children_right_ = np.array(right, dtype=np.int64)
        self.value_ = np.vstack(value)
        self.node_depth_ = np.array(depth, dtype=np.int64)
        return self

    @property
    def node_count(self):
        return len(self.feature_)

    def get_depth(self):
        return int(self.node_depth_.max())

    def get_n_leaves(self):
        return int(np.count_nonzero(self.feature_ == _LEAF))

    def apply(self, X):
        """Leaf index reached by each row."""
        X = self._validate_predict(X)
        out = np.empty(X.shape[0], dtype=np.int64)
        for start in range(0, X.shape[0], _PREDICT_CHUNK):
            block = X[start:start + _PREDICT_CHUNK]
            block = block.toarray() if sp.issparse(block) else np.asarray(block)
            node = np.zeros(block.shape[0], dtype=np.int64)
            rows = np.arange(block.shape[0])
            while True:
                inner = self.feature_[node] != _LEAF
                if not inner.any():
                    break
                r = rows[inner]
                nd = node[inner]
                go_left = block[r, self.feature_[nd]] <= self.threshold_[nd]
                node[inner] = np.where(go_left, self.children_left_[nd], self.children_right_[nd])
            out[start:start + block.shape[0]] = node
        return out

    def predict_proba(self, X):
        hist = self.value_[self.apply(X)]
        return hist / hist.sum(axis=1, keepdims=True)

    def decision_function(self, X):
        return self.predict_proba(X)


def train_decision_tree(X, y, criterion="gini", max_depth=None, **kwargs):
    if criterion != "gini":
        raise ConfigError(f"only the gini criterion is supported, got {criterion!r}")
    return DecisionTree(max_depth=max_depth, **kwargs).fit(X, y)


def predict_tree(model, x):
    proba = model.predict_proba(as_rows(x))[0]
    return model.classes_[int(np.argmax(proba))], proba
