"""One-vs-rest linear SVM trained with SMO on the dual.

Each binary problem minimizes ``0.5 |w|^2 + C sum_i hinge(1 - s_i (w.x_i + b))``
with an unregularized bias.  The dual is solved with the second-order
working-set selection and pair update used by LIBSVM; the linear kernel
lets the primal ``w`` be rebuilt from the multipliers at the end.
"""

import logging

import numpy as np
import scipy.sparse as sp

from ..exceptions import ConfigError
from .base import LinearClassifierBase

log = logging.getLogger(__name__)

_TAU = 1e-12


def _row(X, i):
    r = X[i]
    return r.toarray().ravel() if sp.issparse(r) else r


def smo_binary(X, s, C, tol=1e-4, max_iter=None):
    """Solve one binary dual; ``s`` holds +1/-1.  Returns ``(w, b, alpha, n_iter)``."""
    n = X.shape[0]
    sparse = sp.issparse(X)
    diag = np.asarray(X.multiply(X).sum(axis=1)).ravel() if sparse else np.einsum("ij,ij->i", X, X)
    alpha = np.zeros(n)
    G = -np.ones(n)
    cache = {}

    def krow(i):
        # K[i, :] = X @ x_i; only the rows touched by the working set are kept
        k = cache.get(i)
        if k is None:
            k = X @ _row(X, i) if sparse else X @ X[i]
            k = np.asarray(k).ravel()
            if len(cache) > 256:
                cache.clear()
            cache[i] = k
        return k

    if max_iter is None:
        max_iter = max(10_000_000, 100 * n)
    pos, neg = s > 0, s < 0
    it = 0
    m_up = M_low = 0.0
    while it < max_iter:
        up = (pos & (alpha < C)) | (neg & (alpha > 0))
        low = (pos & (alpha > 0)) | (neg & (alpha < C))
        score = -s * G
        if not up.any() or not low.any():
            break
        i = int(np.flatnonzero(up)[np.argmax(score[up])])
        m_up = score[i]
        M_low = score[low].min()
        if m_up - M_low < tol:
            break
        Ki = krow(i)
        cand = low & (score < m_up)
        b_it = m_up - score
        a_it = diag[i] + diag - 2.0 * Ki
        a_it = np.where(a_it > 0, a_it, _TAU)
        gain = np.full(n, np.inf)
        gain[cand] = -(b_it[cand] ** 2) / a_it[cand]
        j = int(np.argmin(gain))
        Kj = krow(j)
        Qij = s[i] * s[j] * Ki[j]
        ai, aj = alpha[i], alpha[j]
        if s[i] != s[j]:
            quad = max(diag[i] + diag[j] + 2.0 * Qij, _TAU)
            delta = (-G[i] - G[j]) / quad
            diff = ai - aj
            ai += delta
            aj += delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            elif aj > C:
                aj, ai = C, C + diff
        else:
            quad = max(diag[i] + diag[j] - 2.0 * Qij, _TAU)
            delta = (G[i] - G[j]) / quad
            total = ai + aj
            ai -= delta
            aj += delta
            if total > C:
                if ai > C:
                    ai, aj = C, total - C
            elif aj < 0:
                aj, ai = 0.0, total
            if total > C:
                if aj > C:
                    aj, ai = C, total - C
            elif ai < 0:
                ai, aj = 0.0, total
        dai, daj = ai - alpha[i], aj - alpha[j]
        alpha[i], alpha[j] = ai, aj
        # G_k += s_k s_i K_ki dai + s_k s_j K_kj daj
        G += s * (s[i] * dai * Ki + s[j] * daj * Kj)
        it += 1
    else:
        log.warning("SMO stopped at max_iter=%d (gap %.3g)", max_iter, m_up - M_low)
    coef = alpha * s
    w = np.asarray(X.T @ coef).ravel()
    free = (alpha > 0) & (alpha < C)
    score = -s * G
    if free.any():
        b = float(score[free].mean())
    else:
        b = float((m_up + M_low) / 2.0)
    return w, b, alpha, it


def primal_objective(w, b, X, s, C):
    margins = 1.0 - s * (np.asarray(X @ w).ravel() + b)
    return 0.5 * float(w @ w) + C * float(np.maximum(margins, 0.0).sum())


class LinearSVM(LinearClassifierBase):
    """One-vs-rest linear SVM; ``decision_function`` gives one column per class.

    Parameters
    ----------
    C : float, default=1.0
    tol : float, default=1e-4
        KKT violation tolerance of the SMO solver.
    max_iter : int or None
    """

    def __init__(self, C=1.0, tol=1e-4, max_iter=None):
        self.C = C
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        if not self.C > 0:
            raise ConfigError(f"C must be > 0, got {self.C}")
        X, y_idx = self._validate_fit(X, y, min_classes=2)
        K = len(self.classes_)
        self.coef_ = np.zeros((K, X.shape[1]))
        self.intercept_ = np.zeros(K)
        self.n_iter_ = np.zeros(K, dtype=np.int64)
        for c in range(K):
            s = np.where(y_idx == c, 1.0, -1.0)
            w, b, _, n_it = smo_binary(X, s, float(self.C), self.tol, self.max_iter)
            self.coef_[c], self.intercept_[c], self.n_iter_[c] = w, b, n_it
        return self

    def decision_function(self, X):
        X = self._validate_predict(X)
        return np.asarray(X @ self.coef_.T) + self.intercept_


def train_linear_svm(X, y, C=1.0):
    return LinearSVM(C=C).fit(X, y)
