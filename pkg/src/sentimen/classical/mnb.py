"""Multinomial Naive Bayes over non-negative (TF-IDF) feature weights."""

import numpy as np
import scipy.sparse as sp

from ..exceptions import ConfigError, DataError
from .base import LinearClassifierBase, as_rows, softmax_rows


def _check_non_negative(X):
    data = X.data if sp.issparse(X) else X
    if data.size and data.min() < 0:
        raise DataError("Multinomial NB needs non-negative feature weights")


class MultinomialNB(LinearClassifierBase):
    """Laplace/Lidstone-smoothed multinomial NB.

    ``feature_log_prob_[c, f] = ln((N_cf + alpha) / (N_c + alpha * F))`` where
    ``N_cf`` sums the weights of feature ``f`` over class ``c``;
    ``class_log_prior_[c] = ln(n_c / n)``.

    Parameters
    ----------
    alpha : float, default=1.0
    """

    def __init__(self, alpha=1.0):
        self.alpha = alpha

    def fit(self, X, y):
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        X, y_idx = self._validate_fit(X, y)
        _check_non_negative(X)
        K, F = len(self.classes_), X.shape[1]
        onehot = np.zeros((len(y_idx), K))
        onehot[np.arange(len(y_idx)), y_idx] = 1.0
        self.feature_count_ = np.asarray(X.T @ onehot).T
        self.class_count_ = onehot.sum(axis=0)
        smoothed = self.feature_count_ + self.alpha
        self.feature_log_prob_ = np.log(smoothed / smoothed.sum(axis=1, keepdims=True))
        self.class_log_prior_ = np.log(self.class_count_ / self.class_count_.sum())
        return self

    def decision_function(self, X):
        X = self._validate_predict(X)
        _check_non_negative(X)
        return np.asarray(X @ self.feature_log_prob_.T) + self.class_log_prior_

    def predict_proba(self, X):
        return softmax_rows(self.decision_function(X))


def train_mnb(X, y, alpha=1.0):
    return MultinomialNB(alpha=alpha).fit(X, y)


def predict_mnb(model, x):
    """Single vector -> (label, per-class probabilities)."""
    proba = model.predict_proba(as_rows(x))[0]
    return model.classes_[int(np.argmax(proba))], proba
