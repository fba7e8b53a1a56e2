import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ..exceptions import DataError, TrainingError


class LinearClassifierBase(ClassifierMixin, BaseEstimator):
    """Shared input handling: CSR or dense float64 features, integer labels."""

    def _validate_fit(self, X, y, min_classes=1):
        try:
            X, y = check_X_y(X, y, accept_sparse="csr", dtype=np.float64)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        self.classes_, y_idx = np.unique(y, return_inverse=True)
        if len(self.classes_) < min_classes:
            raise TrainingError(f"need at least {min_classes} classes, got {len(self.classes_)}")
        self.n_features_in_ = X.shape[1]
        return X, y_idx

    def _validate_predict(self, X):
        check_is_fitted(self, "classes_")
        try:
            X = check_array(X, accept_sparse="csr", dtype=np.float64)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        if X.shape[1] != self.n_features_in_:
            raise DataError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return X

    def predict(self, X):
        scores = self.decision_function(X)
        return self.classes_[np.argmax(scores, axis=1)]


def as_rows(x):
    """Promote a single vector to a 1-row matrix."""
    if sp.issparse(x):
        return x
    x = np.asarray(x, dtype=np.float64)
    return x[None, :] if x.ndim == 1 else x


def softmax_rows(scores):
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)
