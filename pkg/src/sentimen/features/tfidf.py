"""TF-IDF weighting: raw counts x smoothed idf, L2-normalized rows.

``idf(t) = ln((1 + N) / (1 + df(t))) + 1`` where ``N`` is the number of
fitting documents.  The ``max_features`` terms with the highest total corpus
frequency are kept (ties by token text) and stored in lexicographic order.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..exceptions import ConfigError, DataError
from .vocab import _check_version

TFIDF_FORMAT = "sentimen.tfidf"
TFIDF_VERSION = 1


@dataclass
class TfIdfModel:
    terms: list
    df: list
    idf: np.ndarray
    n_docs: int

    def __post_init__(self):
        self.idf = np.asarray(self.idf, dtype=np.float64)
        self.index = {t: i for i, t in enumerate(self.terms)}
        if len(self.index) != len(self.terms):
            raise DataError("TF-IDF terms must be unique")

    @property
    def dimension(self):
        return len(self.terms)

    def to_dict(self):
        # repr() round-trips float64 exactly
        return {
            "version": TFIDF_VERSION,
            "format": TFIDF_FORMAT,
            "n_docs": int(self.n_docs),
            "terms": list(self.terms),
            "df": [int(d) for d in self.df],
            "idf": [float(v) for v in self.idf],
        }

    @classmethod
    def from_dict(cls, payload):
        _check_version(payload, TFIDF_FORMAT, TFIDF_VERSION)
        return cls(list(payload["terms"]), list(payload["df"]),
                   np.array(payload["idf"], dtype=np.float64), payload["n_docs"])

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class SparseVector:
    indices: tuple
    weights: tuple
    dimension: int

    def to_dense(self):
        out = np.zeros(self.dimension)
        out[list(self.indices)] = self.weights
        return out


def fit_tfidf(corpus, max_features=3000):
    if max_features is not None and max_features < 1:
        raise ConfigError(f"max_features must be positive, got {max_features}")
    corpus = [list(doc) for doc in corpus]
    if not corpus:
        raise DataError("cannot fit TF-IDF on an empty corpus")
    total = Counter(tok for doc in corpus for tok in doc)
    ranked = sorted(total, key=lambda t: (-total[t], t))
    if max_features is not None:
        ranked = ranked[:max_features]
    terms = sorted(ranked)
    df_counter = Counter(tok for doc in corpus for tok in set(doc))
    df = [df_counter[t] for t in terms]
    n = len(corpus)
    idf = np.array([math.log((1 + n) / (1 + d)) + 1.0 for d in df])
    return TfIdfModel(terms, df, idf, n)


def transform_tfidf(tokens, model):
    counts = Counter(model.index[t] for t in tokens if t in model.index)
    idx = sorted(counts)
    w = np.array([counts[i] * model.idf[i] for i in idx], dtype=np.float64)
    norm = math.sqrt(float(np.dot(w, w))) if len(w) else 0.0
    if norm > 0:
        w = w / norm
    return SparseVector(tuple(idx), tuple(float(x) for x in w), model.dimension)


def transform_corpus(corpus, model):
    """Vectorize many documents into a CSR matrix (rows L2-normalized)."""
    rows, cols = [], []
    n = 0
    for n, doc in enumerate(corpus, start=1):
        for tok in doc:
            j = model.index.get(tok)
            if j is not None:
                rows.append(n - 1)
                cols.append(j)
    data = np.ones(len(rows), dtype=np.float64)
    X = sp.csr_matrix((data, (rows, cols)), shape=(n, model.dimension))
    X.sum_duplicates()
    X.sort_indices()
    X.data *= model.idf[X.indices]
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    X.data *= np.repeat(scale, np.diff(X.indptr))
    return X


class TfidfVectorizer(TransformerMixin, BaseEstimator):
    """Estimator wrapper: ``fit`` on token lists, ``transform`` to CSR.

    Parameters
    ----------
    max_features : int or None, default=3000
    """

    def __init__(self, max_features=3000):
        self.max_features = max_features

    def fit(self, X, y=None):
        self.model_ = fit_tfidf(X, self.max_features)
        self.vocabulary_ = dict(self.model_.index)
        self.idf_ = self.model_.idf
        return self

    def transform(self, X):
        check_is_fitted(self, "model_")
        return transform_corpus(X, self.model_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "model_")
        return np.array(self.model_.terms, dtype=object)

    @classmethod
    def from_model(cls, model):
        vec = cls(max_features=None)
        vec.model_ = model
        vec.vocabulary_ = dict(model.index)
        vec.idf_ = model.idf
        return vec
