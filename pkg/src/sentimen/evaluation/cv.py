"""Stratified k-fold cross-validation with fold-local vectorizing and balancing."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import clone

from ..exceptions import ConfigError, DataError, StratificationError
from ..rng import DEFAULT_SEED, derive_seed, make_rng
from .metrics import N_CLASSES, EvaluationReport, evaluate_predictions

THREADS_ENV = "SENTIMEN_THREADS"

MEAN_FIELDS = (
    "accuracy", "auc", "weighted_precision", "weighted_recall", "weighted_f1",
    "macro_precision", "macro_recall", "macro_f1", "kappa",
)


@dataclass
class PipelineSpec:
    """Estimators cloned and fitted afresh in every fold.

    ``vectorizer`` turns the raw fold data (e.g. token lists) into features
    and is fitted on the training portion only; ``balancer`` needs a
    ``fit_resample`` method and only ever sees training rows.
    """

    classifier: object
    vectorizer: object = None
    balancer: object = None
    name: str = "model"


@dataclass
class FoldResult:
    fold: int
    seed: int
    report: EvaluationReport
    n_train: int
    n_test: int
    feature_names: list | None = None
    model: object = None


@dataclass
class CvResult:
    name: str
    folds: list
    assignments: np.ndarray
    seed: int
    mean: dict = field(default_factory=dict)

    @property
    def reports(self):
        return [f.report for f in self.folds]


def stratified_folds(y, n_folds=5, seed=DEFAULT_SEED):
    """Fold id per sample.

    Each class is shuffled and dealt round-robin; the dealing position
    carries over between classes so fold sizes differ by at most one.
    """
    y = np.asarray(y)
    if n_folds < 2:
        raise ConfigError(f"need at least 2 folds, got {n_folds}")
    rng = make_rng(seed)
    out = np.empty(len(y), dtype=np.int64)
    offset = 0
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        if len(idx) < n_folds:
            raise StratificationError(cls, f"class {cls} has {len(idx)} samples, fewer than {n_folds} folds")
        perm = idx[rng.permutation(len(idx))]
        out[perm] = (offset + np.arange(len(idx))) % n_folds
        offset = (offset + len(idx)) % n_folds
    return out


def _take(X, idx):
    if isinstance(X, (list, tuple)):
        return [X[i] for i in idx]
    return X[idx]


def _with_seed(est, seed):
    est = clone(est)
    if "random_state" in est.get_params(deep=False):
        est.set_params(random_state=seed)
    return est


def _full_proba(clf, Xt, n_classes):
    if not hasattr(clf, "predict_proba"):
        return None
    P = np.zeros((Xt.shape[0], n_classes))
    P[:, np.asarray(clf.classes_, dtype=np.int64)] = clf.predict_proba(Xt)
    return P


def run_fold(X, y, train_idx, test_idx, spec, seed, keep_model=False, n_classes=N_CLASSES):
    Xtr, Xte = _take(X, train_idx), _take(X, test_idx)
    ytr, yte = y[train_idx], y[test_idx]
    names = None
    if spec.vectorizer is not None:
        vec = clone(spec.vectorizer).fit(Xtr)
        Xtr, Xte = vec.transform(Xtr), vec.transform(Xte)
        if hasattr(vec, "get_feature_names_out"):
            names = list(vec.get_feature_names_out())
    if spec.balancer is not None:
        Xtr, ytr = _with_seed(spec.balancer, seed).fit_resample(Xtr, ytr)
    clf = _with_seed(spec.classifier, seed).fit(Xtr, ytr)
    pred = clf.predict(Xte)
    rep = evaluate_predictions(yte, pred, _full_proba(clf, Xte, n_classes), n_classes)
    return rep, names, (clf if keep_model else None)


def mean_metrics(reports):
    out = {}
    for name in MEAN_FIELDS:
        vals = [getattr(r, name) for r in reports]
        out[name] = None if any(v is None for v in vals) else float(np.mean(vals))
    return out


def resolve_threads(n_jobs):
    if n_jobs is None:
        n_jobs = int(os.environ.get(THREADS_ENV, "1"))
    return max(1, int(n_jobs))


def cross_validate(X, y, spec, folds=5, seed=DEFAULT_SEED, n_jobs=1, keep_models=False):
    """Stratified ``folds``-fold CV of ``spec``; fold ``k`` uses seed ``derive_seed(seed, k)``.

    Fold results do not depend on ``n_jobs``.
    """
    y = np.asarray(y, dtype=np.int64)
    n = len(X) if isinstance(X, (list, tuple)) else X.shape[0]
    if n != len(y):
        raise DataError(f"{n} samples but {len(y)} labels")
    assign = stratified_folds(y, folds, seed)

    def one(k):
        test_idx = np.flatnonzero(assign == k)
        train_idx = np.flatnonzero(assign != k)
        fold_seed = derive_seed(seed, k)
        rep, names, model = run_fold(X, y, train_idx, test_idx, spec, fold_seed, keep_models)
        return FoldResult(k, fold_seed, rep, len(train_idx), len(test_idx), names, model)

    n_jobs = resolve_threads(n_jobs)
    if n_jobs == 1:
        results = [one(k) for k in range(folds)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(one, range(folds)))
    return CvResult(spec.name, results, assign, seed, mean_metrics([r.report for r in results]))
