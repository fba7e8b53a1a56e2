"""Confusion matrices, P/R/F1 aggregates, Cohen's kappa and one-vs-rest AUC."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from ..corpus import LABEL_NAMES
from ..exceptions import DataError

log = logging.getLogger(__name__)

N_CLASSES = 3


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are true classes, columns predicted classes."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DataError(f"confusion matrix must be square, got shape {c.shape}")
        if (c < 0).any():
            raise DataError("confusion matrix entries must be non-negative")
        object.__setattr__(self, "counts", c.astype(np.int64))

    @property
    def total(self):
        return int(self.counts.sum())


def confusion(y_true, y_pred, n_classes=N_CLASSES):
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise DataError(f"label arrays differ in shape: {y_true.shape} vs {y_pred.shape}")
    for name, arr in (("true", y_true), ("predicted", y_pred)):
        if arr.size and (arr.min() < 0 or arr.max() >= n_classes):
            raise DataError(f"{name} labels must lie in 0..{n_classes - 1}")
    flat = np.bincount(y_true * n_classes + y_pred, minlength=n_classes * n_classes)
    return ConfusionMatrix(flat.reshape(n_classes, n_classes))


@dataclass
class EvaluationReport:
    confusion: ConfusionMatrix
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    accuracy: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    kappa: float
    auc: float | None = None
    warnings: list = field(default_factory=list)

    def to_dict(self, class_names=LABEL_NAMES):
        per_class = {
            name: {
                "precision": float(self.precision[i]),
                "recall": float(self.recall[i]),
                "f1": float(self.f1[i]),
                "support": int(self.support[i]),
            }
            for i, name in enumerate(class_names)
        }
        return {
            "confusion_matrix": self.confusion.counts.tolist(),
            "per_class": per_class,
            "accuracy": self.accuracy,
            "weighted": {"precision": self.weighted_precision, "recall": self.weighted_recall, "f1": self.weighted_f1},
            "macro": {"precision": self.macro_precision, "recall": self.macro_recall, "f1": self.macro_f1},
            "kappa": self.kappa,
            "auc": self.auc,
            "warnings": list(self.warnings),
        }


def _safe_ratio(num, den, what, notes):
    out = np.zeros_like(num, dtype=np.float64)
    nz = den > 0
    out[nz] = num[nz] / den[nz]
    for i in np.flatnonzero(~nz):
        notes.append(f"{what} undefined for class {i} (zero denominator); set to 0")
    return out


def report(matrix, auc=None):
    """Metrics from a confusion matrix; undefined cells become 0 with a note."""
    if not isinstance(matrix, ConfusionMatrix):
        matrix = ConfusionMatrix(np.asarray(matrix))
    cm = matrix.counts.astype(np.float64)
    n = cm.sum()
    if n <= 0:
        raise DataError("cannot report on an empty confusion matrix")
    notes = []
    tp = np.diag(cm)
    predicted = cm.sum(axis=0)
    support = cm.sum(axis=1)
    precision = _safe_ratio(tp, predicted, "precision", notes)
    recall = _safe_ratio(tp, support, "recall", notes)
    pr = precision + recall
    f1 = np.zeros_like(pr)
    nz = pr > 0
    f1[nz] = 2.0 * precision[nz] * recall[nz] / pr[nz]
    p_o = tp.sum() / n
    p_e = float((predicted * support).sum() / (n * n))
    kappa = 0.0 if p_e == 1.0 else (p_o - p_e) / (1.0 - p_e)
    for note in notes:
        log.debug(note)
    return EvaluationReport(
        confusion=matrix,
        precision=precision,
        recall=recall,
        f1=f1,
        support=support.astype(np.int64),
        accuracy=float(p_o),
        weighted_precision=float(support @ precision / n),
        weighted_recall=float(support @ recall / n),
        weighted_f1=float(support @ f1 / n),
        macro_precision=float(precision.mean()),
        macro_recall=float(recall.mean()),
        macro_f1=float(f1.mean()),
        kappa=float(kappa),
        auc=auc,
        warnings=notes,
    )


def auc_ovr(y_true, proba, notes=None):
    """Macro one-vs-rest Mann-Whitney AUC over the classes present in ``y_true``.

    Column ``c`` of ``proba`` scores class ``c``; tied scores count one half.
    A class without positives (or without negatives) is skipped and a note
    is appended to ``notes``.
    """
    y = np.asarray(y_true, dtype=np.int64)
    P = np.asarray(proba, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != y.shape[0]:
        raise DataError(f"probabilities of shape {P.shape} do not match {y.shape[0]} labels")
    if P.size and np.abs(P.sum(axis=1) - 1.0).max() > 1e-6:
        raise DataError("probability rows must sum to 1")
    notes = [] if notes is None else notes
    aucs = []
    for c in range(P.shape[1]):
        pos = y == c
        n_pos, n_neg = int(pos.sum()), int((~pos).sum())
        if n_pos == 0 or n_neg == 0:
            msg = f"AUC: class {c} has no {'positive' if n_pos == 0 else 'negative'} samples; excluded"
            log.debug(msg)
            notes.append(msg)
            continue
        ranks = rankdata(P[:, c])
        aucs.append((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))
    if not aucs:
        raise DataError("AUC undefined: fewer than two classes in the true labels")
    return float(np.mean(aucs))


def evaluate_predictions(y_true, y_pred, proba=None, n_classes=N_CLASSES):
    """Report with AUC when class probabilities are available."""
    notes = []
    auc = None
    if proba is not None:
        auc = auc_ovr(y_true, proba, notes)
    rep = report(confusion(y_true, y_pred, n_classes), auc=auc)
    rep.warnings.extend(notes)
    return rep
