"""CSV/JSON writers for reports, cross-validation tables and confusion matrices."""

import csv
import json

from ..corpus import LABEL_NAMES

CV_COLUMNS = (
    "model", "fold", "Accuracy", "AUC", "Recall", "Precision", "F1-Score", "Kappa",
    "Macro-Recall", "Macro-Precision", "Macro-F1",
)
_CV_FIELDS = (
    "accuracy", "auc", "weighted_recall", "weighted_precision", "weighted_f1", "kappa",
    "macro_recall", "macro_precision", "macro_f1",
)


def _fmt(v):
    return "" if v is None else f"{v:.6f}"


def cv_rows(results):
    """One row per model x fold, then a ``mean`` row per model."""
    rows = []
    for res in results:
        for fold in res.folds:
            rows.append([res.name, str(fold.fold), *(_fmt(getattr(fold.report, f)) for f in _CV_FIELDS)])
        rows.append([res.name, "mean", *(_fmt(res.mean[f]) for f in _CV_FIELDS)])
    return rows


def write_cv_csv(path, results):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CV_COLUMNS)
        w.writerows(cv_rows(results))


def cv_to_dict(results):
    return {
        "version": 1,
        "models": [
            {
                "name": res.name,
                "seed": res.seed,
                "folds": [
                    {"fold": f.fold, "seed": f.seed, "n_train": f.n_train, "n_test": f.n_test, **f.report.to_dict()}
                    for f in res.folds
                ],
                "mean": res.mean,
            }
            for res in results
        ],
    }


def write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def write_confusion_csv(path, matrix, class_names=LABEL_NAMES):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["true/predicted", *class_names])
        for name, row in zip(class_names, matrix.counts.tolist()):
            w.writerow([name, *row])
