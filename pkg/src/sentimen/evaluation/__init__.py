"""Metrics and the stratified cross-validation harness."""

from .cv import CvResult, FoldResult, PipelineSpec, cross_validate, mean_metrics, stratified_folds
from .export import CV_COLUMNS, cv_rows, cv_to_dict, write_confusion_csv, write_cv_csv, write_json
from .metrics import (
    ConfusionMatrix,
    EvaluationReport,
    auc_ovr,
    confusion,
    evaluate_predictions,
    report,
)

__all__ = [
    "CV_COLUMNS", "ConfusionMatrix", "CvResult", "EvaluationReport", "FoldResult", "PipelineSpec",
    "auc_ovr", "confusion", "cross_validate", "cv_rows", "cv_to_dict", "evaluate_predictions",
    "mean_metrics", "report", "stratified_folds", "write_confusion_csv", "write_cv_csv", "write_json",
]
