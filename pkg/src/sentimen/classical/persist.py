"""Save/load classical models in the binary container (float64 payload)."""

import numpy as np

from ..container import read_container, write_container
from ..exceptions import ConfigError
from .mnb import MultinomialNB
from .svm import LinearSVM
from .tree import DecisionTree

KIND = "sentimen.classical"

_ARRAYS = {
    "mnb": ("classes_", "class_count_", "feature_count_", "class_log_prior_", "feature_log_prob_"),
    "svm": ("classes_", "coef_", "intercept_"),
    "tree": ("classes_", "feature_", "threshold_", "children_left_", "children_right_", "value_", "node_depth_"),
}
_TYPES = {"mnb": MultinomialNB, "svm": LinearSVM, "tree": DecisionTree}
_INT_ARRAYS = {"classes_", "feature_", "children_left_", "children_right_", "node_depth_"}


def model_type(model):
    for name, cls in _TYPES.items():
        if isinstance(model, cls):
            return name
    raise ConfigError(f"cannot serialize {type(model).__name__}")


def save_model(path, model):
    mtype = model_type(model)
    meta = {
        "model_type": mtype,
        "n_features": int(model.n_features_in_),
        "n_classes": len(model.classes_),
        "hyperparameters": model.get_params(),
    }
    arrays = {name: getattr(model, name) for name in _ARRAYS[mtype]}
    write_container(path, KIND, meta, arrays, dtype="<f8")


def load_model(path):
    header, arrays = read_container(path, KIND)
    mtype = header.get("model_type")
    if mtype not in _TYPES:
        raise ConfigError(f"{path}: unknown model type {mtype!r}")
    model = _TYPES[mtype](**header["hyperparameters"])
    for name in _ARRAYS[mtype]:
        a = arrays[name]
        setattr(model, name, a.astype(np.int64) if name in _INT_ARRAYS else a)
    model.n_features_in_ = int(header["n_features"])
    return model
