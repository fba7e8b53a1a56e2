"""From-scratch BiLSTM sentiment classifier (numpy)."""

from .bilstm import (
    BilstmParams,
    bilstm_backward,
    bilstm_forward,
    count_parameters,
    cross_entropy,
    init_params,
    param_shapes,
    predict_bilstm,
    softmax,
)
from .train import (
    AdamState,
    BiLSTMClassifier,
    EarlyStopping,
    TrainConfig,
    TrainHistory,
    adam_step,
    encode_docs,
    evaluate_loss,
    load_checkpoint,
    save_checkpoint,
    train_arrays,
    train_bilstm,
)

__all__ = [
    "AdamState", "BiLSTMClassifier", "BilstmParams", "EarlyStopping", "TrainConfig", "TrainHistory",
    "adam_step", "encode_docs", "bilstm_backward", "bilstm_forward", "count_parameters", "cross_entropy",
    "evaluate_loss", "init_params", "load_checkpoint", "param_shapes", "predict_bilstm",
    "save_checkpoint", "softmax", "train_arrays", "train_bilstm",
]
