"""Explicit-gradient numpy neural core."""

from .embeddings import load_embeddings, save_embeddings
from .gradcheck import grad_check, max_relative_error
from .layers import (
    Mode,
    cross_entropy,
    dense_softmax,
    dropout,
    dropout_mask,
    embed,
    embed_backward,
    softmax,
    uniform_init,
)
from .lstm import LSTMGrads, LSTMParams, lstm_backward, lstm_forward, register_lstm
from .optim import AdamState, adam_step
from .params import Parameter, ParameterStore

__all__ = [
    "AdamState",
    "LSTMGrads",
    "LSTMParams",
    "Mode",
    "Parameter",
    "ParameterStore",
    "adam_step",
    "cross_entropy",
    "dense_softmax",
    "dropout",
    "dropout_mask",
    "embed",
    "embed_backward",
    "grad_check",
    "load_embeddings",
    "lstm_backward",
    "lstm_forward",
    "max_relative_error",
    "register_lstm",
    "save_embeddings",
    "softmax",
    "uniform_init",
]
