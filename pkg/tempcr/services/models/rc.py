"""LSTM relation classifier over token, POS and position-feature embeddings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..candidates import CONTAINS_CLASS, RCBatch, RCInput, collate
from ..errors import ShapeError
from ..neural.layers import (
    Mode,
    cross_entropy,
    dense_softmax,
    dropout_mask,
    embed,
    embed_backward,
    softmax_cross_entropy_backward,
    uniform_init,
)
from ..neural.lstm import LSTMCache, LSTMParams, lstm_backward, lstm_forward, register_lstm
from ..neural.params import ParameterStore

TOKEN_TABLE = "W_em_token"
POS_TABLE = "W_em_pos"
PF1_TABLE = "W_em_pf1"
PF2_TABLE = "W_em_pf2"
CLASSIFIER_WEIGHT = "W_p"
CLASSIFIER_BIAS = "b_p"
NUM_CLASSES = 2

Reduction = str


@dataclass(frozen=True)
class RCDimensions:
    vocab_size: int
    pos_size: int
    embed_dim: int = 25
    pos_dim: int = 40
    pf_dim: int = 10
    hidden: int = 100
    d_clip: int = 40

    @property
    def input_size(self) -> int:
        return self.embed_dim + self.pos_dim + 2 * self.pf_dim

    @property
    def pf_rows(self) -> int:
        return 2 * self.d_clip + 1


@dataclass
class RCCache:
    batch: RCBatch
    x_mask: Optional[np.ndarray]
    h_mask: Optional[np.ndarray]
    h_dropped: np.ndarray
    lstm: LSTMCache
    probs: np.ndarray


def ensure_parameter(
    store: ParameterStore,
    name: str,
    shape: Tuple[int, ...],
    init: Callable[[], np.ndarray],
) -> None:
    """Register ``name`` unless it already exists with the same shape."""
    if name in store:
        existing = store.get(name).shape
        if existing != shape:
            raise ShapeError(f"'{name}' already registered with shape {existing}, expected {shape}")
        return
    store.register(name, init())


class RCModel:
    """softmax(W_p h_T + b_p) over an LSTM of concatenated per-token embeddings."""

    def __init__(
        self,
        store: ParameterStore,
        dims: RCDimensions,
        rng: Optional[np.random.Generator] = None,
        dropout: float = 0.5,
    ) -> None:
        self.store = store
        self.dims = dims
        self.dropout = dropout
        init_rng = rng if rng is not None else np.random.default_rng(0)

        ensure_parameter(
            store, TOKEN_TABLE, (dims.vocab_size, dims.embed_dim),
            lambda: uniform_init(init_rng, (dims.vocab_size, dims.embed_dim)),
        )
        ensure_parameter(
            store, POS_TABLE, (dims.pos_size, dims.pos_dim),
            lambda: uniform_init(init_rng, (dims.pos_size, dims.pos_dim)),
        )
        for name in (PF1_TABLE, PF2_TABLE):
            ensure_parameter(
                store, name, (dims.pf_rows, dims.pf_dim),
                lambda: uniform_init(init_rng, (dims.pf_rows, dims.pf_dim)),
            )
        if "lstm_Wx" not in store:
            register_lstm(store, dims.input_size, dims.hidden, init_rng)
        ensure_parameter(
            store, CLASSIFIER_WEIGHT, (NUM_CLASSES, dims.hidden),
            lambda: uniform_init(init_rng, (NUM_CLASSES, dims.hidden)),
        )
        ensure_parameter(
            store, CLASSIFIER_BIAS, (NUM_CLASSES,), lambda: np.zeros(NUM_CLASSES)
        )
        self.lstm_params().check()

    # Parameter access -----------------------------------------------------------
    def lstm_params(self) -> LSTMParams:
        return LSTMParams.from_store(self.store)

    def parameter_names(self) -> List[str]:
        return [
            TOKEN_TABLE,
            POS_TABLE,
            PF1_TABLE,
            PF2_TABLE,
            "lstm_Wx",
            "lstm_Wh",
            "lstm_b",
            CLASSIFIER_WEIGHT,
            CLASSIFIER_BIAS,
        ]

    def as_batch(self, inputs: Union[RCBatch, Sequence[RCInput]], labels=None) -> RCBatch:
        if isinstance(inputs, RCBatch):
            return inputs
        return collate(inputs, labels, d_clip=self.dims.d_clip)

    # Forward / backward ---------------------------------------------------------
    def forward(
        self,
        batch: RCBatch,
        mode: Mode | str = Mode.INFER,
        rng: Optional[np.random.Generator] = None,
    ) -> Tuple[np.ndarray, RCCache]:
        """Class probabilities ``(B, 2)``; column 0 is CONTAINS."""
        store = self.store
        x = np.concatenate(
            [
                embed(batch.tokens, store.get(TOKEN_TABLE).value),
                embed(batch.pos, store.get(POS_TABLE).value),
                embed(batch.pf1, store.get(PF1_TABLE).value),
                embed(batch.pf2, store.get(PF2_TABLE).value),
            ],
            axis=-1,
        )
        training = Mode(mode) is Mode.TRAIN and self.dropout > 0.0
        x_mask = h_mask = None
        if training:
            if rng is None:
                raise ShapeError("train-mode forward needs a dropout generator")
            x_mask = dropout_mask(x.shape, self.dropout, rng, x.dtype)
            x = x * x_mask
        h_last, lstm_cache = lstm_forward(x, self.lstm_params(), batch.lengths)
        if training:
            h_mask = dropout_mask(h_last.shape, self.dropout, rng, h_last.dtype)  # type: ignore[arg-type]
            h_last = h_last * h_mask
        probs = dense_softmax(
            h_last, store.get(CLASSIFIER_WEIGHT).value, store.get(CLASSIFIER_BIAS).value
        )
        return probs, RCCache(
            batch=batch, x_mask=x_mask, h_mask=h_mask, h_dropped=h_last, lstm=lstm_cache, probs=probs
        )

    def backward(self, cache: RCCache, scale: float = 1.0) -> None:
        """Accumulate ``scale`` times the gradient of the summed batch cross-entropy."""
        store = self.store
        batch = cache.batch
        dlogits = softmax_cross_entropy_backward(cache.probs, batch.labels) * scale
        weight = store.get(CLASSIFIER_WEIGHT)
        weight.grad += dlogits.T @ cache.h_dropped
        store.get(CLASSIFIER_BIAS).grad += dlogits.sum(axis=0)

        dh = dlogits @ weight.value
        if cache.h_mask is not None:
            dh = dh * cache.h_mask
        grads = lstm_backward(cache.lstm, dh)
        store.get("lstm_Wx").grad += grads.dWx
        store.get("lstm_Wh").grad += grads.dWh
        store.get("lstm_b").grad += grads.db

        dx = grads.dx
        if cache.x_mask is not None:
            dx = dx * cache.x_mask
        dims = self.dims
        bounds = np.cumsum([dims.embed_dim, dims.pos_dim, dims.pf_dim])
        d_token, d_pos, d_pf1, d_pf2 = np.split(dx, bounds, axis=-1)
        embed_backward(batch.tokens, d_token, store.get(TOKEN_TABLE).grad)
        embed_backward(batch.pos, d_pos, store.get(POS_TABLE).grad)
        embed_backward(batch.pf1, d_pf1, store.get(PF1_TABLE).grad)
        embed_backward(batch.pf2, d_pf2, store.get(PF2_TABLE).grad)

    def loss(
        self,
        batch: RCBatch,
        mode: Mode | str = Mode.INFER,
        rng: Optional[np.random.Generator] = None,
        reduction: Reduction = "sum",
        backward: bool = False,
        weight: float = 1.0,
    ) -> float:
        probs, cache = self.forward(batch, mode, rng)
        losses = cross_entropy(probs, batch.labels)
        scale = reduction_scale(reduction, len(batch))
        if backward:
            self.backward(cache, scale * weight)
        return float(np.sum(losses) * scale)

    def predict_proba(
        self, inputs: Union[RCBatch, Sequence[RCInput]], chunk_size: int = 1024
    ) -> np.ndarray:
        """Inference-mode probabilities, computed in chunks."""
        if isinstance(inputs, RCBatch):
            return self.forward(inputs, Mode.INFER)[0]
        if not inputs:
            return np.zeros((0, NUM_CLASSES), dtype=self.store.dtype)
        parts = [
            self.forward(self.as_batch(inputs[start : start + chunk_size]), Mode.INFER)[0]
            for start in range(0, len(inputs), chunk_size)
        ]
        return np.concatenate(parts, axis=0)


def reduction_scale(reduction: Reduction, count: int) -> float:
    if reduction == "sum":
        return 1.0
    if reduction == "mean":
        return 1.0 / count
    raise ValueError(f"Unknown reduction '{reduction}'; expected 'sum' or 'mean'")


def rc_forward(
    model: RCModel,
    item: RCInput,
    mode: Mode | str = Mode.INFER,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Probability pair (CONTAINS, NONE) for one input."""
    if len(item) == 0:
        raise ShapeError("RC input sequence is empty")
    probs, _ = model.forward(model.as_batch([item]), mode, rng)
    return probs[0]


def rc_loss(
    model: RCModel,
    inputs: Union[RCBatch, Sequence[RCInput]],
    labels: Optional[Sequence[int]] = None,
    reduction: Reduction = "sum",
) -> float:
    """Inference-mode cross-entropy over a labelled batch."""
    batch = model.as_batch(inputs, labels)
    if len(batch) == 0:
        raise ShapeError("rc_loss needs a non-empty batch")
    return model.loss(batch, Mode.INFER, reduction=reduction)


def contains_probability(probs: np.ndarray) -> np.ndarray:
    return probs[..., CONTAINS_CLASS]


__all__ = [
    "CLASSIFIER_BIAS",
    "CLASSIFIER_WEIGHT",
    "NUM_CLASSES",
    "PF1_TABLE",
    "PF2_TABLE",
    "POS_TABLE",
    "RCCache",
    "RCDimensions",
    "RCModel",
    "TOKEN_TABLE",
    "contains_probability",
    "ensure_parameter",
    "reduction_scale",
    "rc_forward",
    "rc_loss",
]
