"""Stateless forward/backward building blocks."""

from __future__ import annotations

from enum import Enum
from typing import Tuple, Union

import numpy as np

from ..errors import ShapeError

PROBABILITY_FLOOR = 1e-12
INIT_SCALE = 0.05


class Mode(str, Enum):
    TRAIN = "train"
    INFER = "infer"


def uniform_init(
    rng: np.random.Generator,
    shape: Union[int, Tuple[int, ...]],
    scale: float = INIT_SCALE,
    dtype: np.dtype | str = np.float64,
) -> np.ndarray:
    return rng.uniform(-scale, scale, size=shape).astype(dtype, copy=False)


def _check_indices(indices: np.ndarray, rows: int) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size and (int(indices.min()) < 0 or int(indices.max()) >= rows):
        raise ShapeError(f"embedding index out of range for a table with {rows} rows")
    return indices


def embed(indices: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Row lookup; output has shape ``indices.shape + (dim,)``."""
    indices = _check_indices(indices, table.shape[0])
    return table[indices]


def embed_backward(indices: np.ndarray, upstream: np.ndarray, table_grad: np.ndarray) -> np.ndarray:
    """Scatter-add ``upstream`` into the rows of ``table_grad`` (repeated indices sum)."""
    indices = _check_indices(indices, table_grad.shape[0])
    if upstream.shape != indices.shape + table_grad.shape[1:]:
        raise ShapeError(
            f"upstream gradient shape {upstream.shape} does not match indices {indices.shape}"
        )
    np.add.at(table_grad, indices.reshape(-1), upstream.reshape(-1, table_grad.shape[1]))
    return table_grad


def softmax(logits: np.ndarray, axis: int = -1) -> np.ndarray:
    """Max-shifted softmax along ``axis``.

    Outputs are strictly positive while logit gaps stay below roughly 745; wider
    gaps underflow to exactly 0.0, which ``cross_entropy`` absorbs with its
    probability floor.
    """
    shifted = logits - np.max(logits, axis=axis, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=axis, keepdims=True)


def dense(h: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Affine map with ``weight`` laid out as ``(classes, hidden)``."""
    if h.shape[-1] != weight.shape[1] or bias.shape != (weight.shape[0],):
        raise ShapeError(
            f"dense layer shapes disagree: h {h.shape}, W {weight.shape}, b {bias.shape}"
        )
    return h @ weight.T + bias


def dense_softmax(h: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    return softmax(dense(h, weight, bias))


def _check_gold(probs: np.ndarray, gold: np.ndarray) -> np.ndarray:
    gold = np.asarray(gold, dtype=np.int64)
    classes = probs.shape[-1]
    if gold.size and (int(gold.min()) < 0 or int(gold.max()) >= classes):
        raise ShapeError(f"gold class out of range for {classes} classes")
    return gold


def cross_entropy(probs: np.ndarray, gold: Union[int, np.ndarray]) -> Union[float, np.ndarray]:
    """``-log p[gold]`` with the probability floored at 1e-12.

    A single distribution gives a float; a ``(B, C)`` batch gives ``(B,)`` losses.
    """
    gold_array = _check_gold(probs, np.asarray(gold))
    if probs.ndim == 1:
        return float(-np.log(max(float(probs[int(gold_array)]), PROBABILITY_FLOOR)))
    picked = probs[np.arange(probs.shape[0]), gold_array]
    return -np.log(np.maximum(picked, PROBABILITY_FLOOR))


def softmax_cross_entropy_backward(probs: np.ndarray, gold: np.ndarray) -> np.ndarray:
    """Gradient of the summed cross-entropy with respect to the logits."""
    gold = _check_gold(probs, gold)
    grad = probs.copy()
    if grad.ndim == 1:
        grad[int(gold)] -= 1.0
    else:
        grad[np.arange(grad.shape[0]), gold] -= 1.0
    return grad


def dropout_mask(
    shape: Tuple[int, ...],
    rate: float,
    rng: np.random.Generator,
    dtype: np.dtype | str = np.float64,
) -> np.ndarray:
    """Inverted-dropout mask: zeros with probability ``rate``, survivors ``1 / (1 - rate)``."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must lie in [0, 1), got {rate}")
    keep = rng.random(shape) >= rate
    return keep.astype(dtype) / (1.0 - rate)


def dropout(
    x: np.ndarray,
    rate: float = 0.5,
    mode: Mode | str = Mode.TRAIN,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must lie in [0, 1), got {rate}")
    if Mode(mode) is Mode.INFER or rate == 0.0:
        return x
    generator = rng if rng is not None else np.random.default_rng()
    return x * dropout_mask(x.shape, rate, generator, x.dtype)


__all__ = [
    "INIT_SCALE",
    "Mode",
    "PROBABILITY_FLOOR",
    "cross_entropy",
    "dense",
    "dense_softmax",
    "dropout",
    "dropout_mask",
    "embed",
    "embed_backward",
    "softmax",
    "softmax_cross_entropy_backward",
    "uniform_init",
]
