"""Skip-gram context predictor sharing the token embedding table."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..corpus.sgdata import SgDataset, SgPair
from ..errors import ShapeError
from ..neural.layers import (
    cross_entropy,
    embed,
    embed_backward,
    softmax,
    softmax_cross_entropy_backward,
    uniform_init,
)
from ..neural.params import ParameterStore
from .rc import TOKEN_TABLE, ensure_parameter, reduction_scale

SG_WEIGHT = "W_p_sg"
SG_BIAS = "b_p_sg"


@dataclass
class SGCache:
    centers: np.ndarray
    contexts: np.ndarray
    embedded: np.ndarray
    probs: np.ndarray


class SGModel:
    """softmax(W_p_sg (w · W_em_token) + b_p_sg) over the context vocabulary.

    ``W_em_token`` is looked up in the store, so an SG model built over an RC
    model's store trains the very same table.
    """

    def __init__(
        self,
        store: ParameterStore,
        vocab_size: int,
        embed_dim: int,
        context_size: int,
        rng: Optional[np.random.Generator] = None,
    ) -> None:
        self.store = store
        self.context_size = context_size
        init_rng = rng if rng is not None else np.random.default_rng(0)
        ensure_parameter(
            store, TOKEN_TABLE, (vocab_size, embed_dim),
            lambda: uniform_init(init_rng, (vocab_size, embed_dim)),
        )
        ensure_parameter(
            store, SG_WEIGHT, (context_size, embed_dim),
            lambda: uniform_init(init_rng, (context_size, embed_dim)),
        )
        ensure_parameter(store, SG_BIAS, (context_size,), lambda: np.zeros(context_size))

    def forward(self, centers: np.ndarray, contexts: np.ndarray) -> Tuple[np.ndarray, SGCache]:
        centers = np.asarray(centers, dtype=np.int64)
        contexts = np.asarray(contexts, dtype=np.int64)
        if centers.shape != contexts.shape or centers.ndim != 1:
            raise ShapeError("centers and contexts must be aligned 1-D index arrays")
        embedded = embed(centers, self.store.get(TOKEN_TABLE).value)
        logits = embedded @ self.store.get(SG_WEIGHT).value.T + self.store.get(SG_BIAS).value
        probs = softmax(logits)
        return probs, SGCache(centers=centers, contexts=contexts, embedded=embedded, probs=probs)

    def backward(self, cache: SGCache, scale: float = 1.0) -> None:
        dlogits = softmax_cross_entropy_backward(cache.probs, cache.contexts) * scale
        weight = self.store.get(SG_WEIGHT)
        weight.grad += dlogits.T @ cache.embedded
        self.store.get(SG_BIAS).grad += dlogits.sum(axis=0)
        embed_backward(cache.centers, dlogits @ weight.value, self.store.get(TOKEN_TABLE).grad)

    def loss(
        self,
        centers: np.ndarray,
        contexts: np.ndarray,
        reduction: str = "sum",
        backward: bool = False,
        weight: float = 1.0,
    ) -> float:
        probs, cache = self.forward(centers, contexts)
        losses = cross_entropy(probs, cache.contexts)
        scale = reduction_scale(reduction, len(cache.centers))
        if backward:
            self.backward(cache, scale * weight)
        return float(np.sum(losses) * scale)


def _as_arrays(
    batch: Union[SgDataset, Sequence[SgPair], Tuple[np.ndarray, np.ndarray]],
) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(batch, SgDataset):
        return batch.centers, batch.contexts
    if isinstance(batch, tuple) and len(batch) == 2 and isinstance(batch[0], np.ndarray):
        return batch  # type: ignore[return-value]
    pairs = list(batch)  # type: ignore[arg-type]
    return (
        np.asarray([pair.center for pair in pairs], dtype=np.int64),
        np.asarray([pair.context for pair in pairs], dtype=np.int64),
    )


def sg_loss(
    model: SGModel,
    batch: Union[SgDataset, Sequence[SgPair], Tuple[np.ndarray, np.ndarray]],
    reduction: str = "sum",
) -> float:
    """Cross-entropy of every (center, context) pair under the full softmax."""
    centers, contexts = _as_arrays(batch)
    if centers.size == 0:
        raise ShapeError("sg_loss needs a non-empty batch")
    return model.loss(centers, contexts, reduction=reduction)


__all__ = ["SGCache", "SGModel", "SG_BIAS", "SG_WEIGHT", "sg_loss"]
