"""Standalone skip-gram pretraining of the token embeddings."""

from __future__ import annotations

import logging

import numpy as np

from ..corpus.sgdata import SgDataset
from ..errors import TrainingError
from ..models.rc import TOKEN_TABLE
from ..models.sg import SGModel
from ..neural.optim import AdamState, adam_step
from ..neural.params import ParameterStore
from .sampling import epoch_batches

logger = logging.getLogger(__name__)


def pretrain_sg(
    dataset: SgDataset,
    vocab_size: int,
    embed_dim: int,
    epochs: int,
    seed: int,
    batch_size: int = 1024,
    learning_rate: float = 0.001,
    dtype: str = "float64",
) -> np.ndarray:
    """Train an SG model from random initialisation and return its token table."""
    if len(dataset) == 0:
        raise TrainingError("skip-gram dataset is empty")
    if epochs < 0:
        raise TrainingError("pretraining epochs must be non-negative")
    init_stream, shuffle_stream = np.random.SeedSequence(seed).spawn(2)
    store = ParameterStore(dtype)
    model = SGModel(
        store,
        vocab_size=vocab_size,
        embed_dim=embed_dim,
        context_size=dataset.context_size,
        rng=np.random.default_rng(init_stream),
    )
    state = AdamState(lr=learning_rate)
    shuffle_rng = np.random.default_rng(shuffle_stream)
    for epoch in range(1, epochs + 1):
        total = 0.0
        batches = epoch_batches(len(dataset), batch_size, shuffle_rng)
        for indices in batches:
            centers, contexts = dataset.take(indices)
            total += model.loss(centers, contexts, reduction="mean", backward=True)
            adam_step(store, state)
        logger.info(
            "SG pretraining epoch %d/%d: mean loss %.4f over %d batches",
            epoch,
            epochs,
            total / len(batches),
            len(batches),
        )
    return store.get(TOKEN_TABLE).value.copy()


__all__ = ["pretrain_sg"]
