"""Token-table initialisation from random values or a pretrained embedding file."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ..corpus.vocab import Vocabulary
from ..errors import ShapeError
from ..neural.embeddings import load_embeddings, save_embeddings
from ..neural.layers import uniform_init
from ..neural.params import ParameterStore
from .rc import TOKEN_TABLE

logger = logging.getLogger(__name__)

RANDOM_SOURCE = "random"


@dataclass(frozen=True)
class EmbeddingReport:
    source: str
    loaded: int
    missing: int
    missing_tokens: Tuple[str, ...] = field(default=(), repr=False)


def init_embeddings(
    store: ParameterStore,
    vocab: Vocabulary,
    source: Union[str, Path] = RANDOM_SOURCE,
    rng: Optional[np.random.Generator] = None,
) -> EmbeddingReport:
    """Fill ``W_em_token`` either uniformly in [-0.05, 0.05] or from a word2vec text file.

    Vocabulary entries missing from the file keep a fresh random row; how many
    is logged and returned.
    """
    table = store.get(TOKEN_TABLE)
    generator = rng if rng is not None else np.random.default_rng(0)
    rows, dims = table.shape

    if str(source) == RANDOM_SOURCE:
        table.value[...] = uniform_init(generator, (rows, dims))
        return EmbeddingReport(source=RANDOM_SOURCE, loaded=0, missing=rows)

    tokens, matrix = load_embeddings(source)
    if matrix.shape[1] != dims:
        raise ShapeError(
            f"pretrained embeddings in '{source}' have {matrix.shape[1]} dims, model expects {dims}"
        )
    if rows != len(vocab):
        raise ShapeError(f"token table has {rows} rows but the vocabulary has {len(vocab)}")
    lookup = {token: index for index, token in enumerate(tokens)}
    missing = []
    for index, token in enumerate(vocab.tokens):
        row = lookup.get(token)
        if row is None:
            missing.append(token)
            table.value[index] = uniform_init(generator, dims)
        else:
            table.value[index] = matrix[row]
    if missing:
        logger.warning(
            "%d vocabulary rows missing from '%s'; initialised randomly", len(missing), source
        )
    return EmbeddingReport(
        source=str(source),
        loaded=rows - len(missing),
        missing=len(missing),
        missing_tokens=tuple(missing),
    )


def assign_embeddings(store: ParameterStore, matrix: np.ndarray) -> EmbeddingReport:
    """Copy an in-memory table (for example fresh from pretraining) into ``W_em_token``."""
    table = store.get(TOKEN_TABLE)
    if matrix.shape != table.shape:
        raise ShapeError(f"embedding matrix {matrix.shape} does not match the token table {table.shape}")
    table.value[...] = matrix
    return EmbeddingReport(source="memory", loaded=matrix.shape[0], missing=0)


def set_embedding_trainable(store: ParameterStore, flag: bool) -> None:
    store.get(TOKEN_TABLE).trainable = flag


def export_embeddings(store: ParameterStore, vocab: Vocabulary, path: Union[str, Path]) -> Path:
    return save_embeddings(path, vocab.tokens, store.get(TOKEN_TABLE).value)


__all__ = [
    "EmbeddingReport",
    "assign_embeddings",
    "RANDOM_SOURCE",
    "export_embeddings",
    "init_embeddings",
    "set_embedding_trainable",
]
