"""Skip-gram (center, context) pair construction."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import VocabularyError
from .vocab import Vocabulary

logger = logging.getLogger(__name__)

LEFT_PREFIX = "left_"
RIGHT_PREFIX = "right_"


class SgMode(str, Enum):
    SG = "SG"
    SGLR = "SGLR"


@dataclass(frozen=True)
class SgPair:
    center: int
    context: int


@dataclass(frozen=True, eq=False)
class SgDataset:
    """Skip-gram training pairs stored as two aligned index arrays.

    For SGLR the context vocabulary has ``2 * |V|`` entries: index ``k`` is
    ``left_<token k>`` and ``|V| + k`` is ``right_<token k>``.
    """

    mode: SgMode
    window: int
    centers: np.ndarray
    contexts: np.ndarray
    context_vocab: Tuple[str, ...] = field(repr=False)

    def __len__(self) -> int:
        return int(self.centers.shape[0])

    @property
    def context_size(self) -> int:
        return len(self.context_vocab)

    def pairs(self) -> List[SgPair]:
        return [SgPair(int(c), int(o)) for c, o in zip(self.centers, self.contexts)]

    def take(self, indices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.centers[indices], self.contexts[indices]


def context_vocabulary(vocab: Vocabulary, mode: SgMode) -> Tuple[str, ...]:
    if mode is SgMode.SG:
        return vocab.tokens
    return tuple(LEFT_PREFIX + token for token in vocab.tokens) + tuple(
        RIGHT_PREFIX + token for token in vocab.tokens
    )


def window_pairs(length: int, window: int) -> List[Tuple[int, int]]:
    """All (center position, context position) pairs, truncated at the text bounds."""
    pairs: List[Tuple[int, int]] = []
    for center in range(length):
        low = max(0, center - window)
        high = min(length, center + window + 1)
        pairs.extend((center, other) for other in range(low, high) if other != center)
    return pairs


def build_sg_dataset(
    texts: Sequence[Sequence[str]],
    vocab: Vocabulary,
    window: int = 2,
    mode: SgMode | str = SgMode.SG,
) -> SgDataset:
    """Build skip-gram pairs from preprocessed token sequences.

    Centers and contexts below the frequency threshold map to UNK rather than
    being dropped, so the pair positions match the raw texts.
    """
    if window < 1:
        raise VocabularyError(f"skip-gram window must be at least 1, got {window}")
    resolved_mode = SgMode(mode)
    vocab_size = len(vocab)

    centers: List[int] = []
    contexts: List[int] = []
    for tokens in texts:
        encoded = [vocab.encode_token(token) for token in tokens]
        for center, other in window_pairs(len(encoded), window):
            centers.append(encoded[center])
            context = encoded[other]
            if resolved_mode is SgMode.SGLR and other > center:
                context += vocab_size
            contexts.append(context)

    dataset = SgDataset(
        mode=resolved_mode,
        window=window,
        centers=np.asarray(centers, dtype=np.int64),
        contexts=np.asarray(contexts, dtype=np.int64),
        context_vocab=context_vocabulary(vocab, resolved_mode),
    )
    logger.info(
        "Skip-gram dataset (%s, window %d): %d pairs over %d texts",
        resolved_mode.value,
        window,
        len(dataset),
        len(texts),
    )
    return dataset


__all__ = [
    "LEFT_PREFIX",
    "RIGHT_PREFIX",
    "SgDataset",
    "SgMode",
    "SgPair",
    "build_sg_dataset",
    "context_vocabulary",
    "window_pairs",
]
