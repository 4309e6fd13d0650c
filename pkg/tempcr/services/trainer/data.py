"""Labelled example preparation and document-level splits."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..candidates import (
    CandidatePair,
    RCBatch,
    RCInput,
    build_rc_input,
    collate,
    generate_candidates,
    recall_ceiling,
)
from ..corpus.models import Corpus
from ..corpus.vocab import Vocabulary
from ..errors import TrainingError
from ..evaluation import RelationSet
from .settings import TrainConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RCExamples:
    """Candidates of one corpus with their encoded inputs and class labels."""

    candidates: Tuple[CandidatePair, ...]
    inputs: Tuple[RCInput, ...]
    labels: np.ndarray
    document_ids: Tuple[str, ...]
    d_clip: int
    pad_index: int
    pos_pad_index: int

    def __len__(self) -> int:
        return len(self.candidates)

    def batch(self, indices: Sequence[int] | np.ndarray) -> RCBatch:
        picked = [int(index) for index in indices]
        return collate(
            [self.inputs[index] for index in picked],
            self.labels[picked],
            d_clip=self.d_clip,
            pad_index=self.pad_index,
            pos_pad_index=self.pos_pad_index,
        )

    def positives(self) -> int:
        return int(np.sum(self.labels == 0))


def prepare_examples(corpus: Corpus, vocab: Vocabulary, config: TrainConfig) -> RCExamples:
    candidates: List[CandidatePair] = []
    inputs: List[RCInput] = []
    for document in corpus.documents:
        for pair in generate_candidates(document, config.max_dist):
            candidates.append(pair)
            inputs.append(build_rc_input(document, pair, vocab, config.context, config.d_clip))
    ceiling = recall_ceiling(corpus.documents, candidates)
    logger.info(
        "%s: %d candidates over %d documents, recall ceiling %.3f",
        corpus.split.value,
        len(candidates),
        len(corpus),
        ceiling,
    )
    return RCExamples(
        candidates=tuple(candidates),
        inputs=tuple(inputs),
        labels=np.asarray([pair.label.class_index for pair in candidates], dtype=np.int64),
        document_ids=tuple(document.id for document in corpus.documents),
        d_clip=config.d_clip,
        pad_index=vocab.pad_index,
        pos_pad_index=vocab.pos_pad_index,
    )


def split_validation(corpus: Corpus, count: int) -> Tuple[Corpus, Corpus]:
    """Hold out the ``count`` lexicographically-first documents."""
    if count >= len(corpus):
        raise TrainingError(
            f"{count} validation documents leave nothing to train on ({len(corpus)} documents)"
        )
    held_out = set(sorted(document.id for document in corpus.documents)[:count])
    training = tuple(document for document in corpus.documents if document.id not in held_out)
    validation = tuple(document for document in corpus.documents if document.id in held_out)
    return (
        Corpus(split=corpus.split, documents=training),
        Corpus(split=corpus.split, documents=validation),
    )


def prefix_documents(corpus: Corpus, fraction: float) -> Corpus:
    """The first ``ceil(fraction * N)`` documents."""
    if not 0.0 < fraction <= 1.0:
        raise TrainingError(f"training fraction must lie in (0, 1], got {fraction}")
    keep = math.ceil(fraction * len(corpus))
    return Corpus(split=corpus.split, documents=corpus.documents[:keep])


@dataclass(frozen=True, eq=False)
class RCData:
    train: RCExamples
    validation: RCExamples
    validation_gold: RelationSet
    train_corpus: Corpus
    validation_corpus: Corpus


def prepare_rc_data(
    corpus: Corpus,
    vocab: Vocabulary,
    config: TrainConfig,
    fraction: float = 1.0,
) -> RCData:
    """Split off validation documents, then keep a prefix of the remaining ones."""
    training, validation = split_validation(corpus, config.validation_documents)
    training = prefix_documents(training, fraction)
    train_examples = prepare_examples(training, vocab, config)
    if len(train_examples) == 0:
        raise TrainingError("the training documents produce no candidates")
    return RCData(
        train=train_examples,
        validation=prepare_examples(validation, vocab, config),
        validation_gold=RelationSet.from_corpus(validation),
        train_corpus=training,
        validation_corpus=validation,
    )


__all__ = [
    "RCData",
    "RCExamples",
    "prefix_documents",
    "prepare_examples",
    "prepare_rc_data",
    "split_validation",
]
