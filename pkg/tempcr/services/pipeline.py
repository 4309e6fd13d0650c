"""Loading and preparing corpora, vocabulary and skip-gram data for the commands."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

from .corpus.io import load_corpus, load_raw_texts
from .corpus.models import Corpus, Split
from .corpus.preprocess import PreprocessConfig, normalize_corpus, tokenize_texts
from .corpus.sgdata import SgDataset, SgMode, build_sg_dataset
from .corpus.vocab import Vocabulary, build_vocab, load_vocab

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True, eq=False)
class PreparedData:
    """Normalised training corpus, its vocabulary and the skip-gram token streams.

    The skip-gram texts are the training documents followed by the unlabeled texts.
    """

    train: Corpus
    vocab: Vocabulary
    sg_texts: Sequence[Sequence[str]]
    preprocess: PreprocessConfig

    def sg_dataset(self, window: int, mode: SgMode | str = SgMode.SG) -> SgDataset:
        return build_sg_dataset(self.sg_texts, self.vocab, window=window, mode=mode)

    def load_split(self, path: PathLike, split: Split) -> Corpus:
        return normalize_corpus(load_corpus(path, split), self.preprocess)


def prepare_training_data(
    train_path: PathLike,
    raw_dir: Optional[PathLike],
    preprocess: PreprocessConfig,
    vocab_path: Optional[PathLike] = None,
) -> PreparedData:
    train = normalize_corpus(load_corpus(train_path, Split.TRAIN), preprocess)
    raw_texts: List[str] = load_raw_texts(raw_dir) if raw_dir else []
    vocab = load_vocab(vocab_path) if vocab_path else build_vocab(train, raw_texts, preprocess)
    sg_texts = [list(document.surfaces) for document in train.documents]
    sg_texts.extend(tokenize_texts(raw_texts, preprocess))
    logger.info(
        "Prepared %d training documents and %d skip-gram texts (%d raw)",
        len(train),
        len(sg_texts),
        len(raw_texts),
    )
    return PreparedData(train=train, vocab=vocab, sg_texts=sg_texts, preprocess=preprocess)


__all__ = ["PreparedData", "prepare_training_data"]
