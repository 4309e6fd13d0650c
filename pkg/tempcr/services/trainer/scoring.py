"""Prediction and evaluation of a trained relation classifier."""

from __future__ import annotations

from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np

from ..corpus.models import Corpus
from ..corpus.vocab import Vocabulary
from ..evaluation import (
    Metrics,
    PairIndex,
    RelationSet,
    closure_prf,
    decide_from_probabilities,
    metrics_report,
)
from ..models.checkpoint import load_checkpoint
from ..models.rc import NUM_CLASSES, RCDimensions, RCModel
from .data import RCExamples, prepare_examples
from .settings import TrainConfig, TrainingSetting

PREDICT_CHUNK = 1024


def predict_probabilities(model: RCModel, examples: RCExamples, chunk_size: int = PREDICT_CHUNK) -> np.ndarray:
    if len(examples) == 0:
        return np.zeros((0, NUM_CLASSES), dtype=model.store.dtype)
    parts = [
        model.predict_proba(examples.batch(np.arange(start, min(start + chunk_size, len(examples)))))
        for start in range(0, len(examples), chunk_size)
    ]
    return np.concatenate(parts, axis=0)


def predict_relations(model: RCModel, examples: RCExamples) -> RelationSet:
    probs = predict_probabilities(model, examples)
    return decide_from_probabilities(examples.candidates, probs, examples.document_ids)


def validation_metrics(model: RCModel, examples: RCExamples, gold: RelationSet) -> Metrics:
    return closure_prf(gold, predict_relations(model, examples))


def evaluate_model(
    model: RCModel,
    vocab: Vocabulary,
    corpus: Corpus,
    config: TrainConfig,
    frequencies: Optional[Mapping[str, int]] = None,
) -> Tuple[Dict[str, Any], RelationSet]:
    """Metrics report (overall plus subsets) for a held-out corpus, and the predictions."""
    examples = prepare_examples(corpus, vocab, config)
    predicted = predict_relations(model, examples)
    gold = RelationSet.from_corpus(corpus)
    index = PairIndex(corpus, frequencies if frequencies is not None else vocab.frequencies)
    report = metrics_report(gold, predicted, index)
    report["documents"] = len(corpus)
    report["candidates"] = len(examples)
    return report, predicted


def load_trained_model(directory: Union[str, Path]) -> Tuple[RCModel, Vocabulary, TrainConfig]:
    """Rebuild the relation classifier, its vocabulary and run settings from a checkpoint."""
    store, vocab, manifest = load_checkpoint(directory)
    known = {field.name for field in fields(TrainConfig)}
    values = {key: value for key, value in manifest.items() if key in known}
    values["setting"] = TrainingSetting(values.get("setting", TrainingSetting.RC_SG.value))
    config = TrainConfig(**values)
    config.validate()
    dims = RCDimensions(
        vocab_size=len(vocab),
        pos_size=vocab.pos_size,
        embed_dim=config.embed_dim,
        pos_dim=config.pos_dim,
        pf_dim=config.pf_dim,
        hidden=config.hidden,
        d_clip=config.d_clip,
    )
    return RCModel(store, dims, dropout=config.dropout), vocab, config


__all__ = [
    "evaluate_model",
    "load_trained_model",
    "predict_probabilities",
    "predict_relations",
    "validation_metrics",
]
