"""Training loop for the five settings with early stopping on validation F."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from ..corpus.sgdata import SgDataset
from ..corpus.vocab import Vocabulary
from ..errors import TrainingError
from ..models.combined import LossWeights, combined_loss
from ..models.pretrained import EmbeddingReport, assign_embeddings, init_embeddings, set_embedding_trainable
from ..models.rc import RCDimensions, RCModel
from ..models.sg import SGModel
from ..neural.layers import Mode
from ..neural.optim import AdamState, adam_step
from ..neural.params import ParameterStore
from ..storage import RunDirectory
from .data import RCData
from .sampling import CyclingSampler, EpochSampler
from .scoring import validation_metrics
from .settings import TrainConfig

logger = logging.getLogger(__name__)

PretrainedSource = Union[np.ndarray, str, Path, None]


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss_rc: float
    loss_sg: float
    val_P: float
    val_R: float
    val_F: float


@dataclass
class RunHistory:
    records: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    rc_batches: int = 0
    sg_batches: int = 0
    steps: int = 0
    stopped_early: bool = False

    @property
    def best(self) -> Optional[EpochRecord]:
        for record in self.records:
            if record.epoch == self.best_epoch:
                return record
        return None

    @property
    def epochs(self) -> int:
        return len(self.records)

    def as_rows(self) -> List[Dict[str, float]]:
        return [asdict(record) for record in self.records]


@dataclass(eq=False)
class TrainResult:
    model: RCModel
    sg_model: Optional[SGModel]
    store: ParameterStore
    history: RunHistory
    embedding_report: Optional[EmbeddingReport] = None


@dataclass(frozen=True)
class RunStreams:
    init: np.random.Generator
    sg_head: np.random.Generator
    rc_shuffle: np.random.Generator
    sg_cycle: np.random.Generator
    dropout: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RunStreams":
        children = np.random.SeedSequence(seed).spawn(5)
        return cls(*(np.random.default_rng(child) for child in children))


def _initialise_embeddings(
    store: ParameterStore,
    vocab: Vocabulary,
    config: TrainConfig,
    pretrained: PretrainedSource,
    rng: np.random.Generator,
) -> Optional[EmbeddingReport]:
    if not config.setting.uses_pretrained:
        return None
    if pretrained is None:
        raise TrainingError(f"setting '{config.setting.value}' needs pretrained SG embeddings")
    if isinstance(pretrained, np.ndarray):
        return assign_embeddings(store, pretrained)
    return init_embeddings(store, vocab, pretrained, rng=rng)


def build_models(
    config: TrainConfig,
    vocab: Vocabulary,
    sg_dataset: Optional[SgDataset],
    pretrained: PretrainedSource,
    streams: Optional[RunStreams] = None,
) -> TrainResult:
    """Parameter store, RC model and (for joint settings) the SG head, ready to train."""
    streams = streams or RunStreams.from_seed(config.seed)
    store = ParameterStore(config.dtype)
    dims = RCDimensions(
        vocab_size=len(vocab),
        pos_size=vocab.pos_size,
        embed_dim=config.embed_dim,
        pos_dim=config.pos_dim,
        pf_dim=config.pf_dim,
        hidden=config.hidden,
        d_clip=config.d_clip,
    )
    model = RCModel(store, dims, rng=streams.init, dropout=config.dropout)
    report = _initialise_embeddings(store, vocab, config, pretrained, streams.init)
    if config.setting.freezes_embeddings:
        set_embedding_trainable(store, False)

    sg_model = None
    if config.setting.joint:
        if sg_dataset is None or len(sg_dataset) == 0:
            raise TrainingError(f"setting '{config.setting.value}' needs a non-empty skip-gram dataset")
        if sg_dataset.mode is not config.setting.sg_mode:
            raise TrainingError(
                f"setting '{config.setting.value}' needs {config.setting.sg_mode.value} pairs, "
                f"got {sg_dataset.mode.value}"
            )
        sg_model = SGModel(
            store,
            vocab_size=len(vocab),
            embed_dim=config.embed_dim,
            context_size=sg_dataset.context_size,
            rng=streams.sg_head,
        )
    return TrainResult(
        model=model, sg_model=sg_model, store=store, history=RunHistory(), embedding_report=report
    )


def train(
    config: TrainConfig,
    data: RCData,
    vocab: Vocabulary,
    sg_dataset: Optional[SgDataset] = None,
    pretrained: PretrainedSource = None,
    run_dir: Optional[RunDirectory] = None,
) -> TrainResult:
    """Train one setting and return the model restored to its best validation epoch."""
    config.validate()
    streams = RunStreams.from_seed(config.seed)
    result = build_models(config, vocab, sg_dataset, pretrained, streams)
    store, model, sg_model, history = result.store, result.model, result.sg_model, result.history

    weights = LossWeights(config.lambda_sg if sg_model is not None else 0.0)
    state = AdamState(lr=config.learning_rate)
    rc_sampler = EpochSampler(len(data.train), config.batch_size, streams.rc_shuffle)
    sg_sampler = (
        CyclingSampler(len(sg_dataset), config.batch_size, streams.sg_cycle)
        if sg_model is not None and sg_dataset is not None
        else None
    )

    best_f = -1.0
    best_snapshot = store.snapshot()
    logger.info(
        "Training %s: %d candidates (%d positive), lambda %.4g, seed %d",
        config.setting.value,
        len(data.train),
        data.train.positives(),
        weights.lambda_sg,
        config.seed,
    )
    for epoch in range(1, config.max_epochs + 1):
        rc_total = sg_total = 0.0
        batches = 0
        for indices in rc_sampler.epoch():
            rc_batch = data.train.batch(indices)
            sg_batch = None
            if sg_sampler is not None and sg_dataset is not None:
                sg_batch = sg_dataset.take(sg_sampler.draw())
                history.sg_batches += 1
            breakdown = combined_loss(
                model,
                sg_model,
                rc_batch,
                sg_batch,
                weights,
                mode=Mode.TRAIN,
                rng=streams.dropout,
                reduction="mean",
                backward=True,
            )
            adam_step(store, state)
            history.rc_batches += 1
            history.steps += 1
            rc_total += breakdown.rc
            sg_total += breakdown.sg
            batches += 1

        metrics = validation_metrics(model, data.validation, data.validation_gold)
        record = EpochRecord(
            epoch=epoch,
            loss_rc=rc_total / batches,
            loss_sg=sg_total / batches,
            val_P=metrics.precision,
            val_R=metrics.recall,
            val_F=metrics.f_measure,
        )
        history.records.append(record)
        if run_dir is not None:
            run_dir.append_epoch(asdict(record))
        if record.val_F > best_f:
            best_f = record.val_F
            history.best_epoch = epoch
            best_snapshot = store.snapshot()
        logger.info(
            "epoch %d: loss_rc %.4f loss_sg %.4f val P %.3f R %.3f F %.3f (best %d)",
            epoch,
            record.loss_rc,
            record.loss_sg,
            record.val_P,
            record.val_R,
            record.val_F,
            history.best_epoch,
        )
        if epoch >= config.min_epochs and epoch - history.best_epoch >= config.patience:
            history.stopped_early = True
            break

    store.restore(best_snapshot)
    logger.info(
        "Finished %s after %d epochs; best epoch %d with validation F %.3f",
        config.setting.value,
        history.epochs,
        history.best_epoch,
        best_f,
    )
    return result


__all__ = ["EpochRecord", "RunHistory", "RunStreams", "TrainResult", "build_models", "train"]
