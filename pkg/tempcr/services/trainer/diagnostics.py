"""Gradient diagnostics on the shared token embeddings."""

from __future__ import annotations

import logging
from typing import Dict, Tuple

import numpy as np

from ..candidates import RCBatch, RCInput, collate
from ..corpus.sgdata import SgDataset
from ..corpus.vocab import Vocabulary
from ..errors import TrainingError
from ..models.combined import LossWeights, combined_loss, token_gradient_components
from ..models.rc import RCDimensions, RCModel
from ..models.sg import SGModel
from ..neural.gradcheck import grad_check, max_relative_error
from ..neural.layers import Mode
from ..neural.optim import AdamState, adam_step
from ..neural.params import ParameterStore
from .data import RCData
from .loop import PretrainedSource, RunStreams, build_models
from .sampling import CyclingSampler
from .settings import TrainConfig

logger = logging.getLogger(__name__)

GRADCHECK_TOLERANCE = 1e-4

_TINY = RCDimensions(vocab_size=9, pos_size=5, embed_dim=3, pos_dim=2, pf_dim=2, hidden=4, d_clip=3)


def measure_gradient_dominance(
    config: TrainConfig,
    data: RCData,
    vocab: Vocabulary,
    sg_dataset: SgDataset,
    pretrained: PretrainedSource,
    steps: int = 100,
) -> float:
    """Mean of ||lambda * dL_sg/dW|| / ||dL_rc/dW|| on ``W_em_token`` over training steps."""
    if not config.setting.joint:
        raise TrainingError("gradient dominance is only defined for joint settings")
    if steps < 1:
        raise TrainingError("steps must be at least 1")
    streams = RunStreams.from_seed(config.seed)
    result = build_models(config, vocab, sg_dataset, pretrained, streams)
    assert result.sg_model is not None
    weights = LossWeights(config.lambda_sg)
    state = AdamState(lr=config.learning_rate)
    rc_sampler = CyclingSampler(len(data.train), config.batch_size, streams.rc_shuffle)
    sg_sampler = CyclingSampler(len(sg_dataset), config.batch_size, streams.sg_cycle)

    ratios = []
    for _ in range(steps):
        rc_batch = data.train.batch(rc_sampler.draw())
        sg_batch = sg_dataset.take(sg_sampler.draw())
        rc_grad, sg_grad = token_gradient_components(
            result.model, result.sg_model, rc_batch, sg_batch, weights, Mode.INFER
        )
        rc_norm = float(np.linalg.norm(rc_grad))
        ratios.append(float(np.linalg.norm(sg_grad)) / max(rc_norm, 1e-12))
        combined_loss(
            result.model, result.sg_model, rc_batch, sg_batch, weights, Mode.INFER, backward=True
        )
        adam_step(result.store, state)
    return float(np.mean(ratios))


def random_rc_batch(rng: np.random.Generator, dims: RCDimensions = _TINY, size: int = 3) -> RCBatch:
    """Random variable-length RC inputs over the given table sizes."""
    inputs = []
    for _ in range(size):
        length = int(rng.integers(2, 7))
        inputs.append(
            RCInput(
                tokens=tuple(int(v) for v in rng.integers(0, dims.vocab_size, length)),
                pos=tuple(int(v) for v in rng.integers(0, dims.pos_size, length)),
                pf1=tuple(int(v) for v in rng.integers(-dims.d_clip, dims.d_clip + 1, length)),
                pf2=tuple(int(v) for v in rng.integers(-dims.d_clip, dims.d_clip + 1, length)),
            )
        )
    labels = rng.integers(0, 2, size)
    return collate(inputs, labels, d_clip=dims.d_clip)


def random_sg_batch(
    rng: np.random.Generator, vocab_size: int, context_size: int, size: int = 6
) -> Tuple[np.ndarray, np.ndarray]:
    return rng.integers(0, vocab_size, size), rng.integers(0, context_size, size)


def check_model_gradients(seed: int, eps: float = 1e-5, lambda_sg: float = 0.7) -> Dict[str, float]:
    """Max relative finite-difference error of the RC, SG, SGLR and combined losses.

    Each model is checked on its own random tiny instance at 64-bit precision.
    """
    rng = np.random.default_rng(seed)
    report: Dict[str, float] = {}

    store = ParameterStore("float64")
    rc_model = RCModel(store, _TINY, rng=rng, dropout=0.0)
    rc_batch = random_rc_batch(rng)
    report["rc"] = max_relative_error(
        grad_check(lambda: rc_model.loss(rc_batch, Mode.INFER, backward=True), store, eps=eps)
    )

    for name, context_size in (("sg", _TINY.vocab_size), ("sglr", 2 * _TINY.vocab_size)):
        sg_store = ParameterStore("float64")
        sg_model = SGModel(sg_store, _TINY.vocab_size, _TINY.embed_dim, context_size, rng=rng)
        centers, contexts = random_sg_batch(rng, _TINY.vocab_size, context_size)
        report[name] = max_relative_error(
            grad_check(
                lambda: sg_model.loss(centers, contexts, backward=True), sg_store, eps=eps
            )
        )

    joint_store = ParameterStore("float64")
    joint_rc = RCModel(joint_store, _TINY, rng=rng, dropout=0.0)
    joint_sg = SGModel(joint_store, _TINY.vocab_size, _TINY.embed_dim, 2 * _TINY.vocab_size, rng=rng)
    joint_rc_batch = random_rc_batch(rng)
    joint_sg_batch = random_sg_batch(rng, _TINY.vocab_size, 2 * _TINY.vocab_size)
    weights = LossWeights(lambda_sg)
    report["combined"] = max_relative_error(
        grad_check(
            lambda: combined_loss(
                joint_rc, joint_sg, joint_rc_batch, joint_sg_batch, weights, backward=True
            ).total,
            joint_store,
            eps=eps,
        )
    )
    for name, error in report.items():
        logger.info("gradient check %s: max relative error %.3e", name, error)
    return report


__all__ = [
    "GRADCHECK_TOLERANCE",
    "check_model_gradients",
    "measure_gradient_dominance",
    "random_rc_batch",
    "random_sg_batch",
]
