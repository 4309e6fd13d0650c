"""Weighted multi-task objective over the shared token embeddings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..candidates import RCBatch
from ..errors import ShapeError
from ..neural.layers import Mode
from .rc import TOKEN_TABLE, RCModel
from .sg import SGModel


@dataclass(frozen=True)
class LossWeights:
    lambda_sg: float = 0.1

    def __post_init__(self) -> None:
        if self.lambda_sg < 0:
            raise ValueError(f"lambda_sg must be non-negative, got {self.lambda_sg}")


@dataclass(frozen=True)
class LossBreakdown:
    total: float
    rc: float
    sg: float


def combined_loss(
    rc_model: RCModel,
    sg_model: Optional[SGModel],
    rc_batch: RCBatch,
    sg_batch: Optional[Tuple[np.ndarray, np.ndarray]],
    weights: LossWeights = LossWeights(),
    mode: Mode | str = Mode.INFER,
    rng: Optional[np.random.Generator] = None,
    reduction: str = "mean",
    backward: bool = False,
) -> LossBreakdown:
    """``L_rc + lambda_sg * L_sg`` with one accumulation pass for both terms.

    Each task's loss is reduced over its own batch, by default a mean, so the
    RC term equals ``rc_loss(..., reduction="mean")`` and the SG term
    ``sg_loss(..., reduction="mean")``; ``rc_loss`` and ``sg_loss`` themselves
    default to sums. With ``lambda_sg == 0`` the total is the RC term exactly,
    the SG term contributes no gradient and an absent SG batch is allowed.
    """
    if len(rc_batch) == 0:
        raise ShapeError("combined_loss needs a non-empty RC batch")
    rc_value = rc_model.loss(rc_batch, mode, rng, reduction=reduction, backward=backward)

    has_sg = sg_model is not None and sg_batch is not None and len(sg_batch[0]) > 0
    if not has_sg:
        if weights.lambda_sg != 0:
            raise ShapeError("a non-zero lambda_sg needs a non-empty SG batch")
        return LossBreakdown(total=rc_value, rc=rc_value, sg=0.0)

    assert sg_model is not None and sg_batch is not None
    sg_value = sg_model.loss(
        sg_batch[0],
        sg_batch[1],
        reduction=reduction,
        backward=backward and weights.lambda_sg != 0,
        weight=weights.lambda_sg,
    )
    return LossBreakdown(total=rc_value + weights.lambda_sg * sg_value, rc=rc_value, sg=sg_value)


def token_gradient_components(
    rc_model: RCModel,
    sg_model: SGModel,
    rc_batch: RCBatch,
    sg_batch: Tuple[np.ndarray, np.ndarray],
    weights: LossWeights,
    mode: Mode | str = Mode.INFER,
    rng: Optional[np.random.Generator] = None,
    reduction: str = "mean",
) -> Tuple[np.ndarray, np.ndarray]:
    """Separate RC and weighted SG gradients on ``W_em_token``.

    Every gradient in the store is zeroed on return.
    """
    store = rc_model.store
    table = store.get(TOKEN_TABLE)
    store.zero_grad()
    rc_model.loss(rc_batch, mode, rng, reduction=reduction, backward=True)
    rc_grad = table.grad.copy()
    store.zero_grad()
    sg_model.loss(sg_batch[0], sg_batch[1], reduction=reduction, backward=True, weight=weights.lambda_sg)
    sg_grad = table.grad.copy()
    store.zero_grad()
    return rc_grad, sg_grad


__all__ = ["LossBreakdown", "LossWeights", "combined_loss", "token_gradient_components"]
