"""Training settings and their hyper-parameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Dict

from ..corpus.sgdata import SgMode
from ..errors import TrainingError


class TrainingSetting(str, Enum):
    RC_RANDOM = "rc-random"
    RC_SG_INIT = "rc-sg-init"
    RC_SG_FIXED = "rc-sg-fixed"
    RC_SG = "rc+sg"
    RC_SGLR = "rc+sglr"

    @property
    def uses_pretrained(self) -> bool:
        return self is not TrainingSetting.RC_RANDOM

    @property
    def freezes_embeddings(self) -> bool:
        return self is TrainingSetting.RC_SG_FIXED

    @property
    def joint(self) -> bool:
        return self in (TrainingSetting.RC_SG, TrainingSetting.RC_SGLR)

    @property
    def sg_mode(self) -> SgMode:
        return SgMode.SGLR if self is TrainingSetting.RC_SGLR else SgMode.SG


ALL_SETTINGS = tuple(TrainingSetting)


@dataclass(frozen=True)
class TrainConfig:
    setting: TrainingSetting = TrainingSetting.RC_SG
    batch_size: int = 1024
    min_epochs: int = 10
    patience: int = 20
    max_epochs: int = 500
    lambda_sg: float = 0.1
    validation_documents: int = 3
    seed: int = 1
    learning_rate: float = 0.001
    dropout: float = 0.5
    embed_dim: int = 25
    pos_dim: int = 40
    pf_dim: int = 10
    hidden: int = 100
    context: int = 10
    max_dist: int = 30
    d_clip: int = 40
    window: int = 2
    sg_pretrain_epochs: int = 5
    dtype: str = "float64"

    @classmethod
    def from_config(cls, config: object, **overrides: Any) -> "TrainConfig":
        """Defaults from a configuration profile, then explicit overrides (``None`` ignored)."""
        values: Dict[str, Any] = {
            "batch_size": getattr(config, "BATCH_SIZE", cls.batch_size),
            "min_epochs": getattr(config, "MIN_EPOCHS", cls.min_epochs),
            "patience": getattr(config, "PATIENCE", cls.patience),
            "max_epochs": getattr(config, "MAX_EPOCHS", cls.max_epochs),
            "lambda_sg": getattr(config, "LAMBDA_SG", cls.lambda_sg),
            "validation_documents": getattr(config, "VALIDATION_DOCUMENTS", cls.validation_documents),
            "seed": getattr(config, "SEED", cls.seed),
            "learning_rate": getattr(config, "LEARNING_RATE", cls.learning_rate),
            "dropout": getattr(config, "DROPOUT", cls.dropout),
            "embed_dim": getattr(config, "EMBED_DIM", cls.embed_dim),
            "pos_dim": getattr(config, "POS_DIM", cls.pos_dim),
            "pf_dim": getattr(config, "PF_DIM", cls.pf_dim),
            "hidden": getattr(config, "LSTM_UNITS", cls.hidden),
            "context": getattr(config, "CONTEXT", cls.context),
            "max_dist": getattr(config, "MAX_DIST", cls.max_dist),
            "d_clip": getattr(config, "D_CLIP", cls.d_clip),
            "window": getattr(config, "WINDOW", cls.window),
            "sg_pretrain_epochs": getattr(config, "SG_PRETRAIN_EPOCHS", cls.sg_pretrain_epochs),
            "dtype": getattr(config, "DTYPE", cls.dtype),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        if "setting" in values:
            values["setting"] = TrainingSetting(values["setting"])
        trained = cls(**values)
        trained.validate()
        return trained

    def with_overrides(self, **overrides: Any) -> "TrainConfig":
        updated = replace(self, **overrides)
        updated.validate()
        return updated

    def validate(self) -> None:
        if self.patience < 1:
            raise TrainingError("patience must be at least 1")
        if self.batch_size < 1:
            raise TrainingError("batch size must be at least 1")
        if self.min_epochs < 0 or self.max_epochs < 1:
            raise TrainingError("epochs must satisfy min_epochs >= 0 and max_epochs >= 1")
        if self.lambda_sg < 0:
            raise TrainingError("lambda_sg must be non-negative")
        if self.validation_documents < 1:
            raise TrainingError("at least one validation document is required")
        if not 0.0 <= self.dropout < 1.0:
            raise TrainingError("dropout must lie in [0, 1)")
        if self.d_clip < 1 or self.context < 0 or self.max_dist < 0:
            raise TrainingError("d_clip must be positive; context and max_dist non-negative")
        if min(self.embed_dim, self.pos_dim, self.pf_dim, self.hidden) < 1:
            raise TrainingError("model dimensions must be positive")
        if self.dtype not in {"float64", "float32"}:
            raise TrainingError(f"unsupported dtype '{self.dtype}'")

    def as_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["setting"] = self.setting.value
        return payload


__all__ = ["ALL_SETTINGS", "TrainConfig", "TrainingSetting"]
