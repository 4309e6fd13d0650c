"""Relation classifier, skip-gram head and their combined objective."""

from .checkpoint import load_checkpoint, save_checkpoint
from .combined import LossBreakdown, LossWeights, combined_loss, token_gradient_components
from .pretrained import EmbeddingReport, assign_embeddings, init_embeddings, set_embedding_trainable
from .rc import RCDimensions, RCModel, rc_forward, rc_loss
from .sg import SGModel, sg_loss

__all__ = [
    "EmbeddingReport",
    "LossBreakdown",
    "LossWeights",
    "RCDimensions",
    "RCModel",
    "SGModel",
    "assign_embeddings",
    "combined_loss",
    "init_embeddings",
    "load_checkpoint",
    "rc_forward",
    "rc_loss",
    "save_checkpoint",
    "set_embedding_trainable",
    "sg_loss",
    "token_gradient_components",
]
