"""Training settings, loops, sweeps and diagnostics."""

from .data import RCData, RCExamples, prepare_examples, prepare_rc_data, split_validation
from .diagnostics import check_model_gradients, measure_gradient_dominance
from .loop import EpochRecord, RunHistory, TrainResult, build_models, train
from .pretrain import pretrain_sg
from .sampling import CyclingSampler, EpochSampler, epoch_batches
from .scoring import evaluate_model, load_trained_model, predict_relations
from .settings import ALL_SETTINGS, TrainConfig, TrainingSetting
from .sweeps import Experiment, derive_seed, sweep_lambda, sweep_train_size

__all__ = [
    "ALL_SETTINGS",
    "CyclingSampler",
    "EpochRecord",
    "EpochSampler",
    "Experiment",
    "RCData",
    "RCExamples",
    "RunHistory",
    "TrainConfig",
    "TrainResult",
    "TrainingSetting",
    "build_models",
    "check_model_gradients",
    "derive_seed",
    "epoch_batches",
    "evaluate_model",
    "load_trained_model",
    "measure_gradient_dominance",
    "predict_relations",
    "prepare_examples",
    "prepare_rc_data",
    "pretrain_sg",
    "split_validation",
    "sweep_lambda",
    "sweep_train_size",
    "train",
]
