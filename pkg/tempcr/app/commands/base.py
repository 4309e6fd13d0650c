"""Command objects and the flags several commands share."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from ...services.corpus.preprocess import PreprocessConfig
from ...services.pipeline import PreparedData, prepare_training_data
from ...services.trainer.pretrain import pretrain_sg
from ...services.trainer.settings import ALL_SETTINGS, TrainConfig, TrainingSetting

Handler = Callable[[argparse.Namespace, Any], int]
Configure = Callable[[argparse.ArgumentParser, Any], None]


@dataclass(frozen=True)
class Command:
    """One sub-command: its flags and the handler returning an exit code."""

    name: str
    help: str
    configure: Configure
    handler: Handler

    def register(self, subparsers: Any, config: Any) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(self.name, help=self.help, description=self.help)
        self.configure(parser, config)
        parser.set_defaults(handler=self.handler)
        return parser


def float_list(raw: str) -> list[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{raw}'") from exc


def setting_list(raw: str) -> list[TrainingSetting]:
    try:
        return [TrainingSetting(item.strip()) for item in raw.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"unknown setting in '{raw}'") from exc


def add_seed_argument(parser: argparse.ArgumentParser, config: Any) -> None:
    parser.add_argument("--seed", type=int, default=config.SEED, help="seed for every random stream")


def add_data_arguments(parser: argparse.ArgumentParser, *, dev: bool = True) -> None:
    parser.add_argument("--train", required=True, type=Path, help="labelled training corpus (JSON lines)")
    if dev:
        parser.add_argument("--dev", type=Path, help="held-out corpus scored after training")
    parser.add_argument("--raw", type=Path, help="directory of unlabeled *.txt files for skip-gram data")
    parser.add_argument("--vocab", type=Path, help="reuse a vocabulary dump instead of building one")


def add_model_arguments(parser: argparse.ArgumentParser, config: Any) -> None:
    """Hyper-parameter flags; every default comes from the active profile."""
    add_seed_argument(parser, config)
    parser.add_argument("--lstm-units", type=int, default=config.LSTM_UNITS)
    parser.add_argument("--embed-dim", type=int, default=config.EMBED_DIM)
    parser.add_argument("--pos-dim", type=int, default=config.POS_DIM)
    parser.add_argument("--pf-dim", type=int, default=config.PF_DIM)
    parser.add_argument("--window", type=int, default=config.WINDOW)
    parser.add_argument("--context", type=int, default=config.CONTEXT)
    parser.add_argument("--max-dist", type=int, default=config.MAX_DIST)
    parser.add_argument("--lambda", dest="lambda_sg", type=float, default=config.LAMBDA_SG)
    parser.add_argument("--batch", type=int, default=config.BATCH_SIZE)
    parser.add_argument("--patience", type=int, default=config.PATIENCE)
    parser.add_argument("--min-epochs", type=int, default=config.MIN_EPOCHS)
    parser.add_argument("--max-epochs", type=int, default=config.MAX_EPOCHS)
    parser.add_argument("--dropout", type=float, default=config.DROPOUT)
    parser.add_argument(
        "--setting",
        default=TrainingSetting.RC_SG.value,
        choices=[setting.value for setting in ALL_SETTINGS],
    )
    parser.add_argument("--sg-epochs", type=int, default=config.SG_PRETRAIN_EPOCHS, help="SG pretraining epochs")
    parser.add_argument("--jobs", type=int, default=config.JOBS, help="worker processes for sweeps")
    parser.add_argument(
        "--pretrained",
        type=Path,
        help="word2vec-text embeddings; without it SG embeddings are pretrained first",
    )


def train_config(args: argparse.Namespace, config: Any, **overrides: Any) -> TrainConfig:
    values = {
        "setting": args.setting,
        "seed": args.seed,
        "hidden": args.lstm_units,
        "embed_dim": args.embed_dim,
        "pos_dim": args.pos_dim,
        "pf_dim": args.pf_dim,
        "window": args.window,
        "context": args.context,
        "max_dist": args.max_dist,
        "lambda_sg": args.lambda_sg,
        "batch_size": args.batch,
        "patience": args.patience,
        "min_epochs": args.min_epochs,
        "max_epochs": args.max_epochs,
        "dropout": args.dropout,
        "sg_pretrain_epochs": args.sg_epochs,
    }
    values.update(overrides)
    return TrainConfig.from_config(config, **values)


def prepare_data(args: argparse.Namespace, config: Any) -> PreparedData:
    return prepare_training_data(
        args.train,
        args.raw,
        PreprocessConfig.from_config(config),
        vocab_path=getattr(args, "vocab", None),
    )


def pretrained_source(
    args: argparse.Namespace, data: PreparedData, settings: TrainConfig, *, always: bool = False
) -> Optional[Path | np.ndarray]:
    """The ``--pretrained`` file, or a table pretrained here with the run seed."""
    if not (always or settings.setting.uses_pretrained):
        return None
    if getattr(args, "pretrained", None):
        return args.pretrained
    return pretrain_sg(
        data.sg_dataset(settings.window),
        vocab_size=len(data.vocab),
        embed_dim=settings.embed_dim,
        epochs=settings.sg_pretrain_epochs,
        seed=settings.seed,
        batch_size=settings.batch_size,
        learning_rate=settings.learning_rate,
        dtype=settings.dtype,
    )


def write_rows(
    rows: Iterable[Mapping[str, Any]], columns: Sequence[str], output: Optional[Path] = None
) -> None:
    """CSV to ``output`` or stdout."""
    if output is not None:
        output.parent.mkdir(parents=True, exist_ok=True)
        with output.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(columns), extrasaction="ignore")
            writer.writeheader()
            writer.writerows(rows)
        return
    writer = csv.DictWriter(sys.stdout, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


__all__ = [
    "Command",
    "add_data_arguments",
    "add_model_arguments",
    "add_seed_argument",
    "float_list",
    "prepare_data",
    "pretrained_source",
    "setting_list",
    "train_config",
    "write_rows",
]
