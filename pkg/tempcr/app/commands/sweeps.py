"""lambda and training-size sweeps."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any, Dict, List

from ...services.corpus.models import Split
from ...services.corpus.sgdata import SgMode
from ...services.pipeline import PreparedData
from ...services.trainer.data import split_validation
from ...services.trainer.settings import ALL_SETTINGS, TrainConfig
from ...services.trainer.sweeps import RESULT_COLUMNS, Experiment, sweep_lambda, sweep_train_size
from .base import (
    Command,
    add_data_arguments,
    add_model_arguments,
    float_list,
    prepare_data,
    pretrained_source,
    setting_list,
    train_config,
    write_rows,
)


def _add_sweep_arguments(parser: argparse.ArgumentParser, config: Any) -> None:
    add_data_arguments(parser)
    add_model_arguments(parser, config)
    parser.add_argument("--run-root", type=Path, help="write one run directory per job below this path")
    parser.add_argument("--out", type=Path, help="results CSV; printed when omitted")


def _experiment(
    args: argparse.Namespace, data: PreparedData, settings: TrainConfig, modes: List[SgMode]
) -> Experiment:
    if args.dev:
        eval_corpus = data.load_split(args.dev, Split.DEV)
    else:
        _, eval_corpus = split_validation(data.train, settings.validation_documents)
    return Experiment(
        train_corpus=data.train,
        eval_corpus=eval_corpus,
        vocab=data.vocab,
        sg_datasets={mode: data.sg_dataset(settings.window, mode) for mode in modes},
        pretrained=pretrained_source(args, data, settings, always=True),
        run_root=args.run_root,
    )


def configure_lambda(parser: argparse.ArgumentParser, config: Any) -> None:
    _add_sweep_arguments(parser, config)
    parser.add_argument(
        "--values",
        type=float_list,
        default=list(config.LAMBDA_GRID),
        help="comma-separated lambda values",
    )


def handle_lambda(args: argparse.Namespace, config: Any) -> int:
    data = prepare_data(args, config)
    settings = train_config(args, config)
    experiment = _experiment(args, data, settings, [settings.setting.sg_mode])
    rows = sweep_lambda(experiment, settings, args.values, workers=args.jobs)
    write_rows(rows, RESULT_COLUMNS, args.out)
    return 0


def configure_size(parser: argparse.ArgumentParser, config: Any) -> None:
    _add_sweep_arguments(parser, config)
    parser.add_argument(
        "--fractions",
        type=float_list,
        default=list(config.SIZE_GRID),
        help="comma-separated training fractions",
    )
    parser.add_argument(
        "--settings",
        type=setting_list,
        default=list(ALL_SETTINGS),
        help="comma-separated settings",
    )
    parser.add_argument("--seeds", type=int, default=1, help="repetitions, seeded --seed, --seed+1, ...")


def handle_size(args: argparse.Namespace, config: Any) -> int:
    data = prepare_data(args, config)
    base = train_config(args, config)
    modes = sorted({setting.sg_mode for setting in args.settings if setting.joint}, key=lambda mode: mode.value)
    rows: List[Dict[str, Any]] = []
    for repeat in range(max(1, args.seeds)):
        settings = base.with_overrides(seed=base.seed + repeat)
        experiment = _experiment(args, data, settings, modes)
        rows.extend(
            sweep_train_size(experiment, settings, args.fractions, args.settings, workers=args.jobs)
        )
    write_rows(rows, RESULT_COLUMNS, args.out)
    return 0


lambda_command = Command(
    name="sweep-lambda",
    help="train a joint setting once per lambda value",
    configure=configure_lambda,
    handler=handle_lambda,
)

size_command = Command(
    name="sweep-size",
    help="train settings on growing prefixes of the training documents",
    configure=configure_size,
    handler=handle_size,
)

__all__ = ["lambda_command", "size_command"]
