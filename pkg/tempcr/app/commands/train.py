"""Train one setting, score it and write its run directory."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

from ...services.corpus.models import Split
from ...services.models.checkpoint import save_checkpoint
from ...services.storage import ArtifactConfig, RunDirectory, get_artifact_store, publish_run
from ...services.trainer.data import prepare_rc_data
from ...services.trainer.loop import train
from ...services.trainer.scoring import evaluate_model
from .base import Command, add_data_arguments, add_model_arguments, prepare_data, pretrained_source, train_config


def configure(parser: argparse.ArgumentParser, config: Any) -> None:
    add_data_arguments(parser)
    add_model_arguments(parser, config)
    parser.add_argument("--run-dir", type=Path, help="defaults to runs/train-<setting>-s<seed>")
    parser.add_argument("--publish", action="store_true", help="upload the run to the artifact store")


def handle(args: argparse.Namespace, config: Any) -> int:
    data = prepare_data(args, config)
    settings = train_config(args, config)
    rc_data = prepare_rc_data(data.train, data.vocab, settings)
    sg_dataset = (
        data.sg_dataset(settings.window, settings.setting.sg_mode) if settings.setting.joint else None
    )
    pretrained = pretrained_source(args, data, settings)

    run_dir = RunDirectory(
        args.run_dir or Path("runs") / f"train-{settings.setting.value}-s{settings.seed}"
    )
    run_dir.write_config({**settings.as_dict(), "sweep": "train", "x": settings.lambda_sg})
    result = train(settings, rc_data, data.vocab, sg_dataset, pretrained, run_dir=run_dir)

    eval_corpus = data.load_split(args.dev, Split.DEV) if args.dev else rc_data.validation_corpus
    report, _ = evaluate_model(result.model, data.vocab, eval_corpus, settings)
    report.update(
        {
            "sweep": "train",
            "setting": settings.setting.value,
            "x": settings.lambda_sg,
            "seed": settings.seed,
            "best_epoch": result.history.best_epoch,
            "epochs": result.history.epochs,
            "stopped_early": result.history.stopped_early,
        }
    )
    run_dir.write_report(report)
    save_checkpoint(run_dir.checkpoint_path, result.store, data.vocab, settings.as_dict())

    if args.publish:
        store = get_artifact_store(ArtifactConfig.from_config(config))
        publish_run(store, run_dir)

    overall = report["overall"]
    print(
        f"{settings.setting.value}: P {overall['P']:.4f} R {overall['R']:.4f} F {overall['F']:.4f} "
        f"(best epoch {result.history.best_epoch}) -> {run_dir.path}"
    )
    return 0


command = Command(name="train", help="train one setting", configure=configure, handler=handle)

__all__ = ["command"]
