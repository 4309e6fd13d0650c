"""lambda and training-size sweeps, optionally fanned out to worker processes."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np

from ..corpus.models import Corpus
from ..corpus.sgdata import SgDataset, SgMode
from ..corpus.vocab import Vocabulary
from ..errors import TrainingError
from ..models.checkpoint import save_checkpoint
from ..storage import RunDirectory
from .data import prepare_rc_data
from .loop import train
from .scoring import evaluate_model
from .settings import ALL_SETTINGS, TrainConfig, TrainingSetting

logger = logging.getLogger(__name__)

LAMBDA_GRID = (0.01, 0.1, 1.0, 10.0, 100.0)
SIZE_GRID = (0.2, 0.4, 0.6, 0.8, 1.0)
RESULT_COLUMNS = ("sweep", "setting", "x", "P", "R", "F", "seed", "best_epoch", "epochs", "train_documents")


def derive_seed(base: int, index: int) -> int:
    """Independent per-run seed from the base seed and the run index."""
    return int(np.random.SeedSequence([base, index]).generate_state(1)[0])


@dataclass(frozen=True, eq=False)
class Experiment:
    """Everything a run needs besides its :class:`TrainConfig`."""

    train_corpus: Corpus
    eval_corpus: Corpus
    vocab: Vocabulary
    sg_datasets: Mapping[SgMode, SgDataset]
    pretrained: Optional[Union[np.ndarray, Path]] = None
    run_root: Optional[Path] = None


@dataclass(frozen=True)
class SweepJob:
    sweep: str
    index: int
    config: TrainConfig
    x_value: float
    fraction: float = 1.0

    @property
    def run_name(self) -> str:
        return f"{self.sweep}-{self.config.setting.value}-x{self.x_value:g}-s{self.config.seed}"


def run_job(experiment: Experiment, job: SweepJob) -> Dict[str, Any]:
    config = job.config
    data = prepare_rc_data(experiment.train_corpus, experiment.vocab, config, job.fraction)
    sg_dataset = experiment.sg_datasets.get(config.setting.sg_mode) if config.setting.joint else None
    run_dir = RunDirectory(experiment.run_root / job.run_name) if experiment.run_root else None
    if run_dir is not None:
        values = config.as_dict()
        values.update({"sweep": job.sweep, "x": job.x_value, "fraction": job.fraction})
        run_dir.write_config(values)
    result = train(config, data, experiment.vocab, sg_dataset, experiment.pretrained, run_dir=run_dir)
    report, _ = evaluate_model(result.model, experiment.vocab, experiment.eval_corpus, config)
    overall = report["overall"]
    row = {
        "sweep": job.sweep,
        "setting": config.setting.value,
        "x": job.x_value,
        "P": overall["P"],
        "R": overall["R"],
        "F": overall["F"],
        "seed": config.seed,
        "best_epoch": result.history.best_epoch,
        "epochs": result.history.epochs,
        "train_documents": len(data.train_corpus),
    }
    if run_dir is not None:
        report.update({key: row[key] for key in ("sweep", "setting", "x", "seed", "best_epoch", "epochs")})
        run_dir.write_report(report)
        save_checkpoint(
            run_dir.checkpoint_path,
            result.store,
            experiment.vocab,
            config.as_dict(),
        )
    logger.info("%s: F %.3f (best epoch %d)", job.run_name, row["F"], row["best_epoch"])
    return row


def run_jobs(experiment: Experiment, jobs: Sequence[SweepJob], workers: int = 1) -> List[Dict[str, Any]]:
    """Results in job order; ``workers > 1`` uses a process pool."""
    if workers <= 1 or len(jobs) <= 1:
        return [run_job(experiment, job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as executor:
        return list(executor.map(partial(run_job, experiment), jobs))


def sweep_lambda(
    experiment: Experiment,
    config: TrainConfig,
    values: Iterable[float] = LAMBDA_GRID,
    workers: int = 1,
) -> List[Dict[str, Any]]:
    """One full run per lambda value of a joint setting."""
    if not config.setting.joint:
        raise TrainingError(f"lambda sweeps need a joint setting, got '{config.setting.value}'")
    jobs = [
        SweepJob(
            sweep="lambda",
            index=index,
            config=config.with_overrides(lambda_sg=float(value), seed=derive_seed(config.seed, index)),
            x_value=float(value),
        )
        for index, value in enumerate(values)
    ]
    return run_jobs(experiment, jobs, workers)


def sweep_train_size(
    experiment: Experiment,
    config: TrainConfig,
    fractions: Iterable[float] = SIZE_GRID,
    settings: Sequence[TrainingSetting] = ALL_SETTINGS,
    workers: int = 1,
) -> List[Dict[str, Any]]:
    """Every setting trained on document prefixes of the given fractions.

    Runs at the same fraction share one derived seed across settings.
    """
    fraction_list = [float(fraction) for fraction in fractions]
    for fraction in fraction_list:
        if not 0.0 < fraction <= 1.0:
            raise TrainingError(f"training fraction must lie in (0, 1], got {fraction}")
    jobs = []
    for setting in settings:
        for position, fraction in enumerate(fraction_list):
            jobs.append(
                SweepJob(
                    sweep="size",
                    index=len(jobs),
                    config=config.with_overrides(
                        setting=TrainingSetting(setting), seed=derive_seed(config.seed, position)
                    ),
                    x_value=fraction,
                    fraction=fraction,
                )
            )
    return run_jobs(experiment, jobs, workers)


__all__ = [
    "Experiment",
    "LAMBDA_GRID",
    "RESULT_COLUMNS",
    "SIZE_GRID",
    "SweepJob",
    "derive_seed",
    "run_job",
    "run_jobs",
    "sweep_lambda",
    "sweep_train_size",
]
