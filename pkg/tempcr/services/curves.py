"""Tidy TSV tables from finished run directories."""

from __future__ import annotations

import csv
import logging
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Union

from .errors import EvaluationError
from .storage import REPORT_NAME, RunDirectory

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ("setting", "x", "P", "R", "F", "seed")


def _curve_row(run: RunDirectory) -> Dict[str, str]:
    report = run.read_report() or {}
    config = run.read_config()
    overall = report["overall"]
    return {
        "setting": str(report.get("setting", config.get("setting", ""))),
        "x": str(report.get("x", config.get("x", ""))),
        "P": f"{float(overall['P']):.6f}",
        "R": f"{float(overall['R']):.6f}",
        "F": f"{float(overall['F']):.6f}",
        "seed": str(report.get("seed", config.get("seed", ""))),
    }


def emit_curves(run_dirs: Iterable[Union[str, Path]], output: Union[str, Path]) -> List[Path]:
    """One TSV per sweep kind (``lambda``, ``size``, ``train``) with a row per run."""
    paths = [Path(path) for path in run_dirs]
    if not paths:
        raise EvaluationError("no run directories given")
    absent = [str(path) for path in paths if not (path / REPORT_NAME).is_file()]
    if absent:
        raise EvaluationError(f"runs without a report: {', '.join(absent)}")
    runs = [RunDirectory(path) for path in paths]

    grouped: Dict[str, List[Dict[str, str]]] = defaultdict(list)
    for run in runs:
        report = run.read_report() or {}
        sweep = str(report.get("sweep", run.read_config().get("sweep", "train")))
        grouped[sweep].append(_curve_row(run))

    target = Path(output)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for sweep in sorted(grouped):
        path = target / f"{sweep}_curve.tsv"
        rows = sorted(grouped[sweep], key=lambda row: (row["setting"], float(row["x"] or 0), row["seed"]))
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=CURVE_COLUMNS, delimiter="\t", lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        logger.info("Wrote %d rows to %s", len(rows), path)
        written.append(path)
    return written


__all__ = ["CURVE_COLUMNS", "emit_curves"]
