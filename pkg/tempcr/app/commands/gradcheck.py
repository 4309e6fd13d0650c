"""Finite-difference check of every model's analytic gradients."""

from __future__ import annotations

import argparse
from typing import Any

from ...services.neural.gradcheck import max_relative_error
from ...services.trainer.diagnostics import GRADCHECK_TOLERANCE, check_model_gradients
from .base import Command, add_seed_argument


def configure(parser: argparse.ArgumentParser, config: Any) -> None:
    add_seed_argument(parser, config)
    parser.add_argument("--instances", type=int, default=1, help="random instances, seeded consecutively")


def handle(args: argparse.Namespace, config: Any) -> int:
    worst = 0.0
    for offset in range(max(1, args.instances)):
        report = check_model_gradients(args.seed + offset)
        worst = max(worst, max_relative_error(report))
    print(f"max relative error {worst:.3e}")
    return 0 if worst < GRADCHECK_TOLERANCE else 1


command = Command(
    name="gradcheck",
    help="compare analytic and finite-difference gradients",
    configure=configure,
    handler=handle,
)

__all__ = ["command"]
