"""Tidy TSV tables from finished runs."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

from ...services.curves import emit_curves
from .base import Command


def configure(parser: argparse.ArgumentParser, config: Any) -> None:
    parser.add_argument("--runs", type=Path, nargs="+", required=True, help="run directories")
    parser.add_argument("--out", type=Path, required=True, help="output directory")


def handle(args: argparse.Namespace, config: Any) -> int:
    for path in emit_curves(args.runs, args.out):
        print(path)
    return 0


command = Command(name="curves", help="emit plot-ready TSV tables", configure=configure, handler=handle)

__all__ = ["command"]
