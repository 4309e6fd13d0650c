"""Sub-command registration."""

from __future__ import annotations

from typing import Any

from . import curves, evaluate, gradcheck, preprocess, pretrain_sg, sweeps, synth, train

COMMANDS = (
    synth.command,
    preprocess.command,
    pretrain_sg.command,
    train.command,
    evaluate.command,
    sweeps.lambda_command,
    sweeps.size_command,
    gradcheck.command,
    curves.command,
)


def register_commands(subparsers: Any, config: Any) -> None:
    """Attach every command to the provided sub-parser collection."""
    for command in COMMANDS:
        command.register(subparsers, config)


__all__ = ["COMMANDS", "register_commands"]
