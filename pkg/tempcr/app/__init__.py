"""Command-line factory and setup utilities."""

from __future__ import annotations

import argparse
from typing import Optional, Sequence, Tuple

from .commands import register_commands
from .config import BaseConfig, CONFIG_BY_NAME, resolve_config
from .extensions import register_extensions

PROG = "tempcr"


def _profile_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--profile", choices=sorted(CONFIG_BY_NAME))
    return parser


def create_parser(argv: Optional[Sequence[str]] = None) -> Tuple[argparse.ArgumentParser, BaseConfig]:
    """Resolve the configuration profile, then build the parser whose defaults it supplies."""
    known, _ = _profile_parser().parse_known_args(argv)
    config = resolve_config(known.profile)
    register_extensions(config)

    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Temporal containment relation extraction with a skip-gram auxiliary task.",
        parents=[_profile_parser()],
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    register_commands(subparsers, config)
    return parser, config


__all__ = ["create_parser"]
