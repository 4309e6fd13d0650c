"""Process entry point: parse, dispatch and map failures to exit codes."""

from __future__ import annotations

import logging
import sys
from typing import Optional, Sequence

from ..services.errors import TempcrError
from . import create_parser

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; 0 on success, 1 on a runtime failure, 2 on a usage error."""
    arguments = list(sys.argv[1:] if argv is None else argv)
    try:
        parser, config = create_parser(arguments)
        args = parser.parse_args(arguments)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    try:
        return int(args.handler(args, config))
    except (TempcrError, OSError, ValueError) as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {message}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())


__all__ = ["EXIT_FAILURE", "EXIT_OK", "EXIT_USAGE", "main", "run"]
