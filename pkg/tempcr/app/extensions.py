"""Process-wide setup shared by every command."""

from __future__ import annotations

import logging
from typing import IO, Optional

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "INFO", stream: Optional[IO[str]] = None) -> None:
    """Route package logs to stderr once; later calls only change the level."""
    root = logging.getLogger("tempcr")
    root.setLevel(getattr(logging, level.upper(), logging.INFO))
    if not root.handlers:
        handler = logging.StreamHandler(stream)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)


def register_extensions(config: object) -> None:
    configure_logging(str(getattr(config, "LOG_LEVEL", "INFO")))


__all__ = ["configure_logging", "register_extensions"]
