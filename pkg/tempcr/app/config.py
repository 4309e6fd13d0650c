"""Configuration management for the relation-extraction pipeline."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Dict, Iterable, Optional, Type

ENV_FILENAMES: Iterable[str] = (".env",)
ENV_PREFIX = "TEMPCR_"


def _split_env_line(raw_line: str) -> Optional[tuple[str, str]]:
    """Parse an environment line into a key/value pair."""
    if not raw_line or raw_line.startswith("#"):
        return None

    if "=" not in raw_line:
        return None

    key, value = raw_line.split("=", 1)
    key = key.strip()
    value = value.strip().strip('"').strip("'")

    if not key:
        return None

    if key.lower().startswith("export "):
        key = key.split(None, 1)[1]

    return key, value


def load_environment(env_path: Optional[Path] = None) -> Optional[Path]:
    """Load environment variables from a .env file if present."""
    candidate_files: list[Path] = []

    if env_path is not None:
        env_candidate = env_path if env_path.suffix else env_path / ".env"
        candidate_files.append(env_candidate)
    else:
        package_root = Path(__file__).resolve().parents[1]
        project_root = package_root.parent
        for base_path in (package_root, project_root):
            for filename in ENV_FILENAMES:
                candidate_files.append(base_path / filename)

    for file_path in candidate_files:
        if not file_path.exists() or not file_path.is_file():
            continue

        with file_path.open("r", encoding="utf-8") as env_file:
            for raw_line in env_file:
                parsed = _split_env_line(raw_line.strip())
                if parsed is None:
                    continue
                key, value = parsed
                os.environ.setdefault(key, value)

        return file_path

    return None


def _env(key: str, default: Optional[str] = None) -> Optional[str]:
    return os.environ.get(ENV_PREFIX + key, default)


def _env_int(key: str, default: int) -> int:
    value = _env(key)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def _env_float(key: str, default: float) -> float:
    value = _env(key)
    if value is None:
        return default
    try:
        return float(value)
    except ValueError:
        return default


class BaseConfig:
    """Hyper-parameters and runtime switches shared by every profile.

    Class attributes hold the published model settings; the constructor layers
    ``TEMPCR_*`` environment overrides for the runtime knobs on top.
    """

    NAME = "base"
    DEFAULT_PROFILE = "full"

    # Preprocessing and candidates
    LOWERCASE = True
    DIGIT_CHAR = "5"
    MIN_TOKEN_FREQUENCY = 2
    MAX_DIST = 30
    CONTEXT = 10
    D_CLIP = 40

    # Model dimensions
    LSTM_UNITS = 100
    EMBED_DIM = 25
    POS_DIM = 40
    PF_DIM = 10
    WINDOW = 2

    # Optimisation
    BATCH_SIZE = 1024
    LEARNING_RATE = 0.001
    DROPOUT = 0.5
    LAMBDA_SG = 0.1
    PATIENCE = 20
    MIN_EPOCHS = 10
    MAX_EPOCHS = 500
    VALIDATION_DOCUMENTS = 3
    SG_PRETRAIN_EPOCHS = 5

    LAMBDA_GRID = (0.01, 0.1, 1.0, 10.0, 100.0)
    SIZE_GRID = (0.2, 0.4, 0.6, 0.8, 1.0)

    def __init__(self) -> None:
        self.NAME = getattr(self, "NAME")
        self.SEED = _env_int("SEED", 1)
        self.DTYPE = (_env("DTYPE", "float64") or "float64").strip().lower()
        self.JOBS = max(1, _env_int("JOBS", 1))
        self.LOG_LEVEL = (_env("LOG_LEVEL", "INFO") or "INFO").upper()
        self.MAX_EPOCHS = _env_int("MAX_EPOCHS", getattr(self, "MAX_EPOCHS"))
        self.LAMBDA_SG = _env_float("LAMBDA", getattr(self, "LAMBDA_SG"))

        # Run artifacts
        self.ARTIFACT_BACKEND = (_env("ARTIFACT_BACKEND", "local") or "local").lower()
        self.ARTIFACT_PATH = _env("ARTIFACT_PATH")
        self.S3_BUCKET = _env("S3_BUCKET") or os.environ.get("AWS_S3_BUCKET")
        self.S3_PREFIX = _env("S3_PREFIX", "")
        self.S3_REGION = _env("S3_REGION") or os.environ.get("AWS_DEFAULT_REGION")
        self.S3_ENDPOINT_URL = _env("S3_ENDPOINT_URL") or os.environ.get("AWS_S3_ENDPOINT_URL")

        if self.DTYPE not in {"float64", "float32"}:
            raise ValueError(f"Unsupported dtype '{self.DTYPE}'; expected float64 or float32.")

    def as_dict(self) -> Dict[str, object]:
        """Return every upper-case setting as a plain mapping."""
        names = {name for name in dir(self) if name.isupper()}
        return {name: getattr(self, name) for name in sorted(names)}


class FullConfig(BaseConfig):
    NAME = "full"


class DeskConfig(BaseConfig):
    """Published settings with a tighter epoch cap for laptop runs."""

    NAME = "desk"
    MAX_EPOCHS = 80


class SmokeConfig(BaseConfig):
    """Tiny dimensions used by the smoke script and the test-suite."""

    NAME = "smoke"
    LSTM_UNITS = 8
    EMBED_DIM = 6
    POS_DIM = 4
    PF_DIM = 3
    BATCH_SIZE = 64
    PATIENCE = 3
    MIN_EPOCHS = 2
    MAX_EPOCHS = 6
    SG_PRETRAIN_EPOCHS = 1
    VALIDATION_DOCUMENTS = 1


CONFIG_BY_NAME: Dict[str, Type[BaseConfig]] = {
    "full": FullConfig,
    "default": FullConfig,
    "desk": DeskConfig,
    "smoke": SmokeConfig,
    "test": SmokeConfig,
}


def get_config(name: str) -> Type[BaseConfig]:
    """Resolve a configuration class for the provided profile name."""
    key = name.strip().lower()
    if key in CONFIG_BY_NAME:
        return CONFIG_BY_NAME[key]

    raise ValueError(f"Unknown configuration profile: {name}")


def resolve_config(name: Optional[str] = None) -> BaseConfig:
    """Instantiate the profile named explicitly, by ``TEMPCR_PROFILE`` or the default."""
    load_environment()
    resolved_name = name or _env("PROFILE") or BaseConfig.DEFAULT_PROFILE
    return get_config(resolved_name)()


__all__ = [
    "BaseConfig",
    "CONFIG_BY_NAME",
    "DeskConfig",
    "FullConfig",
    "SmokeConfig",
    "get_config",
    "load_environment",
    "resolve_config",
]
