"""Run directories and optional publication of their files to an artifact store."""

from __future__ import annotations

import csv
import json
import logging
import shutil
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from .errors import ArtifactStoreError

try:  # pragma: no cover - optional dependency
    import boto3  # type: ignore[import]
except ImportError:  # pragma: no cover - optional dependency
    boto3 = None  # type: ignore[assignment]

logger = logging.getLogger(__name__)

CONFIG_NAME = "config.txt"
METRICS_NAME = "metrics.csv"
REPORT_NAME = "report.json"
CHECKPOINT_DIR = "checkpoint"
METRICS_COLUMNS = ("epoch", "loss_rc", "loss_sg", "val_P", "val_R", "val_F")


def _normalize_storage_key(key: str) -> str:
    """Normalise and validate storage keys to prevent path traversal."""
    if not isinstance(key, str) or not key.strip():
        raise ArtifactStoreError("Storage key must be a non-empty string.")

    cleaned = key.strip().replace("\\", "/").lstrip("/")
    segments = [segment for segment in cleaned.split("/") if segment]

    if not segments:
        raise ArtifactStoreError("Storage key resolves to an empty path.")

    for segment in segments:
        if segment in {".", ".."}:
            raise ArtifactStoreError("Storage key cannot contain path traversal segments.")

    return "/".join(segments)


class RunDirectory:
    """Layout of one training run: config snapshot, epoch metrics, report, checkpoint."""

    def __init__(self, path: Union[str, Path]) -> None:
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)

    @property
    def name(self) -> str:
        return self.path.name

    @property
    def config_path(self) -> Path:
        return self.path / CONFIG_NAME

    @property
    def metrics_path(self) -> Path:
        return self.path / METRICS_NAME

    @property
    def report_path(self) -> Path:
        return self.path / REPORT_NAME

    @property
    def checkpoint_path(self) -> Path:
        return self.path / CHECKPOINT_DIR

    def write_config(self, values: Mapping[str, Any]) -> Path:
        lines = [f"{key}={values[key]}" for key in sorted(values)]
        self.config_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return self.config_path

    def read_config(self) -> Dict[str, str]:
        if not self.config_path.exists():
            return {}
        values: Dict[str, str] = {}
        for line in self.config_path.read_text(encoding="utf-8").splitlines():
            if "=" in line:
                key, value = line.split("=", 1)
                values[key] = value
        return values

    def append_epoch(self, record: Mapping[str, Any]) -> None:
        is_new = not self.metrics_path.exists()
        with self.metrics_path.open("a", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=METRICS_COLUMNS, extrasaction="ignore")
            if is_new:
                writer.writeheader()
            writer.writerow({column: record.get(column, "") for column in METRICS_COLUMNS})

    def read_epochs(self) -> List[Dict[str, str]]:
        if not self.metrics_path.exists():
            return []
        with self.metrics_path.open("r", encoding="utf-8", newline="") as handle:
            return list(csv.DictReader(handle))

    def write_report(self, report: Mapping[str, Any]) -> Path:
        self.report_path.write_text(json.dumps(report, indent=2, sort_keys=True), encoding="utf-8")
        return self.report_path

    def read_report(self) -> Optional[Dict[str, Any]]:
        if not self.report_path.exists():
            return None
        return json.loads(self.report_path.read_text(encoding="utf-8"))

    def files(self) -> List[Path]:
        return sorted(path for path in self.path.rglob("*") if path.is_file())


@dataclass
class ArtifactConfig:
    """Where finished run directories are published."""

    backend: str = "local"
    local_base_path: Union[str, Path] = field(default_factory=lambda: Path.cwd() / "artifacts")
    s3_bucket: Optional[str] = None
    s3_prefix: str = ""
    s3_region: Optional[str] = None
    s3_endpoint_url: Optional[str] = None

    def __post_init__(self) -> None:
        self.backend = (self.backend or "local").lower()
        self.local_base_path = Path(self.local_base_path).expanduser()
        self.s3_prefix = (self.s3_prefix or "").strip("/")

    @classmethod
    def from_config(cls, config: object) -> "ArtifactConfig":
        local_path = getattr(config, "ARTIFACT_PATH", None)
        return cls(
            backend=getattr(config, "ARTIFACT_BACKEND", "local"),
            local_base_path=Path(local_path) if local_path else Path.cwd() / "artifacts",
            s3_bucket=getattr(config, "S3_BUCKET", None),
            s3_prefix=getattr(config, "S3_PREFIX", "") or "",
            s3_region=getattr(config, "S3_REGION", None),
            s3_endpoint_url=getattr(config, "S3_ENDPOINT_URL", None),
        )


class ArtifactStore(ABC):
    @abstractmethod
    def put_file(self, source: Path, key: str) -> str:
        """Store ``source`` under ``key`` and return the normalised key."""

    @abstractmethod
    def location(self, key: str) -> str:
        """Human-readable location of a stored key."""


class LocalArtifactStore(ArtifactStore):
    """Copies artifacts below a base directory."""

    def __init__(self, base_path: Union[str, Path]) -> None:
        base_path_obj = Path(base_path)
        base_path_obj.mkdir(parents=True, exist_ok=True)
        self.base_path = base_path_obj.resolve()

    def put_file(self, source: Path, key: str) -> str:
        sanitized_key = _normalize_storage_key(key)
        target_path = self._resolve_path(sanitized_key)
        target_path.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(source, target_path)
        return sanitized_key

    def location(self, key: str) -> str:
        return str(self._resolve_path(_normalize_storage_key(key)))

    def _resolve_path(self, sanitized_key: str) -> Path:
        relative_path = Path(*sanitized_key.split("/"))
        target_path = (self.base_path / relative_path).resolve()

        try:
            target_path.relative_to(self.base_path)
        except ValueError as exc:
            raise ArtifactStoreError("Resolved path escapes the artifact directory.") from exc

        return target_path


class S3ArtifactStore(ArtifactStore):
    """Uploads artifacts to an S3-compatible bucket."""

    def __init__(
        self,
        *,
        bucket_name: str,
        prefix: str = "",
        region_name: Optional[str] = None,
        endpoint_url: Optional[str] = None,
        client: Optional[Any] = None,
    ) -> None:
        if not bucket_name:
            raise ArtifactStoreError("bucket_name is required for S3ArtifactStore.")

        self.bucket_name = bucket_name
        self.prefix = prefix.strip("/")

        if client is not None:
            self.client = client
        else:
            if boto3 is None:  # pragma: no cover - environment dependent
                raise ArtifactStoreError("boto3 is required for S3ArtifactStore but is not installed.")

            client_kwargs: Dict[str, Any] = {}
            if region_name:
                client_kwargs["region_name"] = region_name
            if endpoint_url:
                client_kwargs["endpoint_url"] = endpoint_url
            self.client = boto3.client("s3", **client_kwargs)

    def _full_key(self, key: str) -> str:
        sanitized_key = _normalize_storage_key(key)
        return f"{self.prefix}/{sanitized_key}" if self.prefix else sanitized_key

    def put_file(self, source: Path, key: str) -> str:
        full_key = self._full_key(key)
        self.client.upload_file(str(source), self.bucket_name, full_key)
        return full_key

    def location(self, key: str) -> str:
        return f"s3://{self.bucket_name}/{self._full_key(key)}"


def get_artifact_store(config: Optional[ArtifactConfig] = None, **overrides: Any) -> ArtifactStore:
    """Factory returning the artifact store for the configuration."""
    config = config or ArtifactConfig()
    if overrides:
        config = replace(config, **overrides)

    if config.backend == "local":
        return LocalArtifactStore(base_path=config.local_base_path)

    if config.backend == "s3":
        if not config.s3_bucket:
            raise ArtifactStoreError("S3 bucket name must be configured for the S3 backend.")
        return S3ArtifactStore(
            bucket_name=config.s3_bucket,
            prefix=config.s3_prefix,
            region_name=config.s3_region,
            endpoint_url=config.s3_endpoint_url,
        )

    raise ArtifactStoreError(f"Unsupported artifact backend '{config.backend}'.")


def publish_run(store: ArtifactStore, run_dir: Union[RunDirectory, str, Path]) -> List[str]:
    """Upload every file of a run directory under ``<run name>/...``."""
    directory = run_dir if isinstance(run_dir, RunDirectory) else RunDirectory(run_dir)
    keys = []
    for path in directory.files():
        relative = path.relative_to(directory.path).as_posix()
        keys.append(store.put_file(path, f"{directory.name}/{relative}"))
    logger.info("Published %d files of run '%s'", len(keys), directory.name)
    return keys


__all__ = [
    "ArtifactConfig",
    "ArtifactStore",
    "LocalArtifactStore",
    "METRICS_COLUMNS",
    "RunDirectory",
    "S3ArtifactStore",
    "get_artifact_store",
    "publish_run",
]
