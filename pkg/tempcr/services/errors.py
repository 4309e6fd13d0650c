"""Exception hierarchy shared by the service layer."""

from __future__ import annotations


class TempcrError(Exception):
    """Base class for every error raised by the relation-extraction pipeline."""


class CorpusFormatError(TempcrError, ValueError):
    """Raised when a corpus file violates the JSON-lines schema."""

    def __init__(self, message: str, *, document_id: str | None = None, field: str | None = None) -> None:
        prefix = []
        if document_id is not None:
            prefix.append(f"document '{document_id}'")
        if field:
            prefix.append(f"field '{field}'")
        full = f"{', '.join(prefix)}: {message}" if prefix else message
        super().__init__(full)
        self.document_id = document_id
        self.field = field


class VocabularyError(TempcrError, ValueError):
    """Raised when a vocabulary cannot be built or parsed."""


class SynthSpecError(TempcrError, ValueError):
    """Raised when a synthetic corpus specification is infeasible."""


class CandidateError(TempcrError, ValueError):
    """Raised when a candidate pair does not belong to its document."""


class ShapeError(TempcrError, ValueError):
    """Raised on inconsistent tensor shapes or out-of-range indices."""


class TrainingError(TempcrError, ValueError):
    """Raised when a training configuration is inconsistent."""


class EvaluationError(TempcrError, ValueError):
    """Raised when gold and predicted relation sets cannot be compared."""


class CheckpointError(TempcrError, ValueError):
    """Raised when a checkpoint directory is incomplete or inconsistent."""


class ArtifactStoreError(TempcrError, RuntimeError):
    """Raised when run artifacts cannot be published."""


__all__ = [
    "ArtifactStoreError",
    "CandidateError",
    "CheckpointError",
    "CorpusFormatError",
    "EvaluationError",
    "ShapeError",
    "SynthSpecError",
    "TempcrError",
    "TrainingError",
    "VocabularyError",
]
