"""Service layer: corpus handling, models, training and evaluation."""

from __future__ import annotations

from .candidates import (
    CandidatePair,
    Label,
    PairKind,
    RCInput,
    build_rc_input,
    dump_candidates,
    generate_candidates,
    recall_ceiling,
    token_distance,
)
from .curves import emit_curves
from .errors import (
    ArtifactStoreError,
    CandidateError,
    CheckpointError,
    CorpusFormatError,
    EvaluationError,
    ShapeError,
    SynthSpecError,
    TempcrError,
    TrainingError,
    VocabularyError,
)
from .evaluation import (
    Metrics,
    PairIndex,
    RelationSet,
    aggregate_runs,
    closure_prf,
    decide_labels,
    paired_document_ttest,
    per_document_f,
    subset_metrics,
    transitive_closure,
)
from .pipeline import PreparedData, prepare_training_data
from .storage import (
    ArtifactConfig,
    ArtifactStore,
    LocalArtifactStore,
    RunDirectory,
    S3ArtifactStore,
    get_artifact_store,
    publish_run,
)

__all__ = [
    "ArtifactConfig",
    "ArtifactStore",
    "ArtifactStoreError",
    "CandidateError",
    "CandidatePair",
    "CheckpointError",
    "CorpusFormatError",
    "EvaluationError",
    "Label",
    "LocalArtifactStore",
    "Metrics",
    "PairIndex",
    "PairKind",
    "PreparedData",
    "RCInput",
    "RelationSet",
    "RunDirectory",
    "S3ArtifactStore",
    "ShapeError",
    "SynthSpecError",
    "TempcrError",
    "TrainingError",
    "VocabularyError",
    "aggregate_runs",
    "build_rc_input",
    "closure_prf",
    "decide_labels",
    "dump_candidates",
    "emit_curves",
    "generate_candidates",
    "get_artifact_store",
    "paired_document_ttest",
    "per_document_f",
    "prepare_training_data",
    "publish_run",
    "recall_ceiling",
    "subset_metrics",
    "token_distance",
    "transitive_closure",
]
