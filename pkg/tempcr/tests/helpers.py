"""Small builders shared by the test modules."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Sequence, Tuple

import pytest

from tempcr.services.corpus.models import Corpus, Document, Entity, EntityKind, Relation, Split, Token
from tempcr.services.corpus.synthetic import SynthSpec

RUN_SLOW = os.environ.get("TEMPCR_RUN_SLOW") == "1"

slow = pytest.mark.skipif(not RUN_SLOW, reason="set TEMPCR_RUN_SLOW=1 to run experiment checks")

EntitySpec = Tuple[str, str, int, int]


def make_document(
    doc_id: str,
    surfaces: Sequence[str],
    entities: Iterable[EntitySpec] = (),
    relations: Iterable[Tuple[str, str]] = (),
    pos: str = "NN",
) -> Document:
    return Document(
        id=doc_id,
        tokens=tuple(Token(surface=surface, pos=pos, index=i) for i, surface in enumerate(surfaces)),
        entities=tuple(
            Entity(id=entity_id, kind=EntityKind(kind), start=start, end=end)
            for entity_id, kind, start, end in entities
        ),
        relations=tuple(Relation(source=source, target=target) for source, target in relations),
    )


def make_corpus(*documents: Document, split: Split = Split.TRAIN) -> Corpus:
    return Corpus(split=split, documents=tuple(documents))


def write_jsonl(path: Path, records: Iterable[dict]) -> Path:
    path.write_text("".join(json.dumps(record) + "\n" for record in records), encoding="utf-8")
    return path


def tiny_spec(**overrides: object) -> SynthSpec:
    values = {
        "filler_words": 30,
        "container_lexicon": 4,
        "contained_lexicon": 4,
        "neutral_lexicon": 5,
        "context_words": 2,
        "documents": {"train": 8, "dev": 3, "test": 3},
        "events_per_document": 5,
        "timexes_per_document": 1,
        "negatives_per_positive": 8.0,
        "unlabeled_texts": 10,
    }
    values.update(overrides)
    return SynthSpec.from_mapping(values)
