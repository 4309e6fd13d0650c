"""JSON-lines corpus loading and saving."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable, List, Union

from pydantic import ValidationError

from ..errors import CorpusFormatError
from .models import Corpus, Document, Entity, EntityKind, Relation, RelationLabel, Split, Token
from .schema import DocumentRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _field_path(location: Iterable[object]) -> str:
    return ".".join(str(part) for part in location) or "document"


def _record_to_document(record: DocumentRecord) -> Document:
    token_count = len(record.tokens)
    entity_ids: set[str] = set()
    entities: List[Entity] = []
    for position, entity in enumerate(record.entities):
        if entity.id in entity_ids:
            raise CorpusFormatError(
                f"duplicate entity id '{entity.id}'",
                document_id=record.id,
                field=f"entities.{position}.id",
            )
        if entity.end > token_count:
            raise CorpusFormatError(
                f"span end {entity.end} exceeds token count {token_count}",
                document_id=record.id,
                field=f"entities.{position}.end",
            )
        entity_ids.add(entity.id)
        entities.append(
            Entity(id=entity.id, kind=EntityKind(entity.kind), start=entity.start, end=entity.end)
        )

    relations: List[Relation] = []
    for position, relation in enumerate(record.relations):
        for name in ("source", "target"):
            endpoint = getattr(relation, name)
            if endpoint not in entity_ids:
                raise CorpusFormatError(
                    f"unknown entity '{endpoint}'",
                    document_id=record.id,
                    field=f"relations.{position}.{name}",
                )
        if relation.source == relation.target:
            raise CorpusFormatError(
                "relation source equals target",
                document_id=record.id,
                field=f"relations.{position}",
            )
        relations.append(
            Relation(
                source=relation.source,
                target=relation.target,
                label=RelationLabel(relation.label),
            )
        )

    tokens = tuple(
        Token(surface=token.t, pos=token.pos, index=index)
        for index, token in enumerate(record.tokens)
    )
    return Document(
        id=record.id,
        tokens=tokens,
        entities=tuple(entities),
        relations=tuple(relations),
    )


def parse_document(raw: object, *, line_number: int = 0) -> Document:
    """Validate one decoded JSON object and convert it into a :class:`Document`."""
    document_id = raw.get("id") if isinstance(raw, dict) else None
    document_label = str(document_id) if document_id is not None else f"line {line_number}"
    try:
        record = DocumentRecord.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise CorpusFormatError(
            first.get("msg", "invalid value"),
            document_id=document_label,
            field=_field_path(first.get("loc", ())),
        ) from exc
    return _record_to_document(record)


def load_corpus(path: PathLike, split: Union[Split, str] = Split.TRAIN) -> Corpus:
    """Load a JSON-lines corpus file; one document per non-empty line."""
    file_path = Path(path)
    if not file_path.exists():
        raise CorpusFormatError(f"corpus file not found at '{file_path}'")

    documents: List[Document] = []
    seen: set[str] = set()
    with file_path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(
                    f"invalid JSON on line {line_number}: {exc.msg}"
                ) from exc
            document = parse_document(raw, line_number=line_number)
            if document.id in seen:
                raise CorpusFormatError(
                    "duplicate document id", document_id=document.id, field="id"
                )
            seen.add(document.id)
            documents.append(document)

    logger.info("Loaded %d documents from %s", len(documents), file_path)
    return Corpus(split=Split(split), documents=tuple(documents))


def document_to_record(document: Document) -> dict:
    """Serialise a document into the canonical JSON-lines mapping."""
    return {
        "id": document.id,
        "tokens": [{"t": token.surface, "pos": token.pos} for token in document.tokens],
        "entities": [
            {"id": entity.id, "kind": entity.kind.value, "start": entity.start, "end": entity.end}
            for entity in document.entities
        ],
        "relations": [
            {"source": relation.source, "target": relation.target, "label": relation.label.value}
            for relation in document.relations
        ],
    }


def save_corpus(corpus: Corpus, path: PathLike) -> Path:
    """Write ``corpus`` in canonical key order, one compact JSON object per line."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with file_path.open("w", encoding="utf-8") as handle:
        for document in corpus.documents:
            handle.write(json.dumps(document_to_record(document), ensure_ascii=False))
            handle.write("\n")
    return file_path


def load_raw_texts(directory: PathLike) -> List[str]:
    """Read every ``*.txt`` file below ``directory`` in sorted name order."""
    base = Path(directory)
    if not base.is_dir():
        raise CorpusFormatError(f"unlabeled text directory not found at '{base}'")
    return [path.read_text(encoding="utf-8") for path in sorted(base.glob("*.txt"))]


def save_raw_texts(texts: Iterable[str], directory: PathLike) -> List[Path]:
    base = Path(directory)
    base.mkdir(parents=True, exist_ok=True)
    written = []
    for index, text in enumerate(texts):
        target = base / f"{index:05d}.txt"
        target.write_text(text, encoding="utf-8")
        written.append(target)
    return written


__all__ = [
    "document_to_record",
    "load_corpus",
    "load_raw_texts",
    "parse_document",
    "save_corpus",
    "save_raw_texts",
]
