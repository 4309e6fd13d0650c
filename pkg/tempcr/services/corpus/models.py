"""Dataclasses representing annotated clinical-style documents."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Mapping, Tuple


class EntityKind(str, Enum):
    """Annotated entity types."""

    EVENT = "EVENT"
    TIMEX3 = "TIMEX3"


class RelationLabel(str, Enum):
    CONTAINS = "CONTAINS"


class Split(str, Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    index: int


@dataclass(frozen=True)
class Entity:
    """An annotated span over the half-open token interval ``[start, end)``."""

    id: str
    kind: EntityKind
    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class Relation:
    """Directed containment: ``source`` contains ``target``."""

    source: str
    target: str
    label: RelationLabel = RelationLabel.CONTAINS


@dataclass(frozen=True)
class Document:
    id: str
    tokens: Tuple[Token, ...]
    entities: Tuple[Entity, ...] = ()
    relations: Tuple[Relation, ...] = ()
    _entity_index: Mapping[str, Entity] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "_entity_index", {entity.id: entity for entity in self.entities})

    def entity(self, entity_id: str) -> Entity:
        return self._entity_index[entity_id]

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self._entity_index

    @property
    def surfaces(self) -> Tuple[str, ...]:
        return tuple(token.surface for token in self.tokens)

    def span_surfaces(self, entity: Entity) -> Tuple[str, ...]:
        return tuple(token.surface for token in self.tokens[entity.start : entity.end])

    def gold_edges(self) -> frozenset[Tuple[str, str]]:
        return frozenset((relation.source, relation.target) for relation in self.relations)

    def text(self) -> str:
        """Whitespace-joined surface text, used as unlabeled skip-gram input."""
        return " ".join(self.surfaces)


@dataclass(frozen=True)
class Corpus:
    split: Split
    documents: Tuple[Document, ...] = ()

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def by_id(self) -> Dict[str, Document]:
        return {document.id: document for document in self.documents}

    def subset(self, document_ids: Tuple[str, ...] | list[str] | set[str]) -> "Corpus":
        wanted = set(document_ids)
        return Corpus(
            split=self.split,
            documents=tuple(doc for doc in self.documents if doc.id in wanted),
        )

    def token_count(self) -> int:
        return sum(len(document.tokens) for document in self.documents)


__all__ = [
    "Corpus",
    "Document",
    "Entity",
    "EntityKind",
    "Relation",
    "RelationLabel",
    "Split",
    "Token",
]
