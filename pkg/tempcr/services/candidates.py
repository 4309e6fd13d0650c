"""Candidate pair generation and relation-classifier input construction."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from .corpus.models import Document, Entity, EntityKind
from .corpus.vocab import A1_CLOSE, A1_OPEN, A2_CLOSE, A2_OPEN, PAD_INDEX, POS_PAD_INDEX, Vocabulary
from .errors import CandidateError

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIST = 30
DEFAULT_CONTEXT = 10
DEFAULT_D_CLIP = 40

CONTAINS_CLASS = 0
NONE_CLASS = 1


class PairKind(str, Enum):
    EE = "EE"
    TE = "TE"


class Label(str, Enum):
    CONTAINS = "CONTAINS"
    NONE = "NONE"

    @property
    def class_index(self) -> int:
        return CONTAINS_CLASS if self is Label.CONTAINS else NONE_CLASS


@dataclass(frozen=True)
class CandidatePair:
    doc_id: str
    arg1: str
    arg2: str
    kind: PairKind
    label: Label
    distance: int

    @property
    def edge(self) -> Tuple[str, str]:
        return (self.arg1, self.arg2)


@dataclass(frozen=True)
class RCInput:
    """Index sequences for one candidate; all four have the same length."""

    tokens: Tuple[int, ...]
    pos: Tuple[int, ...]
    pf1: Tuple[int, ...]
    pf2: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True, eq=False)
class RCBatch:
    """Right-padded RC inputs; pf indices are shifted by ``d_clip`` into ``[0, 2*d_clip]``."""

    tokens: np.ndarray
    pos: np.ndarray
    pf1: np.ndarray
    pf2: np.ndarray
    lengths: np.ndarray
    labels: np.ndarray

    def __len__(self) -> int:
        return int(self.lengths.shape[0])


def token_distance(first: Entity, second: Entity) -> int:
    """Tokens strictly between two spans; 0 when adjacent or overlapping."""
    if first.end <= second.start:
        return second.start - first.end
    if second.end <= first.start:
        return first.start - second.end
    return 0


def pair_kind(first: Entity, second: Entity) -> PairKind | None:
    timexes = (first.kind is EntityKind.TIMEX3) + (second.kind is EntityKind.TIMEX3)
    if timexes == 0:
        return PairKind.EE
    if timexes == 1:
        return PairKind.TE
    return None


def generate_candidates(doc: Document, max_dist: int = DEFAULT_MAX_DIST) -> List[CandidatePair]:
    """All ordered EE/TE pairs within ``max_dist`` tokens, labelled from the gold edges."""
    gold = doc.gold_edges()
    ordered = sorted(doc.entities, key=lambda entity: (entity.start, entity.end, entity.id))
    candidates: List[CandidatePair] = []
    for first in ordered:
        for second in ordered:
            if first.id == second.id:
                continue
            kind = pair_kind(first, second)
            if kind is None:
                continue
            distance = token_distance(first, second)
            if distance > max_dist:
                continue
            label = Label.CONTAINS if (first.id, second.id) in gold else Label.NONE
            candidates.append(
                CandidatePair(
                    doc_id=doc.id,
                    arg1=first.id,
                    arg2=second.id,
                    kind=kind,
                    label=label,
                    distance=distance,
                )
            )
    return candidates


def _position_feature(position: int, entity: Entity, d_clip: int) -> int:
    if position < entity.start:
        offset = position - entity.start
    elif position >= entity.end:
        offset = position - (entity.end - 1)
    else:
        offset = 0
    return max(-d_clip, min(d_clip, offset))


def build_rc_input(
    doc: Document,
    pair: CandidatePair,
    vocab: Vocabulary,
    context: int = DEFAULT_CONTEXT,
    d_clip: int = DEFAULT_D_CLIP,
) -> RCInput:
    """Window of the document around both arguments with indicator tags inserted.

    Tags sit at the argument boundaries and carry the position features of
    the token they wrap; their POS index is the reserved ``<tag>`` entry.
    """
    if pair.doc_id != doc.id:
        raise CandidateError(f"candidate belongs to '{pair.doc_id}', not '{doc.id}'")
    if not (doc.has_entity(pair.arg1) and doc.has_entity(pair.arg2)):
        raise CandidateError(
            f"candidate ({pair.arg1}, {pair.arg2}) references entities missing from '{doc.id}'"
        )
    arg1 = doc.entity(pair.arg1)
    arg2 = doc.entity(pair.arg2)
    low = max(0, min(arg1.start, arg2.start) - context)
    high = min(len(doc.tokens), max(arg1.end, arg2.end) + context)

    opens: Dict[int, List[str]] = {arg1.start: [A1_OPEN]}
    opens.setdefault(arg2.start, []).append(A2_OPEN)
    closes: Dict[int, List[str]] = {arg1.end - 1: [A1_CLOSE]}
    closes.setdefault(arg2.end - 1, []).append(A2_CLOSE)

    tokens: List[int] = []
    pos: List[int] = []
    pf1: List[int] = []
    pf2: List[int] = []

    def emit(token_index: int, pos_index: int, position: int) -> None:
        tokens.append(token_index)
        pos.append(pos_index)
        pf1.append(_position_feature(position, arg1, d_clip))
        pf2.append(_position_feature(position, arg2, d_clip))

    for position in range(low, high):
        for tag in opens.get(position, ()):
            emit(vocab.tag_index(tag), vocab.pos_tag_index, position)
        token = doc.tokens[position]
        emit(vocab.encode_token(token.surface), vocab.encode_pos(token.pos), position)
        for tag in closes.get(position, ()):
            emit(vocab.tag_index(tag), vocab.pos_tag_index, position)

    return RCInput(tokens=tuple(tokens), pos=tuple(pos), pf1=tuple(pf1), pf2=tuple(pf2))


def collate(
    inputs: Sequence[RCInput],
    labels: Sequence[int] | None = None,
    *,
    d_clip: int = DEFAULT_D_CLIP,
    pad_index: int = PAD_INDEX,
    pos_pad_index: int = POS_PAD_INDEX,
) -> RCBatch:
    """Stack RC inputs into right-padded arrays.

    Padding uses the reserved PAD entries; masking by ``lengths`` keeps it out of every result.
    """
    if not inputs:
        raise CandidateError("cannot collate an empty batch")
    lengths = np.asarray([len(item) for item in inputs], dtype=np.int64)
    if int(lengths.min()) == 0:
        raise CandidateError("RC inputs must be non-empty")
    width = int(lengths.max())
    count = len(inputs)
    tokens = np.full((count, width), pad_index, dtype=np.int64)
    pos = np.full((count, width), pos_pad_index, dtype=np.int64)
    pf1 = np.full((count, width), d_clip, dtype=np.int64)
    pf2 = np.full((count, width), d_clip, dtype=np.int64)
    for row, item in enumerate(inputs):
        length = len(item)
        tokens[row, :length] = item.tokens
        pos[row, :length] = item.pos
        pf1[row, :length] = np.asarray(item.pf1, dtype=np.int64) + d_clip
        pf2[row, :length] = np.asarray(item.pf2, dtype=np.int64) + d_clip
    label_array = (
        np.asarray(labels, dtype=np.int64) if labels is not None else np.zeros(count, dtype=np.int64)
    )
    if label_array.shape != (count,):
        raise CandidateError("labels must align with inputs")
    return RCBatch(tokens=tokens, pos=pos, pf1=pf1, pf2=pf2, lengths=lengths, labels=label_array)


def recall_ceiling(documents: Iterable[Document], candidates: Iterable[CandidatePair]) -> float:
    """Fraction of gold relations whose ordered pair appears among the candidates."""
    generated = {(pair.doc_id, pair.arg1, pair.arg2) for pair in candidates}
    gold = [
        (document.id, source, target)
        for document in documents
        for source, target in document.gold_edges()
    ]
    if not gold:
        return 1.0
    covered = sum(1 for edge in gold if edge in generated)
    return covered / len(gold)


CANDIDATE_COLUMNS = ("doc_id", "arg1", "arg2", "kind", "distance", "label")


def dump_candidates(pairs: Iterable[CandidatePair], path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CANDIDATE_COLUMNS)
        for pair in pairs:
            writer.writerow(
                (pair.doc_id, pair.arg1, pair.arg2, pair.kind.value, pair.distance, pair.label.value)
            )
    return target


__all__ = [
    "CANDIDATE_COLUMNS",
    "CONTAINS_CLASS",
    "CandidatePair",
    "Label",
    "NONE_CLASS",
    "PairKind",
    "RCBatch",
    "RCInput",
    "build_rc_input",
    "collate",
    "dump_candidates",
    "generate_candidates",
    "pair_kind",
    "recall_ceiling",
    "token_distance",
]
