"""Deterministic synthetic corpora standing in for access-restricted clinical notes.

Two planted containment rules make the labels learnable:

* ``lexical``: a container-class event immediately followed (next entity) by a
  contained-class event. Class membership is only visible through the words'
  surrounding context, and half of each lexicon never occurs in labeled
  training documents, so distributional (skip-gram) embeddings are what lets a
  classifier generalise to the unseen half.
* ``order``: a timex immediately followed by an event whose left neighbour is
  the cue word. The same cue placed right of the event is a negative decoy, so
  only order-aware features separate the two.

Positive:negative candidate ratio is calibrated document by document against
a running total so the corpus-wide ratio tracks ``negatives_per_positive``.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import SynthSpecError
from .models import Corpus, Document, Entity, EntityKind, Relation, Split, Token
from .tagger import fallback_pos_tag

logger = logging.getLogger(__name__)

DEFAULT_SPEC_PATH = Path(__file__).resolve().parent.parent / "fixtures" / "synth_default.json"

KNOWN_RULES = ("lexical", "order")
CUE_WORD = "during"

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"
_SYLLABLES = tuple(c + v for c in _CONSONANTS for v in _VOWELS)

_TIMEX_EXPRESSIONS: Tuple[Tuple[str, ...], ...] = (
    ("today",),
    ("yesterday",),
    ("tomorrow",),
    ("monday",),
    ("friday",),
    ("2010",),
    ("1998",),
    ("noon",),
    ("last", "week"),
    ("next", "month"),
    ("this", "morning"),
)


def _spell(number: int, syllables: int = 2) -> str:
    """Pronounceable, digit-free surface for ``number``."""
    parts = []
    for _ in range(syllables):
        number, rest = divmod(number, len(_SYLLABLES))
        parts.append(_SYLLABLES[rest])
    return "".join(reversed(parts))


@dataclass(frozen=True)
class SynthSpec:
    """Shape of a synthetic corpus."""

    filler_words: int = 120
    container_lexicon: int = 24
    contained_lexicon: int = 24
    neutral_lexicon: int = 30
    context_words: int = 4
    documents: Mapping[str, int] = field(
        default_factory=lambda: {"train": 40, "dev": 12, "test": 12}
    )
    events_per_document: int = 10
    timexes_per_document: int = 2
    min_gap: int = 1
    max_gap: int = 4
    relation_rules: Tuple[str, ...] = KNOWN_RULES
    negatives_per_positive: float = 36.0
    labeled_lexicon_fraction: float = 0.5
    context_probability: float = 0.8
    unlabeled_texts: int = 150
    max_dist: int = 30

    @classmethod
    def from_mapping(cls, raw: Mapping[str, object]) -> "SynthSpec":
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(raw) - known)
        if unknown:
            raise SynthSpecError(f"Unknown synthetic spec keys: {', '.join(unknown)}")
        values = dict(raw)
        if "relation_rules" in values:
            values["relation_rules"] = tuple(values["relation_rules"])  # type: ignore[arg-type]
        if "documents" in values:
            values["documents"] = dict(values["documents"])  # type: ignore[arg-type]
        return cls(**values)  # type: ignore[arg-type]

    def to_mapping(self) -> Dict[str, object]:
        payload = asdict(self)
        payload["relation_rules"] = list(self.relation_rules)
        payload["documents"] = dict(self.documents)
        return payload

    def validate(self) -> None:
        unknown = [rule for rule in self.relation_rules if rule not in KNOWN_RULES]
        if unknown:
            raise SynthSpecError(f"Unknown relation rules: {', '.join(unknown)}")
        if self.relation_rules and self.events_per_document < 2:
            raise SynthSpecError("relation rules need at least 2 events per document")
        if "order" in self.relation_rules and self.timexes_per_document < 1:
            raise SynthSpecError("the order rule needs at least 1 timex per document")
        if self.events_per_document < 0 or self.timexes_per_document < 0:
            raise SynthSpecError("entity counts must be non-negative")
        if self.min_gap < 1 or self.max_gap < self.min_gap:
            raise SynthSpecError("gaps must satisfy 1 <= min_gap <= max_gap")
        if self.max_gap > self.max_dist:
            raise SynthSpecError("max_gap must not exceed max_dist")
        if self.negatives_per_positive <= 0:
            raise SynthSpecError("negatives_per_positive must be positive")
        if not 0.0 < self.labeled_lexicon_fraction <= 1.0:
            raise SynthSpecError("labeled_lexicon_fraction must lie in (0, 1]")
        if min(self.container_lexicon, self.contained_lexicon, self.neutral_lexicon) < 1:
            raise SynthSpecError("every event lexicon needs at least one word")
        if self.filler_words < 1 or self.context_words < 1:
            raise SynthSpecError("filler and context vocabularies must be non-empty")
        for split_name, count in self.documents.items():
            if split_name not in {split.value for split in Split}:
                raise SynthSpecError(f"Unknown split '{split_name}'")
            if int(count) < 0:
                raise SynthSpecError(f"document count for '{split_name}' must be non-negative")


def load_synth_spec(path: Optional[Path] = None) -> SynthSpec:
    """Load a :class:`SynthSpec` from a JSON fixture (the bundled default when omitted)."""
    source = Path(path) if path is not None else DEFAULT_SPEC_PATH
    if not source.exists():
        raise SynthSpecError(f"Synthetic spec not found at '{source}'.")
    try:
        raw = json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SynthSpecError(f"Unable to decode synthetic spec '{source}'.") from exc
    if not isinstance(raw, dict):
        raise SynthSpecError("Synthetic spec must be a JSON object.")
    return SynthSpec.from_mapping(raw)


@dataclass(frozen=True)
class _Lexicon:
    fillers: Tuple[str, ...]
    containers: Tuple[str, ...]
    contained: Tuple[str, ...]
    neutral: Tuple[str, ...]
    container_context: Tuple[str, ...]
    contained_context: Tuple[str, ...]

    @classmethod
    def build(cls, spec: SynthSpec) -> "_Lexicon":
        # Disjoint number ranges keep every class distinct even without suffixes.
        return cls(
            fillers=tuple(_spell(k) for k in range(spec.filler_words)),
            containers=tuple(_spell(1000 + k) + "tion" for k in range(spec.container_lexicon)),
            contained=tuple(_spell(1500 + k) + "ing" for k in range(spec.contained_lexicon)),
            neutral=tuple(_spell(2000 + k) + "ed" for k in range(spec.neutral_lexicon)),
            container_context=tuple(_spell(3000 + k) + "al" for k in range(spec.context_words)),
            contained_context=tuple(_spell(3500 + k) + "ous" for k in range(spec.context_words)),
        )

    def limited(self, fraction: float) -> "_Lexicon":
        def head(words: Tuple[str, ...]) -> Tuple[str, ...]:
            return words[: max(1, math.ceil(fraction * len(words)))]

        return _Lexicon(
            fillers=self.fillers,
            containers=head(self.containers),
            contained=head(self.contained),
            neutral=self.neutral,
            container_context=self.container_context,
            contained_context=self.contained_context,
        )


@dataclass
class _RatioTracker:
    negatives_per_positive: float
    candidates: int = 0
    positives: int = 0

    def quota(self, document_candidates: int) -> int:
        self.candidates += document_candidates
        target = int(round(self.candidates / (1.0 + self.negatives_per_positive)))
        return max(0, target - self.positives)


@dataclass
class _Layout:
    kinds: List[EntityKind]
    gaps: List[int]
    trailing: int
    timex_words: Dict[int, Tuple[str, ...]]

    def spans(self) -> List[Tuple[int, int]]:
        spans = []
        position = 0
        for slot, kind in enumerate(self.kinds):
            position += self.gaps[slot]
            length = len(self.timex_words[slot]) if kind is EntityKind.TIMEX3 else 1
            spans.append((position, position + length))
            position += length
        return spans


def _span_distance(first: Tuple[int, int], second: Tuple[int, int]) -> int:
    if first[1] <= second[0]:
        return second[0] - first[1]
    if second[1] <= first[0]:
        return first[0] - second[1]
    return 0


def _candidate_count(layout: _Layout, max_dist: int) -> int:
    spans = layout.spans()
    count = 0
    for i, kind_i in enumerate(layout.kinds):
        for j, kind_j in enumerate(layout.kinds):
            if i == j:
                continue
            if kind_i is EntityKind.TIMEX3 and kind_j is EntityKind.TIMEX3:
                continue
            if _span_distance(spans[i], spans[j]) <= max_dist:
                count += 1
    return count


class _DocumentBuilder:
    def __init__(self, spec: SynthSpec, lexicon: _Lexicon, rng: np.random.Generator) -> None:
        self._spec = spec
        self._lexicon = lexicon
        self._rng = rng

    def _choice(self, words: Sequence[str]) -> str:
        return words[int(self._rng.integers(len(words)))]

    def layout(self) -> _Layout:
        spec = self._spec
        kinds = [EntityKind.EVENT] * spec.events_per_document + [
            EntityKind.TIMEX3
        ] * spec.timexes_per_document
        order = self._rng.permutation(len(kinds))
        kinds = [kinds[index] for index in order]
        gaps = [int(g) for g in self._rng.integers(spec.min_gap, spec.max_gap + 1, size=len(kinds))]
        trailing = int(self._rng.integers(spec.min_gap, spec.max_gap + 1))
        timex_words = {
            slot: _TIMEX_EXPRESSIONS[int(self._rng.integers(len(_TIMEX_EXPRESSIONS)))]
            for slot, kind in enumerate(kinds)
            if kind is EntityKind.TIMEX3
        }
        return _Layout(kinds=kinds, gaps=gaps, trailing=trailing, timex_words=timex_words)

    def _choose_sites(self, layout: _Layout, quota: int) -> List[Tuple[str, int]]:
        rules = self._spec.relation_rules
        if not rules or quota <= 0:
            return []
        kinds = layout.kinds
        options: List[Tuple[str, int]] = []
        for slot in range(len(kinds) - 1):
            if kinds[slot + 1] is not EntityKind.EVENT:
                continue
            if kinds[slot] is EntityKind.EVENT and "lexical" in rules:
                options.append(("lexical", slot))
            if kinds[slot] is EntityKind.TIMEX3 and "order" in rules:
                options.append(("order", slot))
        # Order sites are scarcer (one per timex), so they are offered first.
        shuffled = [options[index] for index in self._rng.permutation(len(options))]
        shuffled.sort(key=lambda option: option[0] != "order")

        used: set[int] = set()
        sites: List[Tuple[str, int]] = []
        for rule, slot in shuffled:
            if len(sites) >= quota:
                break
            if slot in used or slot + 1 in used:
                continue
            sites.append((rule, slot))
            used.update((slot, slot + 1))
        return sorted(sites, key=lambda site: site[1])

    def build(
        self,
        document_id: str,
        tracker: Optional[_RatioTracker],
    ) -> Tuple[List[str], List[Entity], List[Relation]]:
        spec = self._spec
        lexicon = self._lexicon
        layout = self.layout()
        candidates = _candidate_count(layout, spec.max_dist)
        quota = tracker.quota(candidates) if tracker is not None else max(
            0, int(round(candidates / (1.0 + spec.negatives_per_positive)))
        )
        sites = self._choose_sites(layout, quota)
        kinds = layout.kinds
        slot_count = len(kinds)

        words: Dict[int, str] = {}
        cue_before: set[int] = set()
        cue_after: set[int] = set()
        for rule, slot in sites:
            if rule == "lexical":
                words[slot] = self._choice(lexicon.containers)
                words[slot + 1] = self._choice(lexicon.contained)
            else:
                words[slot + 1] = self._choice(lexicon.neutral)
                cue_before.add(slot + 1)

        if tracker is not None:
            tracker.positives += len(sites)

        # Left-to-right fill; a contained word never directly follows a
        # container outside a lexical site.
        site_slots = {slot for _, slot in sites} | {slot + 1 for _, slot in sites}
        for slot in range(slot_count):
            if slot in site_slots or kinds[slot] is not EntityKind.EVENT:
                continue
            roll = float(self._rng.random())
            previous = words.get(slot - 1)
            if roll < 0.15:
                words[slot] = self._choice(lexicon.containers)
            elif roll < 0.30 and previous not in lexicon.containers:
                words[slot] = self._choice(lexicon.contained)
            else:
                words[slot] = self._choice(lexicon.neutral)
                if (
                    "order" in spec.relation_rules
                    and slot > 0
                    and kinds[slot - 1] is EntityKind.TIMEX3
                    and roll > 0.7
                    and (slot + 1 >= slot_count or layout.gaps[slot + 1] >= 2)
                ):
                    cue_after.add(slot)

        return self._render(document_id, layout, words, cue_before, cue_after, sites)

    def _gap_tokens(self, count: int, next_word: Optional[str], cue: bool) -> List[str]:
        lexicon = self._lexicon
        tokens = [self._choice(lexicon.fillers) for _ in range(count)]
        if not tokens:
            return tokens
        if next_word is not None and float(self._rng.random()) < self._spec.context_probability:
            if next_word in lexicon.containers:
                tokens[-1] = self._choice(lexicon.container_context)
            elif next_word in lexicon.contained:
                tokens[-1] = self._choice(lexicon.contained_context)
        if cue:
            tokens[-1] = CUE_WORD
        return tokens

    def _render(
        self,
        document_id: str,
        layout: _Layout,
        words: Dict[int, str],
        cue_before: set[int],
        cue_after: set[int],
        sites: List[Tuple[str, int]],
    ) -> Tuple[List[str], List[Entity], List[Relation]]:
        surfaces: List[str] = []
        entities: List[Entity] = []
        event_counter = 0
        timex_counter = 0
        slot_ids: Dict[int, str] = {}
        for slot, kind in enumerate(layout.kinds):
            next_word = words.get(slot) if kind is EntityKind.EVENT else None
            gap = self._gap_tokens(layout.gaps[slot], next_word, slot in cue_before)
            if slot - 1 in cue_after and gap:
                gap[0] = CUE_WORD
            surfaces.extend(gap)
            start = len(surfaces)
            if kind is EntityKind.EVENT:
                surfaces.append(words[slot])
                entity_id = f"e{event_counter}"
                event_counter += 1
            else:
                surfaces.extend(layout.timex_words[slot])
                entity_id = f"t{timex_counter}"
                timex_counter += 1
            slot_ids[slot] = entity_id
            entities.append(Entity(id=entity_id, kind=kind, start=start, end=len(surfaces)))
        trailing = self._gap_tokens(layout.trailing, None, False)
        if layout.kinds and len(layout.kinds) - 1 in cue_after and trailing:
            trailing[0] = CUE_WORD
        surfaces.extend(trailing)

        relations = [
            Relation(source=slot_ids[slot], target=slot_ids[slot + 1]) for _, slot in sites
        ]
        return surfaces, entities, relations


@dataclass(frozen=True)
class SyntheticCorpus:
    splits: Mapping[str, Corpus]
    raw_texts: Tuple[str, ...]

    def split(self, name: str) -> Corpus:
        return self.splits[name]


def generate_synthetic(spec: SynthSpec, seed: int) -> SyntheticCorpus:
    """Generate train/dev/test corpora plus unlabeled texts, deterministically under ``seed``."""
    spec.validate()
    rng = np.random.default_rng(seed)
    lexicon = _Lexicon.build(spec)
    tracker = _RatioTracker(spec.negatives_per_positive)

    splits: Dict[str, Corpus] = {}
    for split in Split:
        count = int(spec.documents.get(split.value, 0))
        split_lexicon = lexicon.limited(spec.labeled_lexicon_fraction) if split is Split.TRAIN else lexicon
        builder = _DocumentBuilder(spec, split_lexicon, rng)
        documents = []
        for index in range(count):
            document_id = f"{split.value}-{index:03d}"
            surfaces, entities, relations = builder.build(document_id, tracker)
            tokens = tuple(
                Token(surface=surface, pos=fallback_pos_tag(surface), index=position)
                for position, surface in enumerate(surfaces)
            )
            documents.append(
                Document(
                    id=document_id,
                    tokens=tokens,
                    entities=tuple(entities),
                    relations=tuple(relations),
                )
            )
        splits[split.value] = Corpus(split=split, documents=tuple(documents))

    builder = _DocumentBuilder(spec, lexicon, rng)
    raw_texts = []
    for index in range(spec.unlabeled_texts):
        surfaces, _, _ = builder.build(f"unlabeled-{index:05d}", None)
        raw_texts.append(_join_with_breaks(surfaces, rng))

    logger.info(
        "Synthetic corpus: %s documents, %d unlabeled texts, %d planted relations over %d candidates",
        {name: len(corpus) for name, corpus in splits.items()},
        len(raw_texts),
        tracker.positives,
        tracker.candidates,
    )
    return SyntheticCorpus(splits=splits, raw_texts=tuple(raw_texts))


def _join_with_breaks(surfaces: Sequence[str], rng: np.random.Generator) -> str:
    """Join tokens with spaces, occasionally ending a clause with a period and newline."""
    pieces: List[str] = []
    for surface in surfaces:
        pieces.append(surface)
        if float(rng.random()) < 0.05:
            pieces.append(".\n")
    return " ".join(pieces).replace(" .\n ", " .\n")


__all__ = [
    "CUE_WORD",
    "DEFAULT_SPEC_PATH",
    "KNOWN_RULES",
    "SynthSpec",
    "SyntheticCorpus",
    "generate_synthetic",
    "load_synth_spec",
]
