"""Whitespace/punctuation tokenisation with lowercasing and digit conflation."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import List

from ..errors import VocabularyError
from .models import Corpus, Document, Token

PUNCTUATION = ",./\\\"'=+-;:()!?<>%&$*|[]{}"
NEWLINE = "\n"

_PUNCT_CLASS = re.escape(PUNCTUATION)
# Newlines are tokens; every other whitespace character (tab included) separates.
_TOKEN_RE = re.compile(rf"\n|[{_PUNCT_CLASS}]|[^\s{_PUNCT_CLASS}]+")
_DIGIT_RE = re.compile(r"\d")


@dataclass(frozen=True)
class PreprocessConfig:
    lowercase: bool = True
    digit_char: str = "5"
    min_token_frequency: int = 2

    def __post_init__(self) -> None:
        if len(self.digit_char) != 1:
            raise VocabularyError("digit conflation character must be a single character")
        if self.min_token_frequency < 1:
            raise VocabularyError("min-token-frequency must be at least 1")

    @classmethod
    def from_config(cls, config: object) -> "PreprocessConfig":
        return cls(
            lowercase=bool(getattr(config, "LOWERCASE", True)),
            digit_char=str(getattr(config, "DIGIT_CHAR", "5")),
            min_token_frequency=int(getattr(config, "MIN_TOKEN_FREQUENCY", 2)),
        )


def normalize_surface(surface: str, cfg: PreprocessConfig) -> str:
    text = surface.lower() if cfg.lowercase else surface
    return _DIGIT_RE.sub(cfg.digit_char, text)


def preprocess(raw_text: str, cfg: PreprocessConfig = PreprocessConfig()) -> List[str]:
    """Split ``raw_text`` into normalised token surfaces."""
    if not raw_text:
        return []
    return [normalize_surface(piece, cfg) for piece in _TOKEN_RE.findall(raw_text)]


def normalize_document(document: Document, cfg: PreprocessConfig) -> Document:
    """Normalise token surfaces in place of re-tokenising, so entity spans stay valid."""
    tokens = tuple(
        replace(token, surface=normalize_surface(token.surface, cfg)) for token in document.tokens
    )
    return Document(
        id=document.id,
        tokens=tokens,
        entities=document.entities,
        relations=document.relations,
    )


def normalize_corpus(corpus: Corpus, cfg: PreprocessConfig) -> Corpus:
    return Corpus(
        split=corpus.split,
        documents=tuple(normalize_document(document, cfg) for document in corpus.documents),
    )


def tokenize_texts(texts: List[str], cfg: PreprocessConfig) -> List[List[str]]:
    return [preprocess(text, cfg) for text in texts]


__all__ = [
    "NEWLINE",
    "PUNCTUATION",
    "PreprocessConfig",
    "normalize_corpus",
    "normalize_document",
    "normalize_surface",
    "preprocess",
    "tokenize_texts",
]
