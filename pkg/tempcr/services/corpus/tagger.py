"""Suffix-rule POS tagger used only for synthetic corpora."""

from __future__ import annotations

from typing import Dict, Sequence, Tuple

from .preprocess import PUNCTUATION

_CLOSED_CLASS: Dict[str, str] = {
    "during": "IN",
    "after": "IN",
    "before": "IN",
    "last": "JJ",
    "next": "JJ",
    "this": "DT",
    "the": "DT",
}

_SUFFIX_RULES: Tuple[Tuple[str, str], ...] = (
    ("tion", "NN"),
    ("ing", "VBG"),
    ("ed", "VBD"),
    ("ous", "JJ"),
    ("al", "JJ"),
    ("day", "NNP"),
    ("ly", "RB"),
)


def fallback_pos_tag(surface: str) -> str:
    """Tag a single surface with a coarse Penn-style tag."""
    if not surface:
        return "NN"
    if surface == "\n":
        return "NL"
    if all(char in PUNCTUATION for char in surface):
        return "."
    if surface.isdigit():
        return "CD"
    lowered = surface.lower()
    if lowered in _CLOSED_CLASS:
        return _CLOSED_CLASS[lowered]
    for suffix, tag in _SUFFIX_RULES:
        if lowered.endswith(suffix):
            return tag
    return "NN"


def tag_tokens(surfaces: Sequence[str]) -> Tuple[str, ...]:
    return tuple(fallback_pos_tag(surface) for surface in surfaces)


__all__ = ["fallback_pos_tag", "tag_tokens"]
