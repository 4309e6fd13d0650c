"""Token and POS vocabularies with reserved entries."""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import VocabularyError
from .models import Corpus
from .preprocess import PreprocessConfig, normalize_surface, preprocess

logger = logging.getLogger(__name__)

UNK = "<unk>"
PAD = "<pad>"
A1_OPEN = "<a1>"
A1_CLOSE = "</a1>"
A2_OPEN = "<a2>"
A2_CLOSE = "</a2>"
INDICATOR_TAGS: Tuple[str, ...] = (A1_OPEN, A1_CLOSE, A2_OPEN, A2_CLOSE)
RESERVED_TOKENS: Tuple[str, ...] = (UNK, PAD) + INDICATOR_TAGS

POS_PAD = "<pad>"
POS_UNK = "<unk>"
POS_TAG = "<tag>"
RESERVED_POS: Tuple[str, ...] = (POS_PAD, POS_UNK, POS_TAG)
PAD_INDEX = RESERVED_TOKENS.index(PAD)
POS_PAD_INDEX = RESERVED_POS.index(POS_PAD)

_ESCAPES = (("\\", "\\\\"), ("\n", "\\n"), ("\t", "\\t"), (" ", "\\s"))


def escape_token(token: str) -> str:
    for raw, escaped in _ESCAPES:
        token = token.replace(raw, escaped)
    return token


def unescape_token(token: str) -> str:
    result: List[str] = []
    index = 0
    mapping = {"\\": "\\", "n": "\n", "t": "\t", "s": " "}
    while index < len(token):
        char = token[index]
        if char == "\\" and index + 1 < len(token) and token[index + 1] in mapping:
            result.append(mapping[token[index + 1]])
            index += 2
            continue
        result.append(char)
        index += 1
    return "".join(result)


class Vocabulary:
    """Dense token and POS index maps.

    Reserved entries come first so their indices are stable across corpora.
    ``frequencies`` keeps the raw training counts (labeled plus unlabeled text),
    which the evaluation buckets rely on.
    """

    def __init__(
        self,
        tokens: Sequence[str],
        pos_tags: Sequence[str] = (),
        frequencies: Optional[Mapping[str, int]] = None,
    ) -> None:
        ordered = list(RESERVED_TOKENS) + [token for token in tokens if token not in RESERVED_TOKENS]
        if len(set(ordered)) != len(ordered):
            raise VocabularyError("vocabulary tokens must be unique")
        self._tokens: Tuple[str, ...] = tuple(ordered)
        self._token_index: Dict[str, int] = {token: index for index, token in enumerate(ordered)}

        pos_ordered = list(RESERVED_POS) + [tag for tag in pos_tags if tag not in RESERVED_POS]
        self._pos: Tuple[str, ...] = tuple(dict.fromkeys(pos_ordered))
        self._pos_index: Dict[str, int] = {tag: index for index, tag in enumerate(self._pos)}
        self.frequencies: Counter[str] = Counter(frequencies or {})

    # Sizes ----------------------------------------------------------------------
    def __len__(self) -> int:
        return len(self._tokens)

    @property
    def pos_size(self) -> int:
        return len(self._pos)

    @property
    def tokens(self) -> Tuple[str, ...]:
        return self._tokens

    @property
    def pos_tags(self) -> Tuple[str, ...]:
        return self._pos

    # Reserved indices -----------------------------------------------------------
    @property
    def unk_index(self) -> int:
        return self._token_index[UNK]

    @property
    def pad_index(self) -> int:
        return self._token_index[PAD]

    @property
    def pos_pad_index(self) -> int:
        return self._pos_index[POS_PAD]

    @property
    def pos_tag_index(self) -> int:
        return self._pos_index[POS_TAG]

    def tag_index(self, tag: str) -> int:
        if tag not in INDICATOR_TAGS:
            raise VocabularyError(f"'{tag}' is not a position indicator")
        return self._token_index[tag]

    # Lookups --------------------------------------------------------------------
    def __contains__(self, token: object) -> bool:
        return token in self._token_index

    def encode_token(self, surface: str) -> int:
        return self._token_index.get(surface, self._token_index[UNK])

    def encode_pos(self, tag: str) -> int:
        return self._pos_index.get(tag, self._pos_index[POS_UNK])

    def token(self, index: int) -> str:
        return self._tokens[index]

    def frequency(self, surface: str) -> int:
        return int(self.frequencies.get(surface, 0))

    # Persistence ----------------------------------------------------------------
    def dump_lines(self) -> List[str]:
        return [f"{escape_token(token)}\t{index}" for index, token in enumerate(self._tokens)]

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        for line in self.dump_lines():
            digest.update(line.encode("utf-8"))
            digest.update(b"\n")
        for tag in self._pos:
            digest.update(tag.encode("utf-8"))
            digest.update(b"\n")
        return digest.hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self._tokens == other._tokens and self._pos == other._pos

    def __repr__(self) -> str:  # pragma: no cover - debugging helper
        return f"<Vocabulary tokens={len(self._tokens)} pos={len(self._pos)}>"


def encode_token(vocab: Vocabulary, surface: str) -> int:
    """Index of ``surface``, or the UNK index when it is not in the vocabulary."""
    return vocab.encode_token(surface)


def count_frequencies(
    train_corpus: Corpus,
    sg_texts: Iterable[str],
    cfg: PreprocessConfig,
) -> Counter[str]:
    counts: Counter[str] = Counter()
    for document in train_corpus.documents:
        counts.update(normalize_surface(token.surface, cfg) for token in document.tokens)
    for text in sg_texts:
        counts.update(preprocess(text, cfg))
    return counts


def build_vocab(
    train_corpus: Corpus,
    sg_texts: Iterable[str] = (),
    cfg: PreprocessConfig = PreprocessConfig(),
) -> Vocabulary:
    """Build the shared vocabulary from the training corpus and unlabeled texts.

    Tokens seen fewer than ``cfg.min_token_frequency`` times are left out and
    fall back to UNK at encode time. Entries are ordered by descending count,
    ties broken alphabetically.
    """
    if train_corpus.token_count() == 0:
        raise VocabularyError("empty vocabulary source")
    counts = count_frequencies(train_corpus, sg_texts, cfg)
    if not counts:
        raise VocabularyError("empty vocabulary source")

    kept = sorted(
        (token for token, count in counts.items() if count >= cfg.min_token_frequency),
        key=lambda token: (-counts[token], token),
    )
    pos_tags = sorted(
        {token.pos for document in train_corpus.documents for token in document.tokens}
    )
    vocab = Vocabulary(kept, pos_tags, frequencies=counts)
    logger.info(
        "Vocabulary: %d tokens kept of %d distinct (min frequency %d), %d POS tags",
        len(vocab),
        len(counts),
        cfg.min_token_frequency,
        vocab.pos_size,
    )
    return vocab


def save_vocab(vocab: Vocabulary, path: Union[str, Path]) -> Path:
    """Write the ``token<TAB>index`` dump followed by a POS section."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    lines = vocab.dump_lines()
    pos_path = target.with_suffix(target.suffix + ".pos")
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")
    pos_path.write_text(
        "\n".join(f"{escape_token(tag)}\t{index}" for index, tag in enumerate(vocab.pos_tags)) + "\n",
        encoding="utf-8",
    )
    freq_path = target.with_suffix(target.suffix + ".freq")
    freq_path.write_text(
        "\n".join(
            f"{escape_token(token)}\t{count}"
            for token, count in sorted(vocab.frequencies.items(), key=lambda item: (-item[1], item[0]))
        )
        + "\n",
        encoding="utf-8",
    )
    return target


def _read_indexed(path: Path) -> List[str]:
    entries: List[Tuple[int, str]] = []
    for line_number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line:
            continue
        try:
            token, index = line.rsplit("\t", 1)
            entries.append((int(index), unescape_token(token)))
        except ValueError as exc:
            raise VocabularyError(f"{path}: malformed line {line_number}") from exc
    entries.sort()
    if [index for index, _ in entries] != list(range(len(entries))):
        raise VocabularyError(f"{path}: indices are not dense from 0")
    return [token for _, token in entries]


def load_vocab(path: Union[str, Path]) -> Vocabulary:
    source = Path(path)
    if not source.exists():
        raise VocabularyError(f"vocabulary file not found at '{source}'")
    tokens = _read_indexed(source)
    if tuple(tokens[: len(RESERVED_TOKENS)]) != RESERVED_TOKENS:
        raise VocabularyError(f"{source}: reserved entries must come first")

    pos_path = source.with_suffix(source.suffix + ".pos")
    pos_tags = _read_indexed(pos_path) if pos_path.exists() else []

    frequencies: Counter[str] = Counter()
    freq_path = source.with_suffix(source.suffix + ".freq")
    if freq_path.exists():
        for line in freq_path.read_text(encoding="utf-8").splitlines():
            if line:
                token, count = line.rsplit("\t", 1)
                frequencies[unescape_token(token)] = int(count)
    return Vocabulary(tokens[len(RESERVED_TOKENS) :], pos_tags, frequencies=frequencies)


__all__ = [
    "A1_CLOSE",
    "A1_OPEN",
    "A2_CLOSE",
    "A2_OPEN",
    "INDICATOR_TAGS",
    "PAD",
    "PAD_INDEX",
    "POS_PAD_INDEX",
    "RESERVED_POS",
    "RESERVED_TOKENS",
    "UNK",
    "Vocabulary",
    "build_vocab",
    "count_frequencies",
    "encode_token",
    "escape_token",
    "load_vocab",
    "save_vocab",
    "unescape_token",
]
