"""Build the vocabulary and dump the candidate pairs of a corpus."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

from ...services.candidates import dump_candidates, generate_candidates, recall_ceiling
from ...services.corpus.vocab import save_vocab
from .base import Command, add_data_arguments, prepare_data


def configure(parser: argparse.ArgumentParser, config: Any) -> None:
    add_data_arguments(parser, dev=False)
    parser.add_argument("--max-dist", type=int, default=config.MAX_DIST)
    parser.add_argument("--out", type=Path, required=True, help="output directory")


def handle(args: argparse.Namespace, config: Any) -> int:
    data = prepare_data(args, config)
    vocab_path = save_vocab(data.vocab, args.out / "vocab.txt")
    candidates = [
        pair for document in data.train.documents for pair in generate_candidates(document, args.max_dist)
    ]
    dump_candidates(candidates, args.out / "candidates.csv")
    ceiling = recall_ceiling(data.train.documents, candidates)
    print(
        f"vocabulary {len(data.vocab)} tokens -> {vocab_path}; "
        f"{len(candidates)} candidates; recall ceiling {ceiling:.4f}"
    )
    return 0


command = Command(
    name="preprocess",
    help="build the vocabulary and candidate dump",
    configure=configure,
    handler=handle,
)

__all__ = ["command"]
