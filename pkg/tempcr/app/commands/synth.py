"""Generate a synthetic labelled corpus and unlabeled texts."""

from __future__ import annotations

import argparse
import json
from pathlib import Path
from typing import Any

from ...services.corpus.io import save_corpus, save_raw_texts
from ...services.corpus.synthetic import generate_synthetic, load_synth_spec
from .base import Command, add_seed_argument


def configure(parser: argparse.ArgumentParser, config: Any) -> None:
    add_seed_argument(parser, config)
    parser.add_argument("--spec", type=Path, help="synthetic spec JSON; defaults to the bundled one")
    parser.add_argument("--out", type=Path, required=True, help="output directory")


def handle(args: argparse.Namespace, config: Any) -> int:
    spec = load_synth_spec(args.spec)
    generated = generate_synthetic(spec, args.seed)
    out: Path = args.out
    for name, corpus in generated.splits.items():
        save_corpus(corpus, out / f"{name}.jsonl")
    save_raw_texts(generated.raw_texts, out / "raw")
    (out / "synth_spec.json").write_text(
        json.dumps({"seed": args.seed, **spec.to_mapping()}, indent=2, sort_keys=True), encoding="utf-8"
    )
    sizes = ", ".join(f"{name} {len(corpus)}" for name, corpus in generated.splits.items())
    print(f"wrote {sizes} documents and {len(generated.raw_texts)} raw texts to {out}")
    return 0


command = Command(name="synth", help="generate a synthetic corpus", configure=configure, handler=handle)

__all__ = ["command"]
