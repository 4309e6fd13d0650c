"""Score a saved checkpoint on a held-out corpus."""

from __future__ import annotations

import argparse
import json
from pathlib import Path
from typing import Any

from ...services.corpus.io import load_corpus
from ...services.corpus.models import Split
from ...services.corpus.preprocess import PreprocessConfig, normalize_corpus
from ...services.trainer.scoring import evaluate_model, load_trained_model
from .base import Command


def configure(parser: argparse.ArgumentParser, config: Any) -> None:
    parser.add_argument("--checkpoint", type=Path, required=True, help="checkpoint directory")
    parser.add_argument("--corpus", type=Path, required=True, help="corpus to score (JSON lines)")
    parser.add_argument("--split", choices=[split.value for split in Split], default=Split.TEST.value)
    parser.add_argument("--out", type=Path, help="metrics JSON file; printed when omitted")


def handle(args: argparse.Namespace, config: Any) -> int:
    model, vocab, settings = load_trained_model(args.checkpoint)
    corpus = normalize_corpus(load_corpus(args.corpus, args.split), PreprocessConfig.from_config(config))
    report, _ = evaluate_model(model, vocab, corpus, settings)
    report["setting"] = settings.setting.value
    payload = json.dumps(report, indent=2, sort_keys=True)
    if args.out is None:
        print(payload)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(payload + "\n", encoding="utf-8")
        print(f"F {report['overall']['F']:.4f} -> {args.out}")
    return 0


command = Command(name="eval", help="score a checkpoint", configure=configure, handler=handle)

__all__ = ["command"]
