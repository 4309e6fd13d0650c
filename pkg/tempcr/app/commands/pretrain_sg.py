"""Pretrain skip-gram token embeddings."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

from ...services.corpus.sgdata import SgMode
from ...services.neural.embeddings import save_embeddings
from ...services.trainer.pretrain import pretrain_sg
from .base import Command, add_data_arguments, add_seed_argument, prepare_data


def configure(parser: argparse.ArgumentParser, config: Any) -> None:
    add_data_arguments(parser, dev=False)
    add_seed_argument(parser, config)
    parser.add_argument("--mode", choices=[mode.value for mode in SgMode], default=SgMode.SG.value)
    parser.add_argument("--embed-dim", type=int, default=config.EMBED_DIM)
    parser.add_argument("--window", type=int, default=config.WINDOW)
    parser.add_argument("--batch", type=int, default=config.BATCH_SIZE)
    parser.add_argument("--epochs", type=int, default=config.SG_PRETRAIN_EPOCHS)
    parser.add_argument("--out", type=Path, required=True, help="embedding file to write")


def handle(args: argparse.Namespace, config: Any) -> int:
    data = prepare_data(args, config)
    dataset = data.sg_dataset(args.window, args.mode)
    table = pretrain_sg(
        dataset,
        vocab_size=len(data.vocab),
        embed_dim=args.embed_dim,
        epochs=args.epochs,
        seed=args.seed,
        batch_size=args.batch,
        learning_rate=config.LEARNING_RATE,
        dtype=config.DTYPE,
    )
    save_embeddings(args.out, data.vocab.tokens, table)
    print(f"{table.shape[0]} x {table.shape[1]} embeddings from {len(dataset)} pairs -> {args.out}")
    return 0


command = Command(
    name="pretrain-sg",
    help="pretrain skip-gram embeddings",
    configure=configure,
    handler=handle,
)

__all__ = ["command"]
