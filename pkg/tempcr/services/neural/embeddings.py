"""word2vec-compatible text format for embedding tables."""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..corpus.vocab import escape_token, unescape_token
from ..errors import ShapeError


def save_embeddings(path: Union[str, Path], tokens: Sequence[str], matrix: np.ndarray) -> Path:
    """Header ``rows dims`` then ``token v1 ... vd`` per row, full float precision."""
    if matrix.ndim != 2 or matrix.shape[0] != len(tokens):
        raise ShapeError(f"matrix {matrix.shape} does not match {len(tokens)} tokens")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8") as handle:
        handle.write(f"{matrix.shape[0]} {matrix.shape[1]}\n")
        for token, row in zip(tokens, matrix):
            values = " ".join(f"{value:.17g}" for value in row)
            handle.write(f"{escape_token(token)} {values}\n")
    return target


def load_embeddings(path: Union[str, Path]) -> Tuple[List[str], np.ndarray]:
    source = Path(path)
    with source.open("r", encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ShapeError(f"{source}: header must be 'rows dims'")
        rows, dims = int(header[0]), int(header[1])
        tokens: List[str] = []
        matrix = np.empty((rows, dims), dtype=np.float64)
        for line_number, line in enumerate(handle, start=2):
            parts = line.rstrip("\n").split(" ")
            if not line.strip():
                continue
            if len(parts) != dims + 1:
                raise ShapeError(
                    f"{source}:{line_number}: expected {dims} values, found {len(parts) - 1}"
                )
            if len(tokens) >= rows:
                raise ShapeError(f"{source}: more rows than the header announces")
            matrix[len(tokens)] = [float(value) for value in parts[1:]]
            tokens.append(unescape_token(parts[0]))
    if len(tokens) != rows:
        raise ShapeError(f"{source}: header announces {rows} rows, found {len(tokens)}")
    return tokens, matrix


__all__ = ["load_embeddings", "save_embeddings"]
