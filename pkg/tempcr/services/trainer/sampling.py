"""Batch samplers for the labelled and unlabelled datasets."""

from __future__ import annotations

from typing import Iterator, List

import numpy as np

from ..errors import TrainingError


def epoch_batches(count: int, batch_size: int, rng: np.random.Generator) -> List[np.ndarray]:
    """One shuffled pass over ``count`` items; the last batch may be short."""
    if count < 1:
        raise TrainingError("cannot sample from an empty dataset")
    order = rng.permutation(count)
    return [order[start : start + batch_size] for start in range(0, count, batch_size)]


class EpochSampler:
    """Reshuffles at every epoch; each item appears exactly once per epoch."""

    def __init__(self, count: int, batch_size: int, rng: np.random.Generator) -> None:
        if count < 1:
            raise TrainingError("cannot sample from an empty dataset")
        self.count = count
        self.batch_size = batch_size
        self._rng = rng

    def epoch(self) -> Iterator[np.ndarray]:
        yield from epoch_batches(self.count, self.batch_size, self._rng)


class CyclingSampler:
    """Endless batches over a shuffled order that wraps into a fresh shuffle."""

    def __init__(self, count: int, batch_size: int, rng: np.random.Generator) -> None:
        if count < 1:
            raise TrainingError("cannot sample from an empty dataset")
        self.count = count
        self.batch_size = batch_size
        self._rng = rng
        self._order = rng.permutation(count)
        self._cursor = 0
        self.batches_drawn = 0

    def draw(self) -> np.ndarray:
        parts = []
        needed = self.batch_size
        while needed > 0:
            if self._cursor >= self.count:
                self._order = self._rng.permutation(self.count)
                self._cursor = 0
            take = min(needed, self.count - self._cursor)
            parts.append(self._order[self._cursor : self._cursor + take])
            self._cursor += take
            needed -= take
        self.batches_drawn += 1
        return np.concatenate(parts)


__all__ = ["CyclingSampler", "EpochSampler", "epoch_batches"]
