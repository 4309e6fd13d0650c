"""Central finite-difference gradient checking."""

from __future__ import annotations

import logging
from typing import Callable, Dict, Iterable, Optional

import numpy as np

from .params import ParameterStore

logger = logging.getLogger(__name__)

RELATIVE_FLOOR = 1e-6


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    return np.abs(analytic - numeric) / np.maximum(np.abs(analytic) + np.abs(numeric), RELATIVE_FLOOR)


def grad_check(
    loss_fn: Callable[[], float],
    store: ParameterStore,
    eps: float = 1e-5,
    names: Optional[Iterable[str]] = None,
    max_entries: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> Dict[str, float]:
    """Compare analytic gradients against central differences.

    ``loss_fn`` must be deterministic, return the loss and accumulate its
    gradients into ``store``. With ``max_entries`` only that many randomly
    chosen coordinates of each parameter are perturbed.
    """
    selected = list(names) if names is not None else store.names()
    store.zero_grad()
    loss_fn()
    analytic = {name: store.get(name).grad.copy() for name in selected}

    generator = rng if rng is not None else np.random.default_rng(0)
    report: Dict[str, float] = {}
    for name in selected:
        value = store.get(name).value
        flat = value.reshape(-1)
        coordinates = np.arange(flat.size)
        if max_entries is not None and flat.size > max_entries:
            coordinates = generator.choice(flat.size, size=max_entries, replace=False)
        numeric = np.empty(coordinates.size, dtype=np.float64)
        for slot, coordinate in enumerate(coordinates):
            original = flat[coordinate]
            flat[coordinate] = original + eps
            plus = loss_fn()
            flat[coordinate] = original - eps
            minus = loss_fn()
            flat[coordinate] = original
            numeric[slot] = (plus - minus) / (2.0 * eps)
        errors = relative_error(analytic[name].reshape(-1)[coordinates], numeric)
        report[name] = float(errors.max()) if errors.size else 0.0
        logger.debug("grad_check %s: max relative error %.3e", name, report[name])
    store.zero_grad()
    return report


def max_relative_error(report: Dict[str, float]) -> float:
    return max(report.values(), default=0.0)


__all__ = ["grad_check", "max_relative_error", "relative_error"]
