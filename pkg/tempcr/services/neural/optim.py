"""Adam with bias correction over a :class:`ParameterStore`."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..errors import ShapeError
from .params import ParameterStore


@dataclass
class AdamState:
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    v: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)


def adam_step(store: ParameterStore, state: AdamState) -> None:
    """One Adam update of every trainable parameter; all gradients are zeroed afterwards.

    Frozen parameters keep their values and get no moment entries.
    """
    state.t += 1
    correction1 = 1.0 - state.beta1**state.t
    correction2 = 1.0 - state.beta2**state.t
    for parameter in store:
        if not parameter.trainable:
            continue
        if parameter.grad.shape != parameter.value.shape:
            raise ShapeError(f"gradient shape mismatch for '{parameter.name}'")
        m = state.m.setdefault(parameter.name, np.zeros_like(parameter.value))
        v = state.v.setdefault(parameter.name, np.zeros_like(parameter.value))
        if m.shape != parameter.value.shape or v.shape != parameter.value.shape:
            raise ShapeError(f"Adam moments for '{parameter.name}' do not match its shape")
        grad = parameter.grad
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        parameter.value -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    store.zero_grad()


__all__ = ["AdamState", "adam_step"]
