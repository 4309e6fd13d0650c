"""Single-layer LSTM over right-padded batches with explicit backpropagation.

Gate blocks in the fused ``(d_in, 4H)`` / ``(H, 4H)`` weights are ordered
input, forget, output, cell candidate. Padded steps leave ``h`` and ``c``
unchanged, so ``h_T`` of each row is the state after its last real token.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.special import expit

from ..errors import ShapeError
from .layers import uniform_init
from .params import ParameterStore

FORGET_BIAS = 1.0


@dataclass(frozen=True, eq=False)
class LSTMParams:
    Wx: np.ndarray
    Wh: np.ndarray
    b: np.ndarray

    @property
    def hidden(self) -> int:
        return int(self.Wh.shape[0])

    @property
    def input_size(self) -> int:
        return int(self.Wx.shape[0])

    def check(self) -> None:
        hidden = self.hidden
        if self.Wh.shape != (hidden, 4 * hidden):
            raise ShapeError(f"Wh must be (H, 4H), got {self.Wh.shape}")
        if self.Wx.shape[1:] != (4 * hidden,):
            raise ShapeError(f"Wx must be (d_in, {4 * hidden}), got {self.Wx.shape}")
        if self.b.shape != (4 * hidden,):
            raise ShapeError(f"b must be ({4 * hidden},), got {self.b.shape}")

    @classmethod
    def from_store(cls, store: ParameterStore, prefix: str = "lstm") -> "LSTMParams":
        return cls(
            Wx=store.get(f"{prefix}_Wx").value,
            Wh=store.get(f"{prefix}_Wh").value,
            b=store.get(f"{prefix}_b").value,
        )


@dataclass(frozen=True, eq=False)
class LSTMGrads:
    dx: np.ndarray
    dWx: np.ndarray
    dWh: np.ndarray
    db: np.ndarray


def register_lstm(
    store: ParameterStore,
    input_size: int,
    hidden: int,
    rng: np.random.Generator,
    prefix: str = "lstm",
) -> LSTMParams:
    bias = np.zeros(4 * hidden)
    bias[hidden : 2 * hidden] = FORGET_BIAS
    store.register(f"{prefix}_Wx", uniform_init(rng, (input_size, 4 * hidden)))
    store.register(f"{prefix}_Wh", uniform_init(rng, (hidden, 4 * hidden)))
    store.register(f"{prefix}_b", bias)
    return LSTMParams.from_store(store, prefix)


@dataclass
class LSTMCache:
    params: LSTMParams
    inputs: np.ndarray
    squeeze: bool
    masks: List[np.ndarray] = field(default_factory=list)
    h_prev: List[np.ndarray] = field(default_factory=list)
    c_prev: List[np.ndarray] = field(default_factory=list)
    gates: List[np.ndarray] = field(default_factory=list)
    tanh_c: List[np.ndarray] = field(default_factory=list)


def lstm_forward(
    inputs: np.ndarray,
    params: LSTMParams,
    lengths: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, LSTMCache]:
    """Run the recurrence and return the last hidden state.

    ``inputs`` is ``(T, d_in)`` for one sequence or ``(B, T, d_in)`` for a
    padded batch with per-row ``lengths``.
    """
    params.check()
    squeeze = inputs.ndim == 2
    batch = inputs[None, ...] if squeeze else inputs
    if batch.ndim != 3:
        raise ShapeError(f"LSTM inputs must be 2-D or 3-D, got {inputs.ndim}-D")
    rows, steps, width = batch.shape
    if steps == 0:
        raise ShapeError("LSTM input sequence is empty")
    if width != params.input_size:
        raise ShapeError(f"LSTM input width {width} != {params.input_size}")
    if lengths is None:
        lengths = np.full(rows, steps, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.int64)
    if lengths.shape != (rows,) or int(lengths.min()) < 1 or int(lengths.max()) > steps:
        raise ShapeError("sequence lengths must lie in [1, T] for every row")

    hidden = params.hidden
    dtype = params.Wh.dtype
    h = np.zeros((rows, hidden), dtype=dtype)
    c = np.zeros((rows, hidden), dtype=dtype)
    cache = LSTMCache(params=params, inputs=batch, squeeze=squeeze)
    for t in range(steps):
        z = batch[:, t, :] @ params.Wx + h @ params.Wh + params.b
        gates = np.empty_like(z)
        gates[:, : 3 * hidden] = expit(z[:, : 3 * hidden])
        gates[:, 3 * hidden :] = np.tanh(z[:, 3 * hidden :])
        i = gates[:, :hidden]
        f = gates[:, hidden : 2 * hidden]
        o = gates[:, 2 * hidden : 3 * hidden]
        g = gates[:, 3 * hidden :]
        c_new = f * c + i * g
        tanh_c = np.tanh(c_new)
        h_new = o * tanh_c
        mask = (t < lengths).astype(dtype)[:, None]

        cache.masks.append(mask)
        cache.h_prev.append(h)
        cache.c_prev.append(c)
        cache.gates.append(gates)
        cache.tanh_c.append(tanh_c)

        c = mask * c_new + (1.0 - mask) * c
        h = mask * h_new + (1.0 - mask) * h
    return (h[0] if squeeze else h), cache


def lstm_backward(cache: LSTMCache, dh_last: np.ndarray) -> LSTMGrads:
    """Backpropagate ``dL/dh_T`` through every step."""
    params = cache.params
    hidden = params.hidden
    dh = dh_last[None, :] if cache.squeeze else dh_last
    if dh.shape != (cache.inputs.shape[0], hidden):
        raise ShapeError(f"dh_T shape {dh_last.shape} does not match the forward pass")

    dx = np.zeros_like(cache.inputs)
    dWx = np.zeros_like(params.Wx)
    dWh = np.zeros_like(params.Wh)
    db = np.zeros_like(params.b)
    dc = np.zeros_like(dh)
    dz = np.empty((dh.shape[0], 4 * hidden), dtype=dh.dtype)

    for t in reversed(range(cache.inputs.shape[1])):
        mask = cache.masks[t]
        gates = cache.gates[t]
        i = gates[:, :hidden]
        f = gates[:, hidden : 2 * hidden]
        o = gates[:, 2 * hidden : 3 * hidden]
        g = gates[:, 3 * hidden :]
        tanh_c = cache.tanh_c[t]

        dh_step = mask * dh
        dc_step = mask * dc + dh_step * o * (1.0 - tanh_c**2)
        dz[:, :hidden] = dc_step * g * i * (1.0 - i)
        dz[:, hidden : 2 * hidden] = dc_step * cache.c_prev[t] * f * (1.0 - f)
        dz[:, 2 * hidden : 3 * hidden] = dh_step * tanh_c * o * (1.0 - o)
        dz[:, 3 * hidden :] = dc_step * i * (1.0 - g**2)

        dWx += cache.inputs[:, t, :].T @ dz
        dWh += cache.h_prev[t].T @ dz
        db += dz.sum(axis=0)
        dx[:, t, :] = dz @ params.Wx.T

        dh = dz @ params.Wh.T + (1.0 - mask) * dh
        dc = dc_step * f + (1.0 - mask) * dc

    return LSTMGrads(dx=dx[0] if cache.squeeze else dx, dWx=dWx, dWh=dWh, db=db)


__all__ = [
    "FORGET_BIAS",
    "LSTMCache",
    "LSTMGrads",
    "LSTMParams",
    "lstm_backward",
    "lstm_forward",
    "register_lstm",
]
