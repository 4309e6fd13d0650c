"""Named parameter tensors with gradient accumulators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional

import numpy as np

from ..errors import ShapeError


@dataclass(eq=False)
class Parameter:
    name: str
    value: np.ndarray
    grad: np.ndarray = field(init=False, repr=False)
    trainable: bool = True

    def __post_init__(self) -> None:
        self.grad = np.zeros_like(self.value)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.value.shape)

    def zero_grad(self) -> None:
        self.grad.fill(0.0)

    def accumulate(self, gradient: np.ndarray) -> None:
        if gradient.shape != self.value.shape:
            raise ShapeError(
                f"gradient for '{self.name}' has shape {gradient.shape}, expected {self.value.shape}"
            )
        self.grad += gradient


class ParameterStore:
    """Ordered name -> :class:`Parameter` map shared by every model of one run.

    A name can be registered once; models that share a table (the token
    embeddings) look it up instead of registering it again.
    """

    def __init__(self, dtype: np.dtype | str = np.float64) -> None:
        self.dtype = np.dtype(dtype)
        self._params: Dict[str, Parameter] = {}

    def register(self, name: str, value: np.ndarray, trainable: bool = True) -> Parameter:
        if name in self._params:
            raise ShapeError(f"parameter '{name}' is already registered")
        parameter = Parameter(name=name, value=np.array(value, dtype=self.dtype), trainable=trainable)
        self._params[name] = parameter
        return parameter

    def get(self, name: str) -> Parameter:
        try:
            return self._params[name]
        except KeyError as exc:
            raise ShapeError(f"unknown parameter '{name}'") from exc

    def __getitem__(self, name: str) -> Parameter:
        return self.get(name)

    def __contains__(self, name: object) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[Parameter]:
        return iter(self._params.values())

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> List[str]:
        return list(self._params)

    def zero_grad(self) -> None:
        for parameter in self._params.values():
            parameter.zero_grad()

    def snapshot(self, names: Optional[List[str]] = None) -> Dict[str, np.ndarray]:
        selected = names if names is not None else list(self._params)
        return {name: self._params[name].value.copy() for name in selected}

    def restore(self, values: Mapping[str, np.ndarray]) -> None:
        for name, value in values.items():
            parameter = self.get(name)
            if value.shape != parameter.value.shape:
                raise ShapeError(
                    f"cannot restore '{name}': shape {value.shape} != {parameter.value.shape}"
                )
            parameter.value[...] = value

    def gradients(self) -> Dict[str, np.ndarray]:
        return {name: parameter.grad.copy() for name, parameter in self._params.items()}


__all__ = ["Parameter", "ParameterStore"]
