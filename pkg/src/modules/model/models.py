"""Domain types for the network model."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from src.core.exceptions import ModelError

FloatArray = NDArray[np.float64]


def _as_vector(name: str, value: object, size: int | None = None) -> FloatArray:
    array = np.asarray(value, dtype=np.float64)
    if array.ndim != 1:
        raise ModelError(f"{name} must be a vector, got shape {array.shape}")
    if size is not None and array.shape[0] != size:
        raise ModelError(f"{name} has length {array.shape[0]}, expected {size}")
    if not np.all(np.isfinite(array)):
        raise ModelError(f"{name} must be finite")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class CostFunction:
    """f(y) = sum(c4*y^4 + c3*y^3) - 0.5*y'Wy + b'y."""

    c4: float
    c3: float
    W: FloatArray
    b: FloatArray

    def __post_init__(self) -> None:
        coupling = np.asarray(self.W, dtype=np.float64)
        if coupling.ndim != 2 or coupling.shape[0] != coupling.shape[1]:
            raise ModelError(f"W must be a square matrix, got shape {coupling.shape}")
        if not np.all(np.isfinite(coupling)):
            raise ModelError("W must be finite")
        coupling.setflags(write=False)
        object.__setattr__(self, "W", coupling)
        object.__setattr__(self, "b", _as_vector("b", self.b, coupling.shape[0]))
        object.__setattr__(self, "c4", float(self.c4))
        object.__setattr__(self, "c3", float(self.c3))

    @property
    def n(self) -> int:
        return int(self.W.shape[0])

    @cached_property
    def S(self) -> FloatArray:
        """Symmetrized coupling (W + W')/2; the gradient of -0.5*y'Wy is -S y."""
        sym = 0.5 * (self.W + self.W.T)
        sym.setflags(write=False)
        return sym


@dataclass(frozen=True, eq=False)
class NetworkModel:
    """x' = -D x - grad f(g(Lambda x)) + theta."""

    d: FloatArray
    lam: FloatArray
    theta: FloatArray
    cost: CostFunction
    name: str = field(default="custom")

    def __post_init__(self) -> None:
        d = _as_vector("d", self.d)
        n = d.shape[0]
        if n < 1:
            raise ModelError("network needs at least one neuron")
        lam = _as_vector("lambda", self.lam, n)
        theta = _as_vector("theta", self.theta, n)
        if np.any(d <= 0):
            raise ModelError("all self-inhibition rates d_i must be positive")
        if np.any(lam <= 0):
            raise ModelError("all slopes lambda_i must be positive")
        if self.cost.n != n:
            raise ModelError(f"cost dimension {self.cost.n} does not match n={n}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "theta", theta)

    @property
    def n(self) -> int:
        return int(self.d.shape[0])

    @property
    def d_max(self) -> float:
        return float(self.d.max())
