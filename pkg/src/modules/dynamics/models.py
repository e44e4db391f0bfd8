"""Hybrid state and trace records."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.modules.model.models import FloatArray


@dataclass(frozen=True, eq=False)
class HybridState:
    """Continuous state plus the per-neuron held synaptic feedback.

    sampled_grad[i] is [grad f(g(Lambda x(last_trigger[i])))]_i.
    """

    t: float
    x: FloatArray
    last_trigger: FloatArray
    sampled_grad: FloatArray

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    def ages(self, at: float | None = None) -> FloatArray:
        """t - t_k^i for every neuron."""
        return (self.t if at is None else at) - self.last_trigger


@dataclass(frozen=True, eq=False)
class FlowWindow:
    """Closed-form evaluation of an event-free stretch on a grid of offsets.

    Row k of every matrix belongs to time t + offsets[k].
    """

    offsets: FloatArray
    x: FloatArray
    drift: FloatArray
    error: FloatArray
    delta: FloatArray
    psi: FloatArray
    trigger: FloatArray


@dataclass(frozen=True, eq=False)
class TracePoint:
    """Snapshot right after every hybrid instant (post-fire)."""

    t: float
    x: FloatArray
    drift: FloatArray
    lyapunov: float
    lyapunov_rate: float
    fired: tuple[int, ...] = ()

    @property
    def drift_sq(self) -> float:
        return float(self.drift @ self.drift)


@dataclass(frozen=True, eq=False)
class DenseBlock:
    """Diagnostic samples strictly inside one inter-event interval."""

    t: FloatArray
    x: FloatArray
    error: FloatArray
    psi: FloatArray
    trigger: FloatArray
    lyapunov: FloatArray
    lyapunov_rate: FloatArray
    drift_sq: FloatArray


@dataclass
class LyapunovTrace:
    decay: FloatArray
    samples: list[TracePoint] = field(default_factory=list)
    dense: list[DenseBlock] = field(default_factory=list)

    def append(self, point: TracePoint) -> None:
        # one sample per hybrid instant; same-instant cascades overwrite
        if self.samples and point.t == self.samples[-1].t:
            merged = tuple(sorted(set(self.samples[-1].fired) | set(point.fired)))
            point = TracePoint(point.t, point.x, point.drift, point.lyapunov, point.lyapunov_rate, merged)
            self.samples[-1] = point
        else:
            self.samples.append(point)

    @property
    def times(self) -> FloatArray:
        return np.array([p.t for p in self.samples])

    @property
    def lyapunov_values(self) -> FloatArray:
        return np.array([p.lyapunov for p in self.samples])

    def state_sup(self) -> float:
        """Largest |x_i| seen at samples and dense samples."""
        peak = max((float(np.max(np.abs(p.x))) for p in self.samples), default=0.0)
        for block in self.dense:
            if block.x.size:
                peak = max(peak, float(np.max(np.abs(block.x))))
        return peak
