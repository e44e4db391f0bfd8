"""Prediction queue for the discrete engine."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from src.core.exceptions import DomainError
from src.modules.model.models import FloatArray
from src.modules.trigger.models import ScheduledEvent
from src.shared.enums import TriggerCause


@dataclass
class PredictionContext:
    """Pending per-neuron predictions keyed by an epoch counter.

    Entries whose epoch no longer matches the neuron's current epoch are
    invalidated and skipped when popped. Every live prediction lies in
    [t_star, deadline], where t_star is the newest firing time seen.
    """

    n: int
    t_star: float = 0.0
    pending: FloatArray = field(init=False)
    epochs: list[int] = field(init=False)
    _queue: list[tuple[float, int, int, TriggerCause]] = field(init=False, default_factory=list)

    def __post_init__(self) -> None:
        self.pending = np.full(self.n, np.nan)
        self.epochs = [0] * self.n

    def advance(self, t: float) -> None:
        if t < self.t_star:
            raise DomainError(f"t_star cannot move back from {self.t_star} to {t}")
        self.t_star = t

    def schedule(self, neuron: int, time: float, cause: TriggerCause, deadline: float) -> None:
        if not self.t_star <= time <= deadline:
            raise DomainError(f"prediction {time} for neuron {neuron} outside [{self.t_star}, {deadline}]")
        self.epochs[neuron] += 1
        self.pending[neuron] = time
        heapq.heappush(self._queue, (time, neuron, self.epochs[neuron], cause))

    def invalidate(self, neurons: list[int]) -> None:
        for i in neurons:
            self.epochs[i] += 1
            self.pending[i] = np.nan

    def _drop_stale_head(self) -> None:
        while self._queue and self._queue[0][2] != self.epochs[self._queue[0][1]]:
            heapq.heappop(self._queue)

    def peek_time(self) -> float | None:
        self._drop_stale_head()
        return self._queue[0][0] if self._queue else None

    def pop_instant(self, tol: float) -> list[ScheduledEvent]:
        """Pop every live prediction within tol of the earliest one."""
        first = self.peek_time()
        if first is None:
            return []
        batch: list[ScheduledEvent] = []
        while (head := self.peek_time()) is not None and head - first <= tol:
            time, neuron, _, cause = heapq.heappop(self._queue)
            self.pending[neuron] = np.nan
            batch.append(ScheduledEvent(first, neuron, cause))
        return sorted(batch, key=lambda event: event.neuron)
