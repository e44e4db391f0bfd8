"""Experiment description consumed by the sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.core.exceptions import DomainError
from src.modules.model.models import FloatArray, NetworkModel
from src.modules.trigger.models import StopRule, TriggerConfig
from src.shared.enums import Engine

DEFAULT_RUNS_PER_POINT = 50


@dataclass(frozen=True, eq=False)
class ExperimentSpec:
    model: NetworkModel
    trigger: TriggerConfig
    init_box: FloatArray
    seed: int
    engine: Engine = Engine.CONTINUOUS
    gamma_grid: tuple[float, ...] = ()
    runs_per_point: int = DEFAULT_RUNS_PER_POINT
    lambda_grid: tuple[float, ...] = ()
    trials: int = 1
    stop: StopRule = field(default_factory=StopRule)

    def __post_init__(self) -> None:
        box = np.asarray(self.init_box, dtype=np.float64)
        if box.shape == (2,):
            box = np.tile(box, (self.model.n, 1))
        if box.shape != (self.model.n, 2):
            raise DomainError(f"init_box must be one [lo, hi] pair or n={self.model.n} pairs")
        if np.any(box[:, 0] > box[:, 1]):
            raise DomainError("init_box bounds must satisfy lo <= hi")
        object.__setattr__(self, "init_box", box)
        if self.runs_per_point < 1 or self.trials < 1:
            raise DomainError("runs_per_point and trials must be positive")
        if any(g <= 0 for g in self.gamma_grid) or any(lam <= 0 for lam in self.lambda_grid):
            raise DomainError("grid values must be positive")
