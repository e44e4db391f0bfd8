"""Domain types for the event engine."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from src.core.config import settings
from src.core.exceptions import TriggerConfigError
from src.modules.dynamics.models import LyapunovTrace
from src.modules.model.models import FloatArray
from src.shared.enums import TriggerCause

if TYPE_CHECKING:  # pragma: no cover - typing only
    from src.modules.trigger.schemas import RunSummary

SIMULTANEITY_FACTOR = 10.0
MAX_EXP = math.log(sys.float_info.max)


@dataclass(frozen=True)
class TriggerConfig:
    gamma: float
    c: float
    compulsory_period: float
    m_bound: float
    log_sigma: float
    bracketing_step: float | None = None
    bisection_tol: float = 1e-12
    allow_inadmissible_gamma: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.c < 2.0:
            raise TriggerConfigError(f"c must lie in (0, 2), got {self.c}")
        for label, value in (
            ("gamma", self.gamma),
            ("compulsory_period", self.compulsory_period),
            ("m_bound", self.m_bound),
            ("bisection_tol", self.bisection_tol),
        ):
            if not (value > 0 and math.isfinite(value)):
                raise TriggerConfigError(f"{label} must be positive and finite, got {value}")
        if self.bracketing_step is not None and not self.bracketing_step > 0:
            raise TriggerConfigError(f"bracketing_step must be positive, got {self.bracketing_step}")
        if not math.isfinite(self.log_sigma):
            raise TriggerConfigError(f"log_sigma must be finite, got {self.log_sigma}")

    @property
    def sigma(self) -> float:
        """exp(log_sigma); inf once it leaves the float range."""
        return math.exp(self.log_sigma) if self.log_sigma < MAX_EXP else math.inf

    @property
    def simultaneity_tol(self) -> float:
        """Crossings closer than this are fired at one hybrid instant."""
        return SIMULTANEITY_FACTOR * self.bisection_tol


@dataclass(frozen=True)
class AdmissibilityBounds:
    alpha: float
    beta: float
    gamma_max: float
    state_box: float


@dataclass(frozen=True)
class ScheduledEvent:
    time: float
    neuron: int
    cause: TriggerCause


@dataclass(frozen=True, eq=False)
class EventRecord:
    neuron: int
    time: float
    cause: TriggerCause
    state_snapshot: FloatArray
    new_sampled_grad_component: float


@dataclass(frozen=True)
class StopRule:
    max_time: float = field(default_factory=lambda: settings.default_max_time)
    residual: float = field(default_factory=lambda: settings.default_stop_residual)

    def __post_init__(self) -> None:
        if not self.max_time > 0 or not self.residual > 0:
            raise TriggerConfigError("stop rule needs positive max_time and residual")


@dataclass(eq=False)
class RunResult:
    trace: LyapunovTrace
    events: list[EventRecord]
    summary: "RunSummary"
