"""Trigger configuration and run-summary schemas."""

from __future__ import annotations

from pydantic import BaseModel, Field, PositiveFloat

from src.modules.model.models import NetworkModel
from src.modules.trigger.models import TriggerConfig
from src.shared.enums import Engine, RunOutcome
from src.shared.schemas import StrictModel


class TriggerSection(StrictModel):
    gamma: PositiveFloat
    c: float = Field(1.0, gt=0, lt=2)
    compulsory_period: PositiveFloat = Field(..., alias="T")
    m_bound: PositiveFloat | None = None
    sigma: PositiveFloat | None = None
    bracketing_step: PositiveFloat | None = None
    bisection_tol: PositiveFloat = 1e-12
    allow_inadmissible_gamma: bool = False

    def to_config(self, model: NetworkModel) -> TriggerConfig:
        from src.modules.trigger.service import build_trigger_config

        return build_trigger_config(
            model,
            gamma=self.gamma,
            c=self.c,
            compulsory_period=self.compulsory_period,
            m_bound=self.m_bound,
            sigma=self.sigma,
            bracketing_step=self.bracketing_step,
            bisection_tol=self.bisection_tol,
            allow_inadmissible_gamma=self.allow_inadmissible_gamma,
        )


class RunSummary(BaseModel):
    engine: Engine
    outcome: RunOutcome
    converged: bool
    x_star: list[float]
    final_time: float
    final_residual: float
    eta_sim: float | None
    eta_theory: float
    events_per_neuron: list[int]
    events_to_first_hit: list[int]
    t_first: float | None
    trajectory_length: float
    alpha: float
    beta: float
    gamma_max: float
    state_sup: float
    missed_crossings: int = 0
    stale_predictions: int = 0

    @property
    def total_events(self) -> int:
        return sum(self.events_per_neuron)
