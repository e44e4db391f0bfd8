"""Experiment configuration and sweep result rows."""

from __future__ import annotations

from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, field_validator

from src.core.config import settings
from src.modules.harness.models import DEFAULT_RUNS_PER_POINT, ExperimentSpec
from src.modules.model.models import NetworkModel
from src.modules.trigger.models import StopRule, TriggerConfig
from src.shared.enums import Engine
from src.shared.schemas import StrictModel


class ExperimentSection(StrictModel):
    engine: Engine = Engine.CONTINUOUS
    gamma_grid: list[PositiveFloat] = Field(default_factory=list)
    runs: PositiveInt = DEFAULT_RUNS_PER_POINT
    init_box: list[list[float]] = Field(default_factory=lambda: [[-2.0, 2.0]])
    seed: int = Field(default_factory=lambda: settings.default_seed)
    max_time: PositiveFloat = Field(default_factory=lambda: settings.default_max_time)
    stop_residual: PositiveFloat = Field(default_factory=lambda: settings.default_stop_residual)
    lambda_grid: list[PositiveFloat] = Field(default_factory=list)
    trials: PositiveInt = 1
    x0: list[float] | None = None

    @field_validator("init_box")
    @classmethod
    def validate_box(cls, value: list[list[float]]) -> list[list[float]]:
        if not value:
            raise ValueError("init_box needs at least one [lo, hi] pair")
        for pair in value:
            if len(pair) != 2 or pair[0] > pair[1]:
                raise ValueError(f"init_box entries must be ordered [lo, hi] pairs, got {pair}")
        return value

    def to_spec(self, model: NetworkModel, trigger: TriggerConfig) -> ExperimentSpec:
        box = self.init_box[0] if len(self.init_box) == 1 else self.init_box
        return ExperimentSpec(
            model=model,
            trigger=trigger,
            init_box=box,
            seed=self.seed,
            engine=self.engine,
            gamma_grid=tuple(self.gamma_grid),
            runs_per_point=self.runs,
            lambda_grid=tuple(self.lambda_grid),
            trials=self.trials,
            stop=StopRule(max_time=self.max_time, residual=self.stop_residual),
        )


class StatRow(BaseModel):
    """One gamma row of a sweep table."""

    gamma: float
    eta_sim_mean: float | None
    eta_sim_min: float | None
    eta_theory: float
    n_mean: float
    n_to_first_hit_mean: float
    t_first_mean: float | None
    runs: int
    non_converged: int


class LambdaRow(BaseModel):
    """Limit output of one slope-sweep trial snapped to the hypercube."""

    lambda_: float = Field(..., alias="lambda")
    trial: int
    y_bar: list[float]
    nearest_vertex: list[int]
    distance: float
    converged: bool

    model_config = {"populate_by_name": True}
