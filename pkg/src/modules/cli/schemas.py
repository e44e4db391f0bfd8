"""Config file layout and output rows."""

from __future__ import annotations

from pydantic import BaseModel, Field

from src.modules.harness.schemas import ExperimentSection
from src.modules.model.schemas import ModelSection
from src.modules.trigger.schemas import TriggerSection
from src.shared.enums import TriggerCause
from src.shared.provenance import config_hash
from src.shared.schemas import StrictModel


class ConfigFile(StrictModel):
    model: ModelSection
    trigger: TriggerSection
    experiment: ExperimentSection = Field(default_factory=ExperimentSection)

    def document(self) -> dict:
        """Plain TOML-ready mapping using file-facing key names; unset optionals are left out."""
        return self.model_dump(mode="json", by_alias=True, exclude_none=True)

    @property
    def hash(self) -> str:
        return config_hash(self.document())


class EventRow(BaseModel):
    neuron: int
    time: float
    cause: TriggerCause
    state: list[float]
    new_sampled_grad_component: float


class TraceRow(BaseModel):
    t: float
    x: list[float]
    lyapunov: float
    drift_sq: float
    fired: list[int]
