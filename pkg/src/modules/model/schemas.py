"""Model configuration schemas."""

from __future__ import annotations

import numpy as np
from pydantic import Field, PositiveFloat, model_validator

from src.modules.model.models import CostFunction, NetworkModel
from src.shared.schemas import StrictModel


class CostSection(StrictModel):
    c4: float
    c3: float
    W: list[list[float]]
    b: list[float]

    @model_validator(mode="after")
    def validate_shapes(self) -> "CostSection":
        n = len(self.W)
        if n == 0 or any(len(row) != n for row in self.W):
            raise ValueError("W must be a non-empty square matrix given as rows")
        if len(self.b) != n:
            raise ValueError(f"b has length {len(self.b)}, expected {n}")
        return self


class ModelSection(StrictModel):
    n: int = Field(..., gt=0)
    d: list[PositiveFloat]
    lambda_: list[PositiveFloat] = Field(..., alias="lambda")
    theta: list[float]
    cost: CostSection
    name: str = "custom"

    @model_validator(mode="after")
    def validate_dimensions(self) -> "ModelSection":
        for label, values in (("d", self.d), ("lambda", self.lambda_), ("theta", self.theta)):
            if len(values) != self.n:
                raise ValueError(f"{label} has length {len(values)}, expected n={self.n}")
        if len(self.cost.W) != self.n:
            raise ValueError(f"cost.W is {len(self.cost.W)}x{len(self.cost.W)}, expected n={self.n}")
        return self

    def to_model(self) -> NetworkModel:
        cost = CostFunction(c4=self.cost.c4, c3=self.cost.c3, W=np.array(self.cost.W), b=np.array(self.cost.b))
        return NetworkModel(
            d=np.array(self.d),
            lam=np.array(self.lambda_),
            theta=np.array(self.theta),
            cost=cost,
            name=self.name,
        )

    @classmethod
    def from_model(cls, model: NetworkModel) -> "ModelSection":
        return cls(
            n=model.n,
            d=model.d.tolist(),
            lambda_=model.lam.tolist(),
            theta=model.theta.tolist(),
            cost=CostSection(
                c4=model.cost.c4,
                c3=model.cost.c3,
                W=model.cost.W.tolist(),
                b=model.cost.b.tolist(),
            ),
            name=model.name,
        )
