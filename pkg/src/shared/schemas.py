"""Common Pydantic schemas."""

from typing import Generic, TypeVar

from pydantic import BaseModel, ConfigDict

T = TypeVar("T")

SCHEMA_VERSION = 1


class StrictModel(BaseModel):
    """Base for file-facing models: unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ProvenanceHeader(BaseModel):
    """Header embedded in every emitted artifact."""

    schema_version: int = SCHEMA_VERSION
    config_hash: str
    seed: int


class OutputEnvelope(BaseModel, Generic[T]):
    """Standard structured-output envelope."""

    header: ProvenanceHeader
    rows: list[T]
