"""Shared enumerations used across modules."""

from __future__ import annotations

from enum import StrEnum
from typing import Iterable, TypeVar

EnumType = TypeVar("EnumType", bound=StrEnum)


def enum_values(enum_cls: Iterable[EnumType]) -> list[str]:
    """Return the .value for each enum member (used for CLI choices)."""
    return [member.value for member in enum_cls]


class TriggerCause(StrEnum):
    AUTONOMY = "autonomy"
    COMPULSORY = "compulsory"


class Engine(StrEnum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


class RunOutcome(StrEnum):
    CONVERGED = "converged"
    MAX_TIME = "max_time"


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


class BuiltinExample(StrEnum):
    EXAMPLE1 = "example1"
    EXAMPLE2 = "example2"
    EXAMPLE2_SMALLTHETA = "example2_smalltheta"
