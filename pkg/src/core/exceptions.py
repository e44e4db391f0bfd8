"""Custom exception classes and exit-code mapping."""

from __future__ import annotations

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2
EXIT_IO = 3


class SimulationError(Exception):
    """Root of every domain-specific error raised by the simulator."""

    def __init__(self, detail: str, exit_code: int = EXIT_CONFIG):
        self.detail = detail
        self.exit_code = exit_code
        super().__init__(detail)


class ModelError(SimulationError, ValueError):
    """Invalid network parameters or a dimension mismatch."""


class DomainError(SimulationError, ValueError):
    """An argument lies outside the domain of an operation."""


class TriggerConfigError(SimulationError, ValueError):
    """Event-rule parameters violate their constraints."""


class ConfigError(SimulationError, ValueError):
    """A configuration file could not be parsed or validated."""

    def __init__(self, detail: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        location = []
        if field:
            location.append(field)
        if line is not None:
            location.append(f"line {line}")
        message = f"{' @ '.join(location)}: {detail}" if location else detail
        super().__init__(message, exit_code=EXIT_CONFIG)


class ConvergenceError(SimulationError):
    """A run that was required to converge hit its time limit."""

    def __init__(self, detail: str):
        super().__init__(detail, exit_code=EXIT_NOT_CONVERGED)


class OutputError(SimulationError):
    """Writing an output artifact failed."""

    def __init__(self, detail: str, path: str):
        self.path = path
        super().__init__(f"{path}: {detail}", exit_code=EXIT_IO)


def exit_code_for(exc: BaseException) -> int:
    """Map an exception raised by a command to the process exit code."""
    if isinstance(exc, SimulationError):
        return exc.exit_code
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc
