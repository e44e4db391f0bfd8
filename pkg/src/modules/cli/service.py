"""Config parsing and emission, plus the CSV / JSON writers."""

from __future__ import annotations

import csv
import logging
import re
import tomllib
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
import tomli_w
from pydantic import BaseModel, ValidationError

from src.core.exceptions import ConfigError, OutputError, SimulationError
from src.modules.cli.schemas import ConfigFile, EventRow, TraceRow
from src.modules.harness.examples import builtin_example, example_defaults
from src.modules.harness.models import ExperimentSpec
from src.modules.model.models import NetworkModel
from src.modules.model.schemas import ModelSection
from src.modules.trigger.models import RunResult, TriggerConfig
from src.shared.enums import BuiltinExample, OutputFormat
from src.shared.schemas import SCHEMA_VERSION, OutputEnvelope, ProvenanceHeader

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"
_TOML_LINE = re.compile(r"at line (\d+)")


def _line_of(text: str, key: str) -> int | None:
    name = re.escape(key)
    pattern = re.compile(rf"^\s*(?:\"?{name}\"?\s*=|\[(?:[\w.]*\.)?{name}\])")
    for number, line in enumerate(text.splitlines(), start=1):
        if pattern.match(line):
            return number
    return None


def load_config_text(text: str) -> ConfigFile:
    try:
        payload = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = _TOML_LINE.search(str(exc))
        raise ConfigError(str(exc), line=int(match.group(1)) if match else None) from exc
    try:
        return ConfigFile.model_validate(payload)
    except ValidationError as exc:
        error = exc.errors()[0]
        location = [str(part) for part in error["loc"]]
        key = next((part for part in reversed(location) if not part.isdigit()), None)
        raise ConfigError(error["msg"], field=".".join(location), line=_line_of(text, key) if key else None) from exc


def load_config(path: str | Path) -> ConfigFile:
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise OutputError(exc.strerror or "cannot read config", str(source)) from exc
    return load_config_text(text)


def build_experiment(config: ConfigFile) -> tuple[NetworkModel, TriggerConfig, ExperimentSpec]:
    """Turn validated sections into domain objects; domain failures become ConfigError."""
    try:
        model = config.model.to_model()
        trigger = config.trigger.to_config(model)
        spec = config.experiment.to_spec(model, trigger)
    except SimulationError as exc:
        raise ConfigError(exc.detail) from exc
    if config.experiment.x0 is not None and len(config.experiment.x0) != model.n:
        raise ConfigError(f"has length {len(config.experiment.x0)}, expected n={model.n}", field="experiment.x0")
    return model, trigger, spec


def parse_config(path: str | Path) -> tuple[NetworkModel, TriggerConfig, ExperimentSpec]:
    return build_experiment(load_config(path))


def example_config(which: BuiltinExample | str, seed: int | None = None) -> ConfigFile:
    model = builtin_example(which, seed)
    defaults = example_defaults(which)
    return ConfigFile.model_validate(
        {
            "model": ModelSection.from_model(model).model_dump(by_alias=True),
            "trigger": defaults["trigger"],
            "experiment": defaults["experiment"] | ({} if seed is None else {"seed": seed}),
        }
    )


def dump_config(config: ConfigFile) -> str:
    return tomli_w.dumps(config.document())


def emit_config(config: ConfigFile, path: str | Path) -> Path:
    target = Path(path)
    _write_text(target, dump_config(config))
    return target


def _write_text(target: Path, text: str) -> None:
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(exc.strerror or "write failed", str(target)) from exc


def _cell(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def _flatten(row: BaseModel) -> dict[str, Any]:
    """Scalars stay, list fields expand into name_1..name_k columns."""
    flat: dict[str, Any] = {}
    for name, value in row.model_dump(mode="python", by_alias=True).items():
        if isinstance(value, list):
            if name == "fired":
                flat[name] = ";".join(str(v) for v in value)
            else:
                flat.update({f"{name}_{k}": v for k, v in enumerate(value, start=1)})
        else:
            flat[name] = value.value if hasattr(value, "value") else value
    return flat


def write_rows(
    rows: Sequence[BaseModel],
    path: Path,
    fmt: OutputFormat,
    header: ProvenanceHeader,
    columns: Sequence[str] | None = None,
) -> Path:
    """Write rows as CSV with '#' provenance lines, or as a JSON envelope."""
    target = path.with_suffix(f".{fmt.value}")
    if fmt is OutputFormat.JSON:
        envelope = OutputEnvelope[Any](header=header, rows=[row.model_dump(mode="json", by_alias=True) for row in rows])
        _write_text(target, envelope.model_dump_json(indent=2) + "\n")
        return target

    flat = [_flatten(row) for row in rows]
    names = list(columns) if columns is not None else (list(flat[0]) if flat else [])
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            handle.write(f"# config_hash={header.config_hash} seed={header.seed} schema_version={header.schema_version}\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(names)
            for row in flat:
                writer.writerow([_cell(row.get(name)) for name in names])
    except OSError as exc:
        raise OutputError(exc.strerror or "write failed", str(target)) from exc
    return target


def event_rows(result: RunResult) -> list[EventRow]:
    return [
        EventRow(
            neuron=event.neuron,
            time=event.time,
            cause=event.cause,
            state=event.state_snapshot.tolist(),
            new_sampled_grad_component=event.new_sampled_grad_component,
        )
        for event in result.events
    ]


def trace_rows(result: RunResult) -> list[TraceRow]:
    """Instant samples merged with dense samples; t strictly increases."""
    rows = [
        TraceRow(t=p.t, x=p.x.tolist(), lyapunov=p.lyapunov, drift_sq=p.drift_sq, fired=list(p.fired))
        for p in result.trace.samples
    ]
    for block in result.trace.dense:
        rows.extend(
            TraceRow(t=float(t), x=x.tolist(), lyapunov=float(lv), drift_sq=float(f2), fired=[])
            for t, x, lv, f2 in zip(block.t, block.x, block.lyapunov, block.drift_sq)
        )
    rows.sort(key=lambda row: row.t)
    return rows


def _columns(prefix: str, n: int) -> list[str]:
    return [f"{prefix}_{k}" for k in range(1, n + 1)]


def emit_outputs(
    out_dir: str | Path,
    header: ProvenanceHeader,
    formats: Iterable[OutputFormat],
    *,
    result: RunResult | None = None,
    n: int | None = None,
    sweep: Sequence[BaseModel] | None = None,
    sweep_name: str = "sweep",
    sweep_columns: Sequence[str] | None = None,
) -> list[Path]:
    """Write every artifact of a run or a sweep in each requested format."""
    directory = Path(out_dir)
    written: list[Path] = []
    for fmt in formats:
        if result is not None:
            size = n if n is not None else len(result.summary.x_star)
            written.append(
                write_rows(
                    event_rows(result),
                    directory / "events",
                    fmt,
                    header,
                    ["neuron", "time", "cause", *_columns("state", size), "new_sampled_grad_component"],
                )
            )
            written.append(
                write_rows(trace_rows(result), directory / "trace", fmt, header, ["t", *_columns("x", size), "lyapunov", "drift_sq", "fired"])
            )
            written.append(write_rows([result.summary], directory / "summary", fmt, header))
        if sweep is not None:
            written.append(write_rows(sweep, directory / sweep_name, fmt, header, sweep_columns))
    for path in written:
        logger.info("wrote %s", path)
    return written


def provenance(config: ConfigFile, seed: int) -> ProvenanceHeader:
    return ProvenanceHeader(schema_version=SCHEMA_VERSION, config_hash=config.hash, seed=seed)
