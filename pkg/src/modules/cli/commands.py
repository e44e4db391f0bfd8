"""Command-line entrypoint: run, sweep, lambda-sweep, eta, validate, emit-config."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path
from typing import TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from src.core.config import settings
from src.core.exceptions import EXIT_OK, ConfigError, ConvergenceError, exit_code_for
from src.core.log import configure_logging
from src.modules.cli.schemas import ConfigFile
from src.modules.cli.service import (
    build_experiment,
    dump_config,
    emit_config,
    emit_outputs,
    example_config,
    load_config,
    provenance,
)
from src.modules.harness.models import ExperimentSpec
from src.modules.harness.schemas import StatRow
from src.modules.harness.service import draw_initial_states, gamma_sweep, lambda_sweep, simulate
from src.modules.model.models import NetworkModel
from src.modules.trigger.models import TriggerConfig
from src.modules.trigger.service import compute_alpha_beta, eta_lower_bound
from src.shared.enums import BuiltinExample, Engine, OutputFormat, enum_values

logger = logging.getLogger(__name__)

SectionT = TypeVar("SectionT", bound=BaseModel)


def _revalidate(section: SectionT, changes: dict[str, object]) -> SectionT:
    """Apply command-line overrides through validation again."""
    if not changes:
        return section
    try:
        return type(section).model_validate(section.model_dump(by_alias=True) | changes)
    except ValidationError as exc:
        error = exc.errors()[0]
        raise ConfigError(error["msg"], field=".".join(str(part) for part in error["loc"])) from exc


def _load(args: argparse.Namespace) -> ConfigFile:
    if args.config is not None:
        config = load_config(args.config)
    elif args.example is not None:
        config = example_config(args.example, args.seed)
    else:
        raise ConfigError("either --config or --example is required")
    experiment = _revalidate(
        config.experiment,
        {
            key: value
            for key, value in (
                ("engine", getattr(args, "engine", None)),
                ("seed", args.seed),
                ("max_time", getattr(args, "max_time", None)),
            )
            if value is not None
        },
    )
    trigger = _revalidate(
        config.trigger,
        {
            key: value
            for key, value in (
                ("m_bound", args.override_m_bound),
                ("sigma", args.override_sigma),
                ("allow_inadmissible_gamma", True if args.allow_inadmissible_gamma else None),
            )
            if value is not None
        },
    )
    return ConfigFile(model=config.model, trigger=trigger, experiment=experiment)


def _setup(args: argparse.Namespace) -> tuple[ConfigFile, NetworkModel, TriggerConfig, ExperimentSpec]:
    config = _load(args)
    model, trigger, spec = build_experiment(config)
    return config, model, trigger, spec


def _formats(args: argparse.Namespace) -> list[OutputFormat]:
    return [OutputFormat(value) for value in (args.format or enum_values(OutputFormat))]


def cmd_run(args: argparse.Namespace) -> int:
    config, model, trigger, spec = _setup(args)
    x0 = (
        np.asarray(config.experiment.x0)
        if config.experiment.x0 is not None
        else draw_initial_states(spec.init_box, 1, spec.seed)[0]
    )
    result = simulate(model, trigger, x0, spec.stop, spec.engine, record_dense=args.dense)
    emit_outputs(args.out, provenance(config, spec.seed), _formats(args), result=result, n=model.n)
    summary = result.summary
    print(
        f"{summary.outcome.value}: t={summary.final_time:.6g} residual={summary.final_residual:.3g} "
        f"events={summary.events_per_neuron} eta_sim={summary.eta_sim} eta={summary.eta_theory:.6g}"
    )
    if args.require_convergence and not summary.converged:
        raise ConvergenceError(f"run did not converge before t={spec.stop.max_time:g}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config, _, _, spec = _setup(args)
    if not spec.gamma_grid:
        raise ConfigError("gamma_grid is empty", field="experiment.gamma_grid")
    if args.runs is not None:
        spec = replace(spec, runs_per_point=args.runs)
    rows = gamma_sweep(spec)
    emit_outputs(
        args.out,
        provenance(config, spec.seed),
        _formats(args),
        sweep=rows,
        sweep_columns=list(StatRow.model_fields),
    )
    for row in rows:
        print(f"gamma={row.gamma:g} eta_sim={row.eta_sim_mean} eta={row.eta_theory:.6g} N={row.n_mean:.4g} T_first={row.t_first_mean}")
    return EXIT_OK


def cmd_lambda_sweep(args: argparse.Namespace) -> int:
    config, model, _, spec = _setup(args)
    if not spec.lambda_grid:
        raise ConfigError("lambda_grid is empty", field="experiment.lambda_grid")
    if args.trials is not None:
        spec = replace(spec, trials=args.trials)
    rows = lambda_sweep(spec)
    columns = [
        "lambda",
        "trial",
        *(f"y_bar_{k}" for k in range(1, model.n + 1)),
        *(f"nearest_vertex_{k}" for k in range(1, model.n + 1)),
        "distance",
        "converged",
    ]
    emit_outputs(
        args.out,
        provenance(config, spec.seed),
        _formats(args),
        sweep=rows,
        sweep_name="lambda_sweep",
        sweep_columns=columns,
    )
    return EXIT_OK


def cmd_eta(args: argparse.Namespace) -> int:
    _, model, trigger, _ = _setup(args)
    bounds = compute_alpha_beta(model, trigger.c, 0.0)
    print(f"eta={eta_lower_bound(trigger, model):.17g}")
    print(f"m_bound={trigger.m_bound:.17g} sigma={trigger.sigma:.17g} gamma_max(box=0)={bounds.gamma_max:.6g}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    config, model, trigger, _ = _setup(args)
    print(f"ok: n={model.n} gamma={trigger.gamma:g} T={trigger.compulsory_period:g} config_hash={config.hash}")
    return EXIT_OK


def cmd_emit_config(args: argparse.Namespace) -> int:
    config = _load(args)
    if args.output is None:
        sys.stdout.write(dump_config(config))
    else:
        emit_config(config, args.output)
    return EXIT_OK


def _source_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", type=Path, help="TOML config with [model], [trigger] and [experiment] tables")
    source.add_argument("--example", choices=enum_values(BuiltinExample), help="use a built-in network and its defaults")
    parser.add_argument("--seed", type=int, help=f"experiment seed (default from config or {settings.default_seed})")
    parser.add_argument("--override-m-bound", type=float, help="replace the computed M bound")
    parser.add_argument("--override-sigma", type=float, help="replace sigma = exp(2 d_max T)")
    parser.add_argument(
        "--allow-inadmissible-gamma",
        action="store_true",
        help="warn instead of failing when gamma exceeds the a-priori bound",
    )


def _run_arguments(parser: argparse.ArgumentParser) -> None:
    _source_arguments(parser)
    parser.add_argument("--engine", choices=enum_values(Engine), help="continuous (default) or discrete monitoring")
    parser.add_argument("--max-time", type=float, help=f"stop time (default {settings.default_max_time:g})")
    parser.add_argument("--out", type=Path, default=Path(settings.output_dir), help="output directory")
    parser.add_argument(
        "--format",
        action="append",
        choices=enum_values(OutputFormat),
        help="output format; repeat for several (default: csv and json)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="synaptic-events", description=settings.app_name)
    parser.add_argument("--log-level", default=None, help=f"logging level (default {settings.log_level})")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="simulate one trajectory")
    _run_arguments(run_parser)
    run_parser.add_argument("--dense", action="store_true", help="record dense samples inside every interval")
    run_parser.add_argument("--require-convergence", action="store_true", help="exit 2 when max time is reached")
    run_parser.set_defaults(handler=cmd_run)

    sweep_parser = commands.add_parser("sweep", help="statistics over the gamma grid")
    _run_arguments(sweep_parser)
    sweep_parser.add_argument("--runs", type=int, help="runs per gamma (default from config, 50)")
    sweep_parser.set_defaults(handler=cmd_sweep)

    lambda_parser = commands.add_parser("lambda-sweep", help="limit outputs over the slope grid")
    _run_arguments(lambda_parser)
    lambda_parser.add_argument("--trials", type=int, help="trials per slope")
    lambda_parser.set_defaults(handler=cmd_lambda_sweep)

    eta_parser = commands.add_parser("eta", help="print the inter-event lower bound")
    _source_arguments(eta_parser)
    eta_parser.set_defaults(handler=cmd_eta)

    validate_parser = commands.add_parser("validate", help="check a config without running it")
    _source_arguments(validate_parser)
    validate_parser.set_defaults(handler=cmd_validate)

    emit_parser = commands.add_parser("emit-config", help="write the resolved config as TOML")
    _source_arguments(emit_parser)
    emit_parser.add_argument("--output", type=Path, help="destination file (default stdout)")
    emit_parser.set_defaults(handler=cmd_emit_config)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except Exception as exc:  # mapped to an exit code or re-raised
        code = exit_code_for(exc)
        logger.error("%s", exc)
        return code
