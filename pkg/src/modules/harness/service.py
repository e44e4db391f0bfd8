"""Sweeps over gamma and over a uniform slope, plus hypercube vertex analysis."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from statistics import fmean
from typing import TypeVar

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence
from numpy.typing import ArrayLike

from src.core.config import settings
from src.modules.dynamics.trace import trajectory_length
from src.modules.harness.models import ExperimentSpec
from src.modules.harness.schemas import LambdaRow, StatRow
from src.modules.model.models import CostFunction, FloatArray, NetworkModel
from src.modules.model.service import cost_gradient, cost_value, outputs, with_uniform_lambda
from src.modules.monitor.service import run_discrete
from src.modules.trigger.models import RunResult, StopRule, TriggerConfig
from src.modules.trigger.schemas import RunSummary
from src.modules.trigger.service import eta_lower_bound, run
from src.shared.enums import Engine

logger = logging.getLogger(__name__)

__all__ = [
    "binary_local_minima",
    "box_stationary_vertices",
    "draw_initial_states",
    "gamma_sweep",
    "lambda_sweep",
    "nearest_vertex",
    "simulate",
    "trajectory_length",
]

Row = TypeVar("Row")


@dataclass(frozen=True, eq=False)
class RunTask:
    model: NetworkModel
    trigger: TriggerConfig
    x0: FloatArray
    stop: StopRule
    engine: Engine


def simulate(
    model: NetworkModel,
    cfg: TriggerConfig,
    x0: ArrayLike,
    stop: StopRule | None = None,
    engine: Engine = Engine.CONTINUOUS,
    record_dense: bool = False,
) -> RunResult:
    runner = run_discrete if engine is Engine.DISCRETE else run
    return runner(model, cfg, x0, stop, record_dense=record_dense)


def _summarize(task: RunTask) -> RunSummary:
    return simulate(task.model, task.trigger, task.x0, task.stop, task.engine).summary


def _execute(tasks: Sequence[RunTask], worker: Callable[[RunTask], Row]) -> list[Row]:
    """Run tasks in order, across a process pool when configured; results keep task order."""
    workers = min(settings.sweep_workers, len(tasks))
    if workers <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, tasks))


def draw_initial_states(box: FloatArray, count: int, seed: int) -> FloatArray:
    """count seeded draws from the box; row k only depends on (seed, k)."""
    children = SeedSequence(seed).spawn(count)
    return np.array([Generator(PCG64(child)).uniform(box[:, 0], box[:, 1]) for child in children])


def _sweep_trigger(cfg: TriggerConfig, **changes: float) -> TriggerConfig:
    return replace(cfg, allow_inadmissible_gamma=True, **changes)


def _mean(values: Iterable[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    return fmean(present) if present else None


def gamma_sweep(spec: ExperimentSpec) -> list[StatRow]:
    """One StatRow per gamma, averaged over runs_per_point seeded starts.

    Every gamma reuses the same starting points. N is the mean number of
    events per neuron over a whole run; n_to_first_hit_mean counts only those
    up to the first time the run comes within the hitting radius of its own
    final state.
    """
    starts = draw_initial_states(spec.init_box, spec.runs_per_point, spec.seed)
    rows: list[StatRow] = []
    for gamma in spec.gamma_grid:
        cfg = _sweep_trigger(spec.trigger, gamma=gamma)
        tasks = [RunTask(spec.model, cfg, x0, spec.stop, spec.engine) for x0 in starts]
        logger.info("gamma sweep: gamma=%g runs=%d engine=%s", gamma, len(tasks), spec.engine.value)
        summaries = _execute(tasks, _summarize)
        eta_values = [s.eta_sim for s in summaries if s.eta_sim is not None]
        rows.append(
            StatRow(
                gamma=gamma,
                eta_sim_mean=_mean(eta_values),
                eta_sim_min=min(eta_values, default=None),
                eta_theory=eta_lower_bound(cfg, spec.model),
                n_mean=fmean(float(np.mean(s.events_per_neuron)) for s in summaries),
                n_to_first_hit_mean=fmean(float(np.mean(s.events_to_first_hit)) for s in summaries),
                t_first_mean=_mean(s.t_first for s in summaries),
                runs=len(summaries),
                non_converged=sum(not s.converged for s in summaries),
            )
        )
    return rows


def nearest_vertex(y: ArrayLike) -> tuple[FloatArray, float]:
    """Closest point of {0,1}^n in Euclidean distance; y_i = 0.5 snaps to 0."""
    values = np.asarray(y, dtype=np.float64)
    vertex = (values > 0.5).astype(np.float64)
    return vertex, float(np.linalg.norm(values - vertex))


def _lambda_trial(task: RunTask) -> tuple[FloatArray, bool]:
    summary = _summarize(task)
    return outputs(task.model, summary.x_star), summary.converged


def lambda_sweep(spec: ExperimentSpec) -> list[LambdaRow]:
    """Limit outputs g(Lambda x*) for every slope on the grid applied to all neurons."""
    starts = draw_initial_states(spec.init_box, spec.trials, spec.seed)
    rows: list[LambdaRow] = []
    for lam in spec.lambda_grid:
        model = with_uniform_lambda(spec.model, lam)
        # m_bound is linear in the largest slope
        cfg = _sweep_trigger(spec.trigger, m_bound=spec.trigger.m_bound * lam / float(spec.model.lam.max()))
        tasks = [RunTask(model, cfg, x0, spec.stop, spec.engine) for x0 in starts]
        logger.info("lambda sweep: lambda=%g trials=%d", lam, len(tasks))
        for trial, (y_bar, converged) in enumerate(_execute(tasks, _lambda_trial)):
            vertex, distance = nearest_vertex(y_bar)
            rows.append(
                LambdaRow(
                    lambda_=lam,
                    trial=trial,
                    y_bar=y_bar.tolist(),
                    nearest_vertex=vertex.astype(int).tolist(),
                    distance=distance,
                    converged=converged,
                )
            )
    return rows


def _vertices(n: int) -> FloatArray:
    return np.array(list(itertools.product((0.0, 1.0), repeat=n)))


def binary_local_minima(cost: CostFunction) -> list[tuple[int, ...]]:
    """Vertices of {0,1}^n no single bit flip improves on, in lexicographic order."""
    vertices = _vertices(cost.n)
    energy = {tuple(int(v) for v in vertex): float(cost_value(cost, vertex)) for vertex in vertices}
    minima = []
    for key, value in energy.items():
        neighbours = (key[:i] + (1 - key[i],) + key[i + 1 :] for i in range(cost.n))
        if all(energy[other] >= value for other in neighbours):
            minima.append(key)
    return minima


def box_stationary_vertices(cost: CostFunction, theta: ArrayLike | None = None) -> list[tuple[int, ...]]:
    """Vertices meeting the first-order conditions of min f(y) - theta'y over [0,1]^n.

    At y_i = 1 the partial derivative must be <= 0, at y_i = 0 it must be >= 0.
    """
    shift = np.zeros(cost.n) if theta is None else np.asarray(theta, dtype=np.float64)
    stationary = []
    for vertex in _vertices(cost.n):
        slope = cost_gradient(cost, vertex) - shift
        if np.all(np.where(vertex == 1.0, slope <= 0, slope >= 0)):
            stationary.append(tuple(int(v) for v in vertex))
    return stationary
