"""Zero-crossing search for the autonomy criterion along the closed-form flow."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from src.core.config import settings
from src.modules.dynamics.models import HybridState
from src.modules.dynamics.service import flow_window
from src.modules.model.models import FloatArray, NetworkModel
from src.modules.trigger.models import ScheduledEvent, TriggerConfig
from src.shared.enums import TriggerCause

STEPS_PER_SCALE = 50.0


@dataclass(frozen=True)
class Crossing:
    """Earliest upward zero crossing and the neurons sharing it."""

    offset: float
    neurons: tuple[int, ...]


def scan_plan(cfg: TriggerConfig, eta_estimate: float | None) -> tuple[float, float, float]:
    """(first step, growth, largest step) for the forward scan."""
    period = cfg.compulsory_period
    if cfg.bracketing_step is not None:
        return cfg.bracketing_step, 1.0, cfg.bracketing_step
    scale = period if eta_estimate is None else min(period, eta_estimate)
    return scale / STEPS_PER_SCALE, settings.bracket_growth, period / STEPS_PER_SCALE


def _chunk(start: float, step: float, growth: float, max_step: float, span: float) -> tuple[FloatArray, float]:
    steps = np.minimum(step * growth ** np.arange(settings.bracket_chunk), max_step)
    grid = start + np.cumsum(steps)
    inside = grid[grid < span]
    grid = np.append(inside, span) if inside.size < grid.size else inside
    return grid, float(min(steps[-1] * growth, max_step))


def _trigger_at(model: NetworkModel, state: HybridState, gamma: float, offset: float, neuron: int) -> float:
    return float(flow_window(model, state, [offset], gamma).trigger[0, neuron])


def find_crossing(
    model: NetworkModel,
    state: HybridState,
    cfg: TriggerConfig,
    neurons: Sequence[int],
    span: float,
    eta_estimate: float | None = None,
) -> Crossing | None:
    """First s in [0, span] where some T_i(t + s) becomes positive.

    Offsets are measured from state.t. A crossing already present at s = 0 is
    returned as an immediate event.
    """
    watched = np.asarray(sorted(neurons), dtype=np.intp)
    if watched.size == 0 or span < 0:
        return None
    start = flow_window(model, state, [0.0], cfg.gamma).trigger[0, watched]
    if np.any(start > 0):
        return Crossing(0.0, tuple(int(i) for i in watched[start > 0]))
    if span == 0:
        return None

    step, growth, max_step = scan_plan(cfg, eta_estimate)
    lower = 0.0
    while lower < span:
        grid, step = _chunk(lower, step, growth, max_step, span)
        values = flow_window(model, state, grid, cfg.gamma).trigger[:, watched]
        hits = np.flatnonzero(np.any(values > 0, axis=1))
        if hits.size == 0:
            lower = float(grid[-1])
            continue
        row = int(hits[0])
        left = lower if row == 0 else float(grid[row - 1])
        right = float(grid[row])
        roots = {
            int(i): brentq(
                lambda s, i=int(i): _trigger_at(model, state, cfg.gamma, s, i),
                left,
                right,
                xtol=cfg.bisection_tol,
            )
            for i in watched[values[row] > 0]
        }
        first = min(roots.values())
        together = tuple(sorted(i for i, root in roots.items() if root - first <= cfg.simultaneity_tol))
        return Crossing(first, together)
    return None


def locate_events(
    model: NetworkModel,
    state: HybridState,
    cfg: TriggerConfig,
    neurons: Sequence[int] | None = None,
    eta_estimate: float | None = None,
) -> list[ScheduledEvent]:
    """All firings of the earliest hybrid instant after state.t, in ascending neuron order."""
    watched = list(range(model.n)) if neurons is None else sorted(neurons)
    deadlines = state.last_trigger[watched] + cfg.compulsory_period
    horizon = float(np.min(deadlines))
    crossing = find_crossing(model, state, cfg, watched, max(horizon - state.t, 0.0), eta_estimate)

    if crossing is not None and state.t + crossing.offset < horizon - cfg.simultaneity_tol:
        when = state.t + crossing.offset
        return [ScheduledEvent(when, i, TriggerCause.AUTONOMY) for i in crossing.neurons]

    crossed = set(crossing.neurons) if crossing is not None else set()
    due = {i for i, deadline in zip(watched, deadlines) if deadline - horizon <= cfg.simultaneity_tol}
    return [
        ScheduledEvent(horizon, i, TriggerCause.AUTONOMY if i in crossed and i not in due else TriggerCause.COMPULSORY)
        for i in sorted(due | crossed)
    ]
