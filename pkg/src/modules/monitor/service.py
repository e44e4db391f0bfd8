"""Discrete engine: predict each neuron's next trigger from the closed-form flow."""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike

from src.core.exceptions import DomainError
from src.modules.dynamics.models import HybridState
from src.modules.dynamics.service import initial_state, trigger_value
from src.modules.model.models import NetworkModel
from src.modules.monitor.models import PredictionContext
from src.modules.trigger.localization import find_crossing
from src.modules.trigger.models import RunResult, ScheduledEvent, StopRule, TriggerConfig
from src.modules.trigger.recorder import RunRecorder
from src.modules.trigger.service import check_admissibility, eta_lower_bound, fire_many
from src.shared.enums import Engine, TriggerCause

logger = logging.getLogger(__name__)

STALE_TOL = 1e-9


def predict(
    model: NetworkModel,
    state: HybridState,
    cfg: TriggerConfig,
    i: int,
    eta_estimate: float | None = None,
) -> ScheduledEvent:
    if not 0 <= i < model.n:
        raise DomainError(f"neuron index {i} out of range for n={model.n}")
    deadline = float(state.last_trigger[i] + cfg.compulsory_period)
    crossing = find_crossing(model, state, cfg, [i], max(deadline - state.t, 0.0), eta_estimate)
    if crossing is not None and state.t + crossing.offset < deadline - cfg.simultaneity_tol:
        return ScheduledEvent(state.t + crossing.offset, i, TriggerCause.AUTONOMY)
    return ScheduledEvent(deadline, i, TriggerCause.COMPULSORY)


def predict_next(model: NetworkModel, state: HybridState, cfg: TriggerConfig, i: int) -> float:
    """t_star plus the longest stretch over which |e_i| <= gamma * Psi_i, capped at t_k^i + T."""
    return predict(model, state, cfg, i).time


def linked_neurons(model: NetworkModel, fired: list[int]) -> list[int]:
    """Fired neurons plus every j with S[j, i] != 0 for some fired i."""
    coupled = np.any(model.cost.S[:, fired] != 0, axis=1)
    return sorted(set(np.flatnonzero(coupled).tolist()) | set(fired))


def run_discrete(
    model: NetworkModel,
    cfg: TriggerConfig,
    x0: ArrayLike,
    stop: StopRule | None = None,
    record_dense: bool = False,
    linked_only: bool = False,
) -> RunResult:
    """Same updating rule as trigger.run, realised through a prediction queue."""
    stop = stop or StopRule()
    bounds = check_admissibility(model, cfg, x0)
    state = initial_state(model, x0)
    recorder = RunRecorder(model, cfg, stop, Engine.DISCRETE, record_dense)
    recorder.start(state)
    context = PredictionContext(model.n)
    everyone = list(range(model.n))
    logger.info("discrete run: n=%d gamma=%g T=%g linked_only=%s", model.n, cfg.gamma, cfg.compulsory_period, linked_only)

    def reschedule(neurons: list[int]) -> None:
        context.invalidate(neurons)
        for i in neurons:
            event = predict(model, state, cfg, i, recorder.eta_estimate)
            context.schedule(i, event.time, event.cause, float(state.last_trigger[i] + cfg.compulsory_period))

    reschedule(everyone)
    while not recorder.should_stop(state):
        when = context.peek_time()
        if when is None or when > stop.max_time:
            state = recorder.advance(state, stop.max_time)
            continue
        batch = context.pop_instant(cfg.simultaneity_tol)
        state = recorder.advance(state, when)
        context.advance(state.t)

        ready = []
        for event in batch:
            if event.cause is TriggerCause.AUTONOMY and trigger_value(model, state, event.neuron, cfg.gamma) < -STALE_TOL:
                recorder.stale_predictions += 1
                logger.warning("stale prediction for neuron %d at t=%.12g; re-predicting", event.neuron, state.t)
                reschedule([event.neuron])
            else:
                ready.append(event)
        if not ready:
            continue

        fired = [event.neuron for event in ready]
        state = recorder.record_fire(state, fire_many(model, state, fired), ready)
        reschedule(linked_neurons(model, fired) if linked_only else everyone)

    return recorder.finish(state, bounds, eta_lower_bound(cfg, model))
