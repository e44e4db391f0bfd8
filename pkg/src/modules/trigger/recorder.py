"""Bookkeeping shared by the continuous and discrete engines."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import replace

import numpy as np

from src.core.config import settings
from src.modules.dynamics.models import DenseBlock, HybridState, LyapunovTrace, TracePoint
from src.modules.dynamics.service import (
    drift,
    equilibrium_residual,
    exact_flow,
    flow_window,
    lyapunov,
    lyapunov_rate,
    window_lyapunov_rate,
)
from src.modules.dynamics.trace import first_hitting_time, trajectory_length
from src.modules.model.models import NetworkModel
from src.modules.trigger.models import (
    AdmissibilityBounds,
    EventRecord,
    RunResult,
    ScheduledEvent,
    StopRule,
    TriggerConfig,
)
from src.modules.trigger.schemas import RunSummary
from src.shared.enums import Engine, RunOutcome

logger = logging.getLogger(__name__)

AUDIT_TOL = 1e-9


class RunRecorder:
    """Owns the trace, the event log and the gap statistics of one run."""

    def __init__(
        self,
        model: NetworkModel,
        cfg: TriggerConfig,
        stop: StopRule,
        engine: Engine,
        record_dense: bool = False,
    ):
        self.model = model
        self.cfg = cfg
        self.stop = stop
        self.engine = engine
        self.record_dense = record_dense
        self.trace = LyapunovTrace(decay=model.d.copy())
        self.events: list[EventRecord] = []
        self.counts = np.zeros(model.n, dtype=np.int64)
        self.min_gap: float | None = None
        self.missed_crossings = 0
        self.stale_predictions = 0
        self.outcome: RunOutcome | None = None

    @property
    def eta_estimate(self) -> float | None:
        return self.min_gap

    def start(self, state: HybridState) -> None:
        self._sample(state, ())

    def should_stop(self, state: HybridState) -> bool:
        if equilibrium_residual(self.model, state.x) < self.stop.residual:
            self.outcome = RunOutcome.CONVERGED
        elif state.t >= self.stop.max_time:
            self.outcome = RunOutcome.MAX_TIME
        return self.outcome is not None

    def advance(self, state: HybridState, until: float) -> HybridState:
        """Flow to `until`, auditing the open interval when dense sampling is on."""
        span = until - state.t
        if self.record_dense and span > 0:
            self._dense(state, span)
        # land exactly on the event clock so deadlines compare cleanly
        return replace(exact_flow(self.model, state, span), t=until) if span > 0 else state

    def record_fire(self, before: HybridState, after: HybridState, events: Iterable[ScheduledEvent]) -> HybridState:
        """Book one hybrid instant; `after` is `before` with every event's neuron resampled."""
        batch = sorted(events, key=lambda event: event.neuron)
        if not batch:
            return before
        for event in batch:
            i = event.neuron
            gap = float(before.t - before.last_trigger[i])
            if gap > 0:
                self.min_gap = gap if self.min_gap is None else min(self.min_gap, gap)
            self.counts[i] += 1
            self.events.append(EventRecord(i, before.t, event.cause, before.x.copy(), float(after.sampled_grad[i])))
        logger.debug("t=%.12g fired %s", before.t, [event.neuron for event in batch])
        self._sample(after, tuple(event.neuron for event in batch))
        return after

    def finish(self, state: HybridState, bounds: AdmissibilityBounds, eta_theory: float) -> RunResult:
        if self.outcome is None:
            self.should_stop(state)
        outcome = self.outcome or RunOutcome.MAX_TIME
        if state.t > self.trace.samples[-1].t:
            self._sample(state, ())
        x_star = state.x.copy()
        t_first = first_hitting_time(self.trace, x_star, settings.first_hit_radius)
        to_first = np.zeros(self.model.n, dtype=np.int64)
        if t_first is not None:
            for event in self.events:
                if event.time <= t_first:
                    to_first[event.neuron] += 1
        summary = RunSummary(
            engine=self.engine,
            outcome=outcome,
            converged=outcome is RunOutcome.CONVERGED,
            x_star=x_star.tolist(),
            final_time=state.t,
            final_residual=equilibrium_residual(self.model, state.x),
            eta_sim=self.min_gap,
            eta_theory=eta_theory,
            events_per_neuron=self.counts.tolist(),
            events_to_first_hit=to_first.tolist(),
            t_first=t_first,
            trajectory_length=trajectory_length(self.trace),
            alpha=bounds.alpha,
            beta=bounds.beta,
            gamma_max=bounds.gamma_max,
            state_sup=self.trace.state_sup(),
            missed_crossings=self.missed_crossings,
            stale_predictions=self.stale_predictions,
        )
        logger.info(
            "%s run finished: outcome=%s t=%.6g events=%d eta_sim=%s",
            self.engine.value,
            outcome.value,
            state.t,
            summary.total_events,
            summary.eta_sim,
        )
        return RunResult(trace=self.trace, events=self.events, summary=summary)

    def _sample(self, state: HybridState, fired: tuple[int, ...]) -> None:
        self.trace.append(
            TracePoint(
                t=state.t,
                x=state.x.copy(),
                drift=drift(self.model, state),
                lyapunov=float(lyapunov(self.model, state.x)),
                lyapunov_rate=lyapunov_rate(self.model, state),
                fired=fired,
            )
        )

    def _dense(self, state: HybridState, span: float) -> None:
        count = settings.dense_samples_per_interval
        offsets = span * np.arange(1, count + 1) / (count + 1)
        window = flow_window(self.model, state, offsets, self.cfg.gamma)
        block = DenseBlock(
            t=state.t + offsets,
            x=window.x,
            error=window.error,
            psi=window.psi,
            trigger=window.trigger,
            lyapunov=lyapunov(self.model, window.x),
            lyapunov_rate=window_lyapunov_rate(self.model, window),
            drift_sq=np.sum(window.drift * window.drift, axis=1),
        )
        self.trace.dense.append(block)
        violations = int(np.count_nonzero(np.any(window.trigger > AUDIT_TOL, axis=1)))
        if violations:
            self.missed_crossings += 1
            logger.warning(
                "missed crossing between t=%.12g and t=%.12g (%d dense samples above threshold)",
                state.t,
                state.t + span,
                violations,
            )
