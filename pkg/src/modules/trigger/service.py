"""Updating rule, admissibility bounds and the inter-event lower bound."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import brentq

from src.core.exceptions import DomainError, TriggerConfigError
from src.modules.dynamics.models import HybridState, LyapunovTrace
from src.modules.dynamics.service import initial_state, true_gradient
from src.modules.model.models import NetworkModel
from src.modules.model.service import MAX_SIGMOID_SLOPE, default_m_bound, sigmoid_derivative, state_radius
from src.modules.trigger.localization import locate_events
from src.modules.trigger.models import (
    MAX_EXP,
    AdmissibilityBounds,
    RunResult,
    ScheduledEvent,
    StopRule,
    TriggerConfig,
)
from src.modules.trigger.recorder import RunRecorder
from src.shared.enums import Engine

logger = logging.getLogger(__name__)

FIXED_POINT_EPS = 1e-15


def _check_c(c: float) -> None:
    if not 0.0 < c < 2.0:
        raise TriggerConfigError(f"c must lie in (0, 2), got {c}")


def _bounds(alpha: float, beta: float, state_box: float) -> AdmissibilityBounds:
    return AdmissibilityBounds(alpha=alpha, beta=beta, gamma_max=math.sqrt(alpha / beta), state_box=state_box)


def compute_alpha_beta(model: NetworkModel, c: float, state_box: float) -> AdmissibilityBounds:
    """Worst-case alpha, beta on the box |x_i| <= state_box."""
    _check_c(c)
    if state_box < 0 or not math.isfinite(state_box):
        raise DomainError(f"state_box must be finite and nonnegative, got {state_box}")
    beta = model.lam.max() * MAX_SIGMOID_SLOPE / (2.0 * c)
    alpha = (1.0 - c / 2.0) * float(np.min(model.lam * sigmoid_derivative(model.lam * state_box)))
    return _bounds(alpha, beta, state_box)


def posthoc_alpha_beta(model: NetworkModel, c: float, trace: LyapunovTrace) -> AdmissibilityBounds:
    """alpha, beta from inf/sup of lambda_i g'(lambda_i x_i) over a recorded trajectory."""
    _check_c(c)
    states = [point.x for point in trace.samples] + [block.x for block in trace.dense]
    if not states:
        raise DomainError("trace holds no samples")
    xs = np.vstack(states)
    weights = model.lam * sigmoid_derivative(model.lam * xs)
    alpha = (1.0 - c / 2.0) * float(weights.min())
    beta = float(weights.max()) / (2.0 * c)
    return _bounds(alpha, beta, float(np.max(np.abs(xs))))


def eta_fixed_point(k: float, d: float) -> float:
    """Unique root of eta = k * exp(-d * eta) on (0, k]."""
    if not (k > 0 and d > 0) or not (math.isfinite(k) and math.isfinite(d)):
        raise DomainError(f"k and d must be positive and finite, got k={k}, d={d}")
    if d * k < FIXED_POINT_EPS:
        # k * exp(-d k) rounds to k
        return k
    return float(brentq(lambda eta: k * math.exp(-d * eta) - eta, 0.0, k, xtol=FIXED_POINT_EPS * min(1.0, k)))


def eta_lower_bound(cfg: TriggerConfig, model: NetworkModel) -> float:
    """Common lower bound on every inter-event gap; 0 once K underflows.

    K = gamma / (M sqrt(sigma) exp(d_max T)) is formed in log space.
    """
    log_k = (
        math.log(cfg.gamma)
        - math.log(cfg.m_bound)
        - 0.5 * cfg.log_sigma
        - model.d_max * cfg.compulsory_period
    )
    if log_k >= MAX_EXP:
        raise TriggerConfigError(f"inter-event constant overflows (log K = {log_k:.6g})")
    k = math.exp(log_k)
    if k == 0.0:
        logger.warning("inter-event bound underflows (log K = %.6g); reporting eta = 0", log_k)
        return 0.0
    return min(eta_fixed_point(k, float(d)) for d in model.d)


def build_trigger_config(
    model: NetworkModel,
    gamma: float,
    compulsory_period: float,
    c: float = 1.0,
    m_bound: float | None = None,
    sigma: float | None = None,
    bracketing_step: float | None = None,
    bisection_tol: float = 1e-12,
    allow_inadmissible_gamma: bool = False,
) -> TriggerConfig:
    """TriggerConfig with M and sigma derived from the model unless overridden."""
    if sigma is None:
        if not compulsory_period > 0:
            raise TriggerConfigError(f"compulsory_period must be positive, got {compulsory_period}")
        log_sigma = 2.0 * model.d_max * compulsory_period
    elif sigma > 0 and math.isfinite(sigma):
        log_sigma = math.log(sigma)
    else:
        raise TriggerConfigError(f"sigma must be positive and finite, got {sigma}")
    return TriggerConfig(
        gamma=gamma,
        c=c,
        compulsory_period=compulsory_period,
        m_bound=default_m_bound(model) if m_bound is None else m_bound,
        log_sigma=log_sigma,
        bracketing_step=bracketing_step,
        bisection_tol=bisection_tol,
        allow_inadmissible_gamma=allow_inadmissible_gamma,
    )


def check_admissibility(model: NetworkModel, cfg: TriggerConfig, x0: ArrayLike) -> AdmissibilityBounds:
    """A-priori bounds on max(r0, |x0|_inf); raises unless the override is set."""
    box = max(state_radius(model), float(np.max(np.abs(np.asarray(x0, dtype=np.float64)))))
    bounds = compute_alpha_beta(model, cfg.c, box)
    if cfg.gamma >= bounds.gamma_max:
        message = f"gamma={cfg.gamma} is not below the a-priori bound {bounds.gamma_max:.6g} (box {box:.6g})"
        if not cfg.allow_inadmissible_gamma:
            raise TriggerConfigError(message)
        logger.warning("%s; proceeding under override", message)
    return bounds


def next_event(model: NetworkModel, state: HybridState, cfg: TriggerConfig, eta_estimate: float | None = None) -> ScheduledEvent:
    """Earliest firing after state.t; ties go to the lowest neuron index."""
    return locate_events(model, state, cfg, eta_estimate=eta_estimate)[0]


def fire(model: NetworkModel, state: HybridState, neuron: int) -> HybridState:
    return fire_many(model, state, [neuron])


def fire_many(model: NetworkModel, state: HybridState, neurons: Sequence[int]) -> HybridState:
    """Resample the gradient components of `neurons` at the current x."""
    for i in neurons:
        if not 0 <= i < model.n:
            raise DomainError(f"neuron index {i} out of range for n={model.n}")
    gradient = true_gradient(model, state.x)
    last_trigger = state.last_trigger.copy()
    sampled = state.sampled_grad.copy()
    index = np.asarray(neurons, dtype=np.intp)
    last_trigger[index] = state.t
    sampled[index] = gradient[index]
    return HybridState(t=state.t, x=state.x, last_trigger=last_trigger, sampled_grad=sampled)


def run(
    model: NetworkModel,
    cfg: TriggerConfig,
    x0: ArrayLike,
    stop: StopRule | None = None,
    record_dense: bool = False,
) -> RunResult:
    """Continuous-monitoring engine: flow exactly to each event, fire, repeat."""
    stop = stop or StopRule()
    bounds = check_admissibility(model, cfg, x0)
    state = initial_state(model, x0)
    recorder = RunRecorder(model, cfg, stop, Engine.CONTINUOUS, record_dense)
    recorder.start(state)
    logger.info("continuous run: n=%d gamma=%g T=%g", model.n, cfg.gamma, cfg.compulsory_period)

    while not recorder.should_stop(state):
        events = locate_events(model, state, cfg, eta_estimate=recorder.eta_estimate)
        when = events[0].time
        if when > stop.max_time:
            state = recorder.advance(state, stop.max_time)
            continue
        state = recorder.advance(state, when)
        state = recorder.record_fire(state, fire_many(model, state, [event.neuron for event in events]), events)

    return recorder.finish(state, bounds, eta_lower_bound(cfg, model))
