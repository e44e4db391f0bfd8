"""Analytics over a recorded trace."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import quad
from scipy.optimize import brentq

from src.modules.dynamics.models import LyapunovTrace, TracePoint
from src.modules.model.models import FloatArray


def _arc_length(point: TracePoint, decay: FloatArray, span: float) -> float:
    """int_0^span ||F(t_a) * exp(-d s)|| ds."""
    if span <= 0:
        return 0.0
    if np.all(decay == decay[0]):
        rate = float(decay[0])
        return float(np.linalg.norm(point.drift)) * float(-np.expm1(-rate * span)) / rate
    value, _ = quad(lambda s: float(np.linalg.norm(point.drift * np.exp(-decay * s))), 0.0, span, epsabs=1e-13, epsrel=1e-12, limit=200)
    return value


def trajectory_length(trace: LyapunovTrace) -> float:
    """Length of the piecewise-analytic path through the recorded samples."""
    total = 0.0
    for current, following in zip(trace.samples, trace.samples[1:]):
        total += _arc_length(current, trace.decay, following.t - current.t)
    return total


def _position(point: TracePoint, decay: FloatArray, offset: float) -> FloatArray:
    return point.x + point.drift * (-np.expm1(-decay * offset) / decay)


def first_hitting_time(trace: LyapunovTrace, x_star: ArrayLike, radius: float) -> float | None:
    """First t with ||x(t) - x_star|| <= radius, located inside the interval where it happens."""
    target = np.asarray(x_star, dtype=np.float64)

    def gap(point: TracePoint, offset: float) -> float:
        return float(np.linalg.norm(_position(point, trace.decay, offset) - target)) - radius

    for current, following in zip(trace.samples, trace.samples[1:]):
        if gap(current, 0.0) <= 0:
            return current.t
        span = following.t - current.t
        if span > 0 and gap(current, span) <= 0:
            return current.t + brentq(lambda s: gap(current, s), 0.0, span, xtol=1e-14)
    if trace.samples and gap(trace.samples[-1], 0.0) <= 0:
        return trace.samples[-1].t
    return None


def is_nonincreasing(values: ArrayLike, tol: float) -> bool:
    series = np.asarray(values, dtype=np.float64)
    return bool(np.all(np.diff(series) <= tol))
