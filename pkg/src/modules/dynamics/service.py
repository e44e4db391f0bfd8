"""Exact inter-event flow and the quantities the event rule is built from."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from src.core.exceptions import DomainError
from src.modules.dynamics.models import FlowWindow, HybridState
from src.modules.model.models import FloatArray, NetworkModel
from src.modules.model.service import (
    cost_gradient,
    cost_value,
    inverse_sigmoid_integral,
    outputs,
    sigmoid_derivative,
)


def true_gradient(model: NetworkModel, x: ArrayLike) -> FloatArray:
    """grad f(g(Lambda x)) evaluated at the current (not held) outputs."""
    return cost_gradient(model.cost, outputs(model, x))


def initial_state(model: NetworkModel, x0: ArrayLike) -> HybridState:
    """t = 0 with every neuron sampled, so e(0) = 0."""
    x = np.array(x0, dtype=np.float64)
    if x.shape != (model.n,) or not np.all(np.isfinite(x)):
        raise DomainError(f"x0 must be a finite vector of length {model.n}")
    return HybridState(t=0.0, x=x, last_trigger=np.zeros(model.n), sampled_grad=true_gradient(model, x))


def _check_index(state: HybridState, i: int) -> None:
    if not 0 <= i < state.n:
        raise DomainError(f"neuron index {i} out of range for n={state.n}")


def drift(model: NetworkModel, state: HybridState) -> FloatArray:
    """F_i = -d_i x_i - G_i + theta_i, which is also dx_i/dt."""
    return -model.d * state.x - state.sampled_grad + model.theta


def equilibrium_residual(model: NetworkModel, x: ArrayLike) -> float:
    """||-D x - grad f(g(Lambda x)) + theta||_inf."""
    xs = np.asarray(x, dtype=np.float64)
    return float(np.max(np.abs(-model.d * xs - true_gradient(model, xs) + model.theta)))


def exact_flow(model: NetworkModel, state: HybridState, dt: float) -> HybridState:
    """Advance by dt assuming no event in (t, t+dt]."""
    if dt < 0:
        raise DomainError(f"cannot flow backwards (dt={dt})")
    if dt == 0:
        return state
    gain = -np.expm1(-model.d * dt) / model.d
    x = state.x + drift(model, state) * gain
    return HybridState(t=state.t + dt, x=x, last_trigger=state.last_trigger, sampled_grad=state.sampled_grad)


def measurement_error(model: NetworkModel, state: HybridState) -> FloatArray:
    return true_gradient(model, state.x) - state.sampled_grad


def _scaled_decay(model: NetworkModel, ages: FloatArray) -> tuple[FloatArray, FloatArray]:
    """exp(-d_i a_i) divided by its largest entry, plus that entry's exponent.

    Row-wise for stacked ages; the scaled entries stay in (0, 1] so their
    squares never all underflow.
    """
    exponents = model.d * ages
    smallest = np.min(exponents, axis=-1, keepdims=True)
    return np.exp(smallest - exponents), smallest[..., 0]


def _delta_psi(model: NetworkModel, f: FloatArray, ages: FloatArray) -> tuple[FloatArray, FloatArray]:
    scaled, smallest = _scaled_decay(model, ages)
    ratio = np.sum(f * f, axis=-1) / np.sum(scaled * scaled, axis=-1)
    with np.errstate(over="ignore"):
        delta_values = ratio * np.exp(2.0 * smallest)
    return delta_values, np.sqrt(ratio)[..., None] * scaled


def delta(model: NetworkModel, state: HybridState) -> float:
    """sum |F_i|^2 / sum exp(-2 d_i (t - t_k^i)), with the largest decay factored out of the sum."""
    return float(_delta_psi(model, drift(model, state), state.ages())[0])


def psi(model: NetworkModel, state: HybridState, i: int) -> float:
    _check_index(state, i)
    return float(_delta_psi(model, drift(model, state), state.ages())[1][i])


def trigger_value(model: NetworkModel, state: HybridState, i: int, gamma: float) -> float:
    """|e_i| - gamma * Psi_i; the autonomy criterion fires on its upward zero crossing."""
    _check_index(state, i)
    e = measurement_error(model, state)[i]
    return float(abs(e) - gamma * psi(model, state, i))


def lyapunov(model: NetworkModel, x: ArrayLike) -> FloatArray:
    """L(x) = f(y) + sum (d_i/lambda_i) int_0^{y_i} g^-1 - theta'y; row-wise for stacked x."""
    y = outputs(model, x)
    entropy = np.sum((model.d / model.lam) * inverse_sigmoid_integral(y), axis=-1)
    return cost_value(model.cost, y) + entropy - y @ model.theta


def lyapunov_rate(model: NetworkModel, state: HybridState) -> float:
    """dL/dt = -sum lambda_i g'(lambda_i x_i) (F_i - e_i) F_i along the hybrid flow."""
    f = drift(model, state)
    e = measurement_error(model, state)
    weight = model.lam * sigmoid_derivative(model.lam * state.x)
    return float(-np.sum(weight * (f - e) * f))


def flow_window(model: NetworkModel, state: HybridState, offsets: ArrayLike, gamma: float) -> FlowWindow:
    """Evaluate x, F, e, delta, Psi and T_i at t + offsets without events in between.

    Between events F_i decays as exp(-d_i s), so every quantity is closed form.
    """
    s = np.asarray(offsets, dtype=np.float64)
    ds = np.outer(s, model.d)
    f0 = drift(model, state)
    x = state.x + f0 * (-np.expm1(-ds) / model.d)
    f = f0 * np.exp(-ds)
    error = true_gradient(model, x) - state.sampled_grad
    delta_values, psi_values = _delta_psi(model, f, state.ages()[None, :] + s[:, None])
    return FlowWindow(
        offsets=s,
        x=x,
        drift=f,
        error=error,
        delta=delta_values,
        psi=psi_values,
        trigger=np.abs(error) - gamma * psi_values,
    )


def window_lyapunov_rate(model: NetworkModel, window: FlowWindow) -> FloatArray:
    weight = model.lam * sigmoid_derivative(model.lam * window.x)
    return -np.sum(weight * (window.drift - window.error) * window.drift, axis=1)
