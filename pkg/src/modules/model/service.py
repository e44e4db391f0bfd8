"""Activation, cost-function calculus and a-priori bounds."""

from __future__ import annotations

import dataclasses

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import expit, xlogy

from src.core.config import settings
from src.core.exceptions import DomainError, ModelError
from src.modules.model.models import CostFunction, FloatArray, NetworkModel

MAX_SIGMOID_SLOPE = 0.25


def sigmoid(u: ArrayLike) -> FloatArray:
    """Logistic function 1/(1+exp(-u)); stable for large |u|."""
    return expit(np.asarray(u, dtype=np.float64))


def sigmoid_derivative(u: ArrayLike) -> FloatArray:
    s = sigmoid(u)
    return s * (1.0 - s)


def inverse_sigmoid_integral(y: ArrayLike) -> FloatArray:
    """Closed form of int_0^y ln(s/(1-s)) ds = y ln y + (1-y) ln(1-y).

    The endpoints take their limit value 0.
    """
    values = np.asarray(y, dtype=np.float64)
    if np.any(values < 0.0) or np.any(values > 1.0) or np.any(np.isnan(values)):
        raise DomainError("inverse_sigmoid_integral is defined on [0, 1] only")
    return xlogy(values, values) + xlogy(1.0 - values, 1.0 - values)


def _check_dimension(cost: CostFunction, y: FloatArray) -> None:
    if y.shape[-1] != cost.n:
        raise ModelError(f"expected vectors of length {cost.n}, got {y.shape[-1]}")


def cost_value(cost: CostFunction, y: ArrayLike) -> FloatArray:
    """f(y); accepts a single vector or a stack of row vectors."""
    ys = np.asarray(y, dtype=np.float64)
    _check_dimension(cost, ys)
    separable = np.sum(cost.c4 * ys**4 + cost.c3 * ys**3, axis=-1)
    quadratic = 0.5 * np.einsum("...i,ij,...j->...", ys, cost.W, ys)
    return separable - quadratic + ys @ cost.b


def cost_gradient(cost: CostFunction, y: ArrayLike) -> FloatArray:
    """grad f(y) = 4 c4 y^3 + 3 c3 y^2 - S y + b; row-wise for stacked inputs."""
    ys = np.asarray(y, dtype=np.float64)
    _check_dimension(cost, ys)
    return 4.0 * cost.c4 * ys**3 + 3.0 * cost.c3 * ys**2 - ys @ cost.S + cost.b


def cost_hessian(cost: CostFunction, y: ArrayLike) -> FloatArray:
    ys = np.asarray(y, dtype=np.float64)
    _check_dimension(cost, ys)
    if ys.ndim != 1:
        raise ModelError("cost_hessian takes a single vector")
    return np.diag(12.0 * cost.c4 * ys**2 + 6.0 * cost.c3 * ys) - cost.S


def spectral_norm(matrix: ArrayLike) -> float:
    """Largest singular value by power iteration on A'A from the normalized all-ones vector."""
    a = np.asarray(matrix, dtype=np.float64)
    gram = a.T @ a
    v = np.ones(gram.shape[0]) / np.sqrt(gram.shape[0])
    estimate = 0.0
    for _ in range(settings.power_iteration_max_iter):
        w = gram @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(norm - estimate) <= settings.power_iteration_tol * max(norm, 1.0):
            estimate = norm
            break
        estimate = norm
    return float(np.sqrt(estimate))


def _max_abs_polynomial(coefficients: list[float]) -> float:
    """max |p(y)| over y in [0, 1] for a polynomial given highest power first."""
    poly = np.polynomial.Polynomial(coefficients[::-1]).trim()
    candidates = [0.0, 1.0]
    candidates.extend(
        float(r.real) for r in poly.deriv().roots() if abs(r.imag) < 1e-12 and 0.0 <= r.real <= 1.0
    )
    return float(max(abs(poly(c)) for c in candidates))


def hessian_sup_bound(cost: CostFunction) -> float:
    """Upper bound of ||hess f(y)||_2 over [0,1]^n: ||S||_2 + max |12 c4 y^2 + 6 c3 y|."""
    diagonal = _max_abs_polynomial([12.0 * cost.c4, 6.0 * cost.c3, 0.0])
    return spectral_norm(cost.S) + diagonal


def gradient_component_bound(cost: CostFunction) -> FloatArray:
    """B_i >= |[grad f(y)]_i| for every y in [0,1]^n."""
    separable = _max_abs_polynomial([4.0 * cost.c4, 3.0 * cost.c3, 0.0, 0.0])
    return separable + np.abs(cost.S).sum(axis=1) + np.abs(cost.b)


def state_radius(model: NetworkModel) -> float:
    """r0 = max_i (|theta_i| + B_i) / d_i; trajectories never leave max(r0, ||x(0)||_inf)."""
    bound = gradient_component_bound(model.cost)
    return float(np.max((np.abs(model.theta) + bound) / model.d))


def outputs(model: NetworkModel, x: ArrayLike) -> FloatArray:
    """y = g(Lambda x)."""
    return sigmoid(model.lam * np.asarray(x, dtype=np.float64))


def default_m_bound(model: NetworkModel) -> float:
    """sqrt(n) * max_i lambda_i * sup ||hess f||."""
    return float(np.sqrt(model.n) * model.lam.max() * hessian_sup_bound(model.cost))


def with_uniform_lambda(model: NetworkModel, lam: float) -> NetworkModel:
    return dataclasses.replace(model, lam=np.full(model.n, float(lam)), name=f"{model.name}@lambda={lam:g}")
