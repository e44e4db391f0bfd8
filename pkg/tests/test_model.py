import warnings

import numpy as np
import pytest

from src.core.exceptions import DomainError, ModelError
from src.modules.model.models import CostFunction, NetworkModel
from src.modules.model.schemas import ModelSection
from src.modules.model.service import (
    cost_gradient,
    cost_hessian,
    cost_value,
    default_m_bound,
    gradient_component_bound,
    hessian_sup_bound,
    inverse_sigmoid_integral,
    outputs,
    sigmoid,
    sigmoid_derivative,
    spectral_norm,
    state_radius,
    with_uniform_lambda,
)


def test_sigmoid_is_stable_at_extremes():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        values = sigmoid([-1000.0, 0.0, 1000.0])
    assert values[0] == 0.0
    assert values[1] == 0.5
    assert values[2] == 1.0


def test_sigmoid_derivative_peaks_at_zero():
    assert sigmoid_derivative(0.0) == pytest.approx(0.25)
    assert np.all(sigmoid_derivative(np.linspace(-5, 5, 41)) <= 0.25)


def test_inverse_sigmoid_integral_endpoints_and_midpoint():
    values = inverse_sigmoid_integral([0.0, 0.5, 1.0])
    assert values[0] == 0.0
    assert values[1] == pytest.approx(np.log(0.5))
    assert values[2] == 0.0


def test_inverse_sigmoid_integral_rejects_values_outside_unit_interval():
    with pytest.raises(DomainError):
        inverse_sigmoid_integral([1.2])
    with pytest.raises(DomainError):
        inverse_sigmoid_integral([-0.1])


def test_inverse_sigmoid_integral_derivative_is_logit():
    y, h = 0.3, 1e-6
    slope = (inverse_sigmoid_integral(y + h) - inverse_sigmoid_integral(y - h)) / (2 * h)
    assert slope == pytest.approx(np.log(y / (1 - y)), rel=1e-6)


def test_cost_gradient_matches_finite_differences(example1):
    rng = np.random.default_rng(7)
    cost = example1.cost
    for _ in range(20):
        y = rng.uniform(0.05, 0.95, size=cost.n)
        numeric = np.array(
            [
                (cost_value(cost, y + 1e-6 * e) - cost_value(cost, y - 1e-6 * e)) / 2e-6
                for e in np.eye(cost.n)
            ]
        )
        np.testing.assert_allclose(cost_gradient(cost, y), numeric, rtol=1e-6, atol=1e-8)


def test_gradient_uses_symmetrized_coupling(example1):
    cost = example1.cost
    np.testing.assert_allclose(cost.S, cost.S.T)
    y = np.full(cost.n, 0.5)
    expected = 4 * cost.c4 * y**3 + 3 * cost.c3 * y**2 - 0.5 * (cost.W + cost.W.T) @ y + cost.b
    np.testing.assert_allclose(cost_gradient(cost, y), expected)


def test_cost_hessian_matches_gradient_differences(example2):
    cost = example2.cost
    y = np.array([0.2, 0.6, 0.9])
    numeric = np.column_stack(
        [(cost_gradient(cost, y + 1e-6 * e) - cost_gradient(cost, y - 1e-6 * e)) / 2e-6 for e in np.eye(3)]
    )
    np.testing.assert_allclose(cost_hessian(cost, y), numeric, rtol=1e-6, atol=1e-8)


def test_cost_functions_evaluate_row_stacks(example2):
    ys = np.array([[0.1, 0.2, 0.3], [0.9, 0.8, 0.7]])
    stacked = cost_gradient(example2.cost, ys)
    for row, y in zip(stacked, ys):
        np.testing.assert_allclose(row, cost_gradient(example2.cost, y))
    np.testing.assert_allclose(cost_value(example2.cost, ys), [cost_value(example2.cost, y) for y in ys])


def test_cost_dimension_mismatch_raises(example2):
    with pytest.raises(ModelError):
        cost_gradient(example2.cost, np.zeros(4))


def test_spectral_norm_matches_svd(example1):
    assert spectral_norm(example1.cost.S) == pytest.approx(np.linalg.norm(example1.cost.S, 2), rel=1e-6)
    assert spectral_norm(np.zeros((3, 3))) == 0.0


def test_hessian_sup_bound_dominates_sampled_hessians(example2):
    bound = hessian_sup_bound(example2.cost)
    rng = np.random.default_rng(3)
    for y in rng.uniform(0, 1, size=(200, 3)):
        assert np.linalg.norm(cost_hessian(example2.cost, y), 2) <= bound + 1e-12


def test_gradient_component_bound_dominates_sampled_gradients(example1):
    bound = gradient_component_bound(example1.cost)
    rng = np.random.default_rng(4)
    grads = cost_gradient(example1.cost, rng.uniform(0, 1, size=(500, 5)))
    assert np.all(np.abs(grads) <= bound + 1e-12)


def test_state_radius_and_default_m_bound(example2):
    assert state_radius(example2) > 0
    expected = np.sqrt(3) * 1.0 * hessian_sup_bound(example2.cost)
    assert default_m_bound(example2) == pytest.approx(expected)


def test_with_uniform_lambda_scales_outputs(example2):
    steep = with_uniform_lambda(example2, 100.0)
    np.testing.assert_array_equal(steep.lam, np.full(3, 100.0))
    np.testing.assert_array_equal(steep.theta, example2.theta)
    np.testing.assert_allclose(outputs(steep, [0.1, -0.1, 0.0]), sigmoid([10.0, -10.0, 0.0]))
    assert default_m_bound(steep) == pytest.approx(100.0 * default_m_bound(example2))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"d": [1.0, -1.0]},
        {"lam": [1.0, 0.0]},
        {"theta": [1.0]},
        {"d": [1.0, np.inf]},
    ],
)
def test_network_model_rejects_invalid_parameters(kwargs):
    cost = CostFunction(c4=1.0, c3=-1.0, W=np.eye(2), b=np.ones(2))
    params = {"d": [1.0, 1.0], "lam": [1.0, 1.0], "theta": [0.0, 0.0]} | kwargs
    with pytest.raises(ModelError):
        NetworkModel(cost=cost, **params)


def test_cost_dimension_must_match_network():
    cost = CostFunction(c4=1.0, c3=-1.0, W=np.eye(3), b=np.ones(3))
    with pytest.raises(ModelError):
        NetworkModel(d=np.ones(2), lam=np.ones(2), theta=np.zeros(2), cost=cost)


def test_cost_function_rejects_non_square_coupling():
    with pytest.raises(ModelError):
        CostFunction(c4=1.0, c3=-1.0, W=np.ones((2, 3)), b=np.ones(2))


def test_model_section_round_trip(example1):
    section = ModelSection.from_model(example1)
    dumped = section.model_dump(by_alias=True)
    assert dumped["lambda"] == [1.0] * 5
    rebuilt = ModelSection.model_validate(dumped).to_model()
    np.testing.assert_array_equal(rebuilt.cost.W, example1.cost.W)
    np.testing.assert_array_equal(rebuilt.theta, example1.theta)
    assert rebuilt.name == "example1"


def test_model_section_checks_dimensions():
    with pytest.raises(ValueError):
        ModelSection.model_validate(
            {
                "n": 2,
                "d": [1.0, 1.0, 1.0],
                "lambda": [1.0, 1.0],
                "theta": [0.0, 0.0],
                "cost": {"c4": 1.0, "c3": -1.0, "W": [[1.0, 0.0], [0.0, 1.0]], "b": [1.0, 1.0]},
            }
        )
