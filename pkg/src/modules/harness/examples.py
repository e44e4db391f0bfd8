"""Built-in network definitions."""

from __future__ import annotations

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

from src.core.config import settings
from src.core.exceptions import DomainError
from src.modules.model.models import CostFunction, NetworkModel
from src.shared.enums import BuiltinExample

EXAMPLE1_W = np.array(
    [
        [3.919, 3.948, 2.564, 3.204, 0.156],
        [-4.672, 6.491, -4.117, -1.371, -0.501],
        [4.011, 1.370, 5.727, 5.411, 1.185],
        [-1.983, 1.656, -8.428, 7.652, -7.694],
        [1.282, 2.135, 5.559, 0.659, 9.569],
    ]
)
EXAMPLE2_W = np.array(
    [
        [3.0, 2.5, 2.0],
        [2.0, 2.0, 3.0],
        [3.0, 2.0, 2.5],
    ]
)
SMALL_THETA_BOUND = 0.999e-3

EXAMPLE1_X0 = (0.728, -0.769, 1.770, -1.827, 0.315)
EXAMPLE2_X0 = (1.211, -0.772, -1.753)


def _alternating(n: int) -> np.ndarray:
    return np.array([1.0 if i % 2 == 0 else -1.0 for i in range(n)])


def _example1() -> NetworkModel:
    cost = CostFunction(c4=0.75, c3=-1.0, W=EXAMPLE1_W, b=np.ones(5))
    return NetworkModel(d=np.ones(5), lam=np.ones(5), theta=_alternating(5), cost=cost, name=BuiltinExample.EXAMPLE1.value)


def _example2(theta: np.ndarray, name: BuiltinExample) -> NetworkModel:
    cost = CostFunction(c4=0.5, c3=-1.0, W=EXAMPLE2_W, b=np.ones(3))
    return NetworkModel(d=np.ones(3), lam=np.ones(3), theta=theta, cost=cost, name=name.value)


def builtin_example(which: BuiltinExample | str, seed: int | None = None) -> NetworkModel:
    """Example networks; example2 uses theta=(1,-1,1) and D = Lambda = I3."""
    try:
        key = BuiltinExample(which)
    except ValueError as exc:
        raise DomainError(f"unknown example {which!r}") from exc
    if key is BuiltinExample.EXAMPLE1:
        return _example1()
    if key is BuiltinExample.EXAMPLE2:
        return _example2(_alternating(3), key)
    rng = Generator(PCG64(SeedSequence(settings.default_seed if seed is None else seed)))
    return _example2(rng.uniform(-SMALL_THETA_BOUND, SMALL_THETA_BOUND, size=3), key)


def example_defaults(which: BuiltinExample | str) -> dict[str, dict[str, object]]:
    """Trigger and experiment settings that accompany a built-in network."""
    key = BuiltinExample(which)
    gamma_grid = [round(0.10 + 0.05 * k, 2) for k in range(9)]
    if key is BuiltinExample.EXAMPLE1:
        return {
            "trigger": {"gamma": 0.3, "T": 0.03, "allow_inadmissible_gamma": True},
            "experiment": {"gamma_grid": gamma_grid, "runs": 50, "init_box": [[-2.0, 2.0]], "x0": list(EXAMPLE1_X0)},
        }
    if key is BuiltinExample.EXAMPLE2:
        return {
            "trigger": {"gamma": 0.5, "T": 3.0, "allow_inadmissible_gamma": True},
            "experiment": {
                "gamma_grid": [0.1, 0.2, 0.3, 0.4, 0.5],
                "runs": 50,
                "init_box": [[-2.0, 2.0]],
                "x0": list(EXAMPLE2_X0),
            },
        }
    return {
        "trigger": {"gamma": 0.5, "T": 3.0, "allow_inadmissible_gamma": True},
        "experiment": {
            "lambda_grid": [float(v) for v in np.logspace(-2, 2, 9)],
            "trials": 100,
            "init_box": [[-5.0, 5.0]],
        },
    }
