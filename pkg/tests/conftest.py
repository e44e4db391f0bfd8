from pathlib import Path
import sys

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.modules.harness.examples import builtin_example  # noqa: E402
from src.modules.model.models import CostFunction, NetworkModel  # noqa: E402
from src.modules.trigger.service import build_trigger_config  # noqa: E402
from src.shared.enums import BuiltinExample  # noqa: E402

CONFIG_DIR = ROOT / "configs"


@pytest.fixture
def example1():
    return builtin_example(BuiltinExample.EXAMPLE1)


@pytest.fixture
def example2():
    return builtin_example(BuiltinExample.EXAMPLE2)


@pytest.fixture
def example2_trigger(example2):
    return build_trigger_config(example2, gamma=0.5, compulsory_period=3.0, allow_inadmissible_gamma=True)


@pytest.fixture
def scalar_model():
    """One neuron, no coupling: f(y) = y^4 - y^3 + y."""
    cost = CostFunction(c4=1.0, c3=-1.0, W=np.zeros((1, 1)), b=np.ones(1))
    return NetworkModel(d=np.array([1.0]), lam=np.array([1.0]), theta=np.array([0.5]), cost=cost, name="scalar")


@pytest.fixture
def decoupled_model():
    cost = CostFunction(c4=0.5, c3=-1.0, W=np.diag([1.0, 2.0, 0.5]), b=np.ones(3))
    return NetworkModel(d=np.array([1.0, 2.0, 0.5]), lam=np.ones(3), theta=np.array([1.0, -1.0, 0.5]), cost=cost, name="decoupled")
