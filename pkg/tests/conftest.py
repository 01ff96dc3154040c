import numpy as np
import pytest

from esoclcp import LcpProblem, EsocDims, example_problem


@pytest.fixture
def example():
    return example_problem()


def random_problem(rng, k, l, scale=5.0):
    """Draw a random nonsingular problem at a chosen entry scale."""
    m = k + l
    for _ in range(100):
        T = rng.uniform(-scale, scale, (m, m))
        r = rng.uniform(-scale, scale, m)
        try:
            return LcpProblem(EsocDims(k, l), T, r)
        except Exception:
            continue
    raise RuntimeError("could not draw a nonsingular problem")
