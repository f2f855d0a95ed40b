import numpy as np
import pytest

from coordcycle import JointState, ModelParams


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_params(rng, *, with_eta=False, r_range=(0.05, 8.0)) -> ModelParams:
    k = float(rng.uniform(0.1, 0.9))
    return ModelParams(
        r=float(rng.uniform(*r_range)),
        k=k,
        x_hat=0.5 * min(k, 1.0 - k),
        s=float(rng.uniform(0.2, 4.0)),
        eta=float(rng.uniform(0.02, 1.5)) if with_eta else None,
    )


def random_off_diagonal(rng, min_gap=0.02) -> JointState:
    x = float(rng.uniform(0.01, 0.99))
    gap = float(rng.uniform(min_gap, 0.8))
    side = 1.0 if rng.random() < 0.5 else -1.0
    return JointState(x, x - side * gap)
