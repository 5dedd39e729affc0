import numpy as np
import pytest

from pseur.data import ArraySpec, scenario_from_opt, synthesize
from pseur.utils import trial_rng
from pseur.utils.options import default_opt


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def spec():
    return ArraySpec(20)


@pytest.fixture
def example_scenario():
    """SOI at 10 deg (10 dB), interferers at -50 and 30 deg (30 dB)."""
    return scenario_from_opt(default_opt()['scenario'])


@pytest.fixture
def example_batch(example_scenario):
    return synthesize(example_scenario, 30, trial_rng(0, 0))


def random_hermitian(rng, size):
    mat = rng.standard_normal((size, size)) + \
        1j * rng.standard_normal((size, size))
    return 0.5 * (mat + mat.conj().T)


def random_orthonormal(rng, rows, cols):
    mat = rng.standard_normal((rows, cols)) + \
        1j * rng.standard_normal((rows, cols))
    q, _ = np.linalg.qr(mat)
    return q
