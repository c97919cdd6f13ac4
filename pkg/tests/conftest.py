import numpy as np
import pytest

from coarseqm.rng import stream


@pytest.fixture
def rng():
    return stream(20240817, "tests")


def random_hermitian(rng, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2.0


def line013():
    from coarseqm.metric import MetricSpace

    return MetricSpace(np.array([[0.0, 1.0, 3.0], [1.0, 0.0, 2.0], [3.0, 2.0, 0.0]]))
