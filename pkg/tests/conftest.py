import numpy as np
import pytest


def random_spd(n: int, rng: np.random.Generator, jitter: float = 0.1) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return a @ a.T + jitter * np.eye(n)


def random_source_eigenvalues(
    n: int, rng: np.random.Generator, lo: float = 0.05, hi: float = 20.0
) -> np.ndarray:
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
