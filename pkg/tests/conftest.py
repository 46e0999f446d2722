import numpy as np
import pytest

from rmnml import hyperbolic as hy
from rmnml.gaussian import Dataset, RgdParams, sample


def random_point(rng: np.random.Generator, dim: int, max_radius: float = 2.0) -> hy.LorentzPoint:
    """Uniform-direction point at a random radius, built through the exp map."""
    direction = rng.standard_normal(dim)
    direction /= np.linalg.norm(direction)
    r = rng.uniform(0.0, max_radius)
    vec = np.zeros(dim + 1)
    vec[1:] = r * direction
    return hy.exp_map(hy.origin(dim), hy.TangentVector(hy.origin(dim), vec))


def random_dataset(rng: np.random.Generator, dim: int, n: int,
                   sigma: float = 1.0, mu_radius: float = 1.0) -> Dataset:
    mu = random_point(rng, dim, mu_radius)
    return sample(n, RgdParams(mu, sigma), seed=int(rng.integers(2**32)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
