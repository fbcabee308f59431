import numpy as np
import pytest

from wolffkit import QuadratureConfig, validate_params


@pytest.fixture
def pr213():
    """The workhorse tuple: p = 2, q = 1/2, alpha = 1, n = 3 (s = 1)."""
    return validate_params(2.0, 0.5, 1.0, 3)


@pytest.fixture
def cfg():
    return QuadratureConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_params(rng, n_choices=(3, 4, 5)):
    """A random admissible tuple with s > 0."""
    for _ in range(200):
        p = float(rng.uniform(1.3, 4.0))
        n = int(rng.choice(n_choices))
        alpha = float(rng.uniform(0.2, 0.95) * n / p)
        q = float(rng.uniform(0.1, 0.9) * (p - 1.0))
        if n - alpha * p > 1e-3:
            return validate_params(p, q, alpha, n)
    raise RuntimeError("could not draw admissible parameters")


def random_atomic(rng, n=3, k=10, radius=2.0, cell=None):
    """An atomic cloud carrying a cell size, the discrete surrogate of an
    absolutely continuous measure (cell=0 for a genuine atomic measure)."""
    from wolffkit import atomic
    pts = rng.uniform(-radius, radius, size=(k, n))
    w = rng.uniform(0.1, 1.0, k)
    if cell is None:
        cell = 2.0 * radius * k ** (-1.0 / n)
    return atomic(pts, w, cell_size=cell or None)
