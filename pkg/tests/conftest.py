import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_proper_intervals(rng, class_count):
    """A random proper (non-empty) probability-interval system.

    Builds a base distribution and widens it, which guarantees
    sum(lowers) <= 1 <= sum(uppers).
    """
    base = rng.dirichlet(np.ones(class_count))
    widths = rng.uniform(0.0, 0.5, size=class_count)
    lowers = np.clip(base - widths, 0.0, 1.0)
    uppers = np.clip(base + widths, 0.0, 1.0)
    return lowers, uppers
