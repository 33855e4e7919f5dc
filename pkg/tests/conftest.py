import numpy as np
import pytest

from diskflow import catalog


@pytest.fixture(scope="session")
def builtins():
    return {name: catalog.builtin_semigroup(name)
            for name in catalog.BUILTIN_NAMES}


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def disk_points(rng, n, r_hi=0.8, r_lo=0.0):
    r = np.sqrt(rng.uniform(r_lo ** 2, r_hi ** 2, size=n))
    th = rng.uniform(-np.pi, np.pi, size=n)
    return [complex(a * np.cos(b), a * np.sin(b)) for a, b in zip(r, th)]
