import numpy as np
import pytest

from octo import exterior as ext
from octo import g2
from octo.pgroup import PGroupContext

DESK_PRIMES = [3, 5, 7, 11]


@pytest.fixture(params=DESK_PRIMES, ids=lambda p: f"p{p}")
def p(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def u(p):
    return ext.kernel_u(p)


@pytest.fixture
def ctx(p):
    return PGroupContext.build(p)


_SAMPLES = {}


def g2_samples(p, n, seed=2024):
    key = (p, seed)
    have = _SAMPLES.get(key, [])
    if len(have) < n:
        have = have + g2.sample_g2(seed, p, n - len(have), start=len(have))
        _SAMPLES[key] = have
    return have[:n]
