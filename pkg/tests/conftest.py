import numpy as np
import pytest

from sphereadvect import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per available kernel implementation."""
    old = _backend.NAME
    _backend.use(request.param)
    yield request.param
    _backend.use(old)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_unit(rng, size=None):
    shape = (3,) if size is None else (size, 3)
    v = rng.normal(size=shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def great_circle(n, start=0.3, step=0.1, tilt=0.7):
    """``n`` equally spaced points on a tilted great circle."""
    axis_a = np.array([1.0, 0.0, 0.0])
    axis_b = np.array([0.0, np.cos(tilt), np.sin(tilt)])
    ang = start + step * np.arange(n)
    return np.cos(ang)[:, None] * axis_a + np.sin(ang)[:, None] * axis_b
