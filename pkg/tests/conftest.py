import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile(
    "default", max_examples=60, deadline=None, derandomize=True
)
hypothesis.settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(0xD01F)


def random_cloud(rng, n=None, p=None, scale=1.0):
    """Random point cloud with generic (tie-free, w.h.p.) coordinates."""
    from knnph import PointCloud

    n = n if n is not None else int(rng.integers(2, 12))
    p = p if p is not None else int(rng.integers(1, 4))
    return PointCloud(rng.uniform(-scale, scale, size=(n, p)))


def random_rotation(rng, p):
    """Haar-ish random orthogonal matrix with determinant +1."""
    q, r = np.linalg.qr(rng.normal(size=(p, p)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
