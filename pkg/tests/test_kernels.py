import numpy as np
import pytest

from slabmoments.kernels import _ref
from slabmoments.moment_core import default_quadrature, moments_of_density

_fast = pytest.importorskip("slabmoments.kernels._fast")


def sample(order, n, rng):
    quad = default_quadrature(order)
    U = np.empty((n, order + 1))
    for i in range(n):
        f = rng.uniform(0.05, 1.0, quad.nodes.size)
        U[i] = moments_of_density(f, quad, order)
    return U


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_backends_agree_interior(order):
    rng = np.random.default_rng(order)
    U = sample(order, 500, rng)
    ref = _ref.kershaw_next(U)
    fast = _fast.kershaw_next(U)
    assert np.max(np.abs(ref - fast)) <= 1e-13 * np.max(np.abs(ref))


def test_backends_agree_near_boundary():
    # N=1 boundary: phi1 -> 1
    U = np.array([[1.0, 1.0 - 1e-12], [1.0, -1.0 + 1e-12], [2.0, 0.0]])
    assert np.allclose(_ref.kershaw_next(U), _fast.kershaw_next(U),
                       atol=1e-14)
    # N=2 parabola boundary
    U2 = np.array([[1.0, 0.3, 0.09 + 1e-12], [1.0, 0.0, 1.0 - 1e-12]])
    assert np.allclose(_ref.kershaw_next(U2), _fast.kershaw_next(U2),
                       atol=1e-12)


def test_backend_selection_env(monkeypatch):
    import importlib

    import slabmoments.kernels as K

    monkeypatch.setenv("SLABMOMENTS_KERNELS", "python")
    mod = importlib.reload(K)
    assert mod.BACKEND == "python"
    monkeypatch.delenv("SLABMOMENTS_KERNELS")
    importlib.reload(K)


def test_scaling_invariance():
    rng = np.random.default_rng(5)
    U = sample(3, 50, rng)
    a = _ref.kershaw_next(U)
    b = _ref.kershaw_next(7.5 * U)
    assert np.allclose(7.5 * a, b, rtol=1e-12)
