"""Compiled kernels against the NumPy fallback."""

import numpy as np
import pytest

from platedecay import _kernels_py

try:
    from platedecay import _kernels
except ImportError:
    _kernels = None

K = 2.0 * np.pi

needs_compiled = pytest.mark.skipif(
    _kernels is None, reason="compiled kernels not built"
)


def _sample_points(n=5000, seed=2):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-2.0, 2.0, (n, 3))
    pts[:, 2] -= 0.5  # keep clear of the reference emitter
    return np.ascontiguousarray(pts), np.ascontiguousarray([0.0, 0.0, 0.4])


@needs_compiled
@pytest.mark.parametrize("axis", [0, 1, 2])
def test_rate_kernel_agreement(axis):
    pts, r0 = _sample_points()
    a = _kernels.rate_integrand_batch(pts, r0, K, axis)
    b = _kernels_py.rate_integrand_batch(pts, r0, K, axis)
    scale = np.max(np.abs(b))
    assert np.max(np.abs(a - b)) <= 1e-13 * scale


@needs_compiled
def test_tensor_kernel_agreement():
    pts, r0 = _sample_points()
    a = _kernels.tensor_integrand_batch(pts, r0, K)
    b = _kernels_py.tensor_integrand_batch(pts, r0, K)
    scale = np.max(np.abs(b))
    assert np.max(np.abs(a - b)) <= 1e-13 * scale


@needs_compiled
def test_both_reject_coincident_points():
    pts = np.ascontiguousarray([[0.0, 0.0, 0.4], [0.1, 0.0, 0.0]])
    r0 = np.ascontiguousarray([0.0, 0.0, 0.4])
    for mod in (_kernels, _kernels_py):
        with pytest.raises(ValueError):
            mod.rate_integrand_batch(pts, r0, K, 0)
        with pytest.raises(ValueError):
            mod.tensor_integrand_batch(pts, r0, K)


def test_fallback_tensor_layout():
    pts, r0 = _sample_points(100)
    flat = _kernels_py.tensor_integrand_batch(pts, r0, K)
    assert flat.shape == (100, 9)
    tensors = flat.reshape(100, 3, 3)
    assert np.allclose(tensors, np.swapaxes(tensors, 1, 2), rtol=1e-14)


def test_backend_name_exposed():
    import platedecay

    assert platedecay.BACKEND_NAME in ("cython", "python")
