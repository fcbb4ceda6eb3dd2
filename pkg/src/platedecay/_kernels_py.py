"""NumPy implementations of the hot integrand kernels.

Selected at import time when the compiled extension is unavailable (or when
``PLATEDECAY_BACKEND=python`` is set).  The compiled module in ``_kernels.pyx``
mirrors these functions one-to-one; keep any formula change synchronized.

All lengths are in units of the transition wavelength, so the wavenumber is
2*pi by default.  ``points`` is an (N, 3) float array of source positions,
``r0`` the emitter position.  The returned integrands carry neither the
susceptibility nor the rate prefactor; callers apply those after integrating.
"""

import numpy as np

BACKEND = "python"


def _ab_exp(points, r0, k):
    """Common factors: a(q), b(q), e^{2iq}, u components and u^2."""
    d = points - r0
    u2 = d[:, 0] ** 2 + d[:, 1] ** 2 + d[:, 2] ** 2
    if np.any(u2 == 0.0):
        raise ValueError("integrand evaluated at the emitter position")
    q = k * np.sqrt(u2)
    q2 = q * q
    q3 = q2 * q
    a = 1.0 / q + 1j / q2 - 1.0 / q3
    b = 1.0 / q + 3j / q2 - 3.0 / q3
    phase = np.cos(2.0 * q) + 1j * np.sin(2.0 * q)
    return d, u2, a, b, phase


def rate_integrand_batch(points, r0, k, axis):
    """Scalar decay-rate integrand [a^2 + (b^2 - 2ab) w/u^2] e^{2iq}.

    ``w`` is the squared separation component selected by ``axis`` (0 for a
    dipole along x, 1 for y, 2 for z).
    """
    d, u2, a, b, phase = _ab_exp(points, r0, k)
    w = d[:, axis] ** 2 / u2
    return (a * a + (b * b - 2.0 * a * b) * w) * phase


def tensor_integrand_batch(points, r0, k):
    """Tensor integrand [a^2 I + (b^2 - 2ab) uu/u^2] e^{2iq}, flattened.

    Returns an (N, 9) complex array in row-major (xx, xy, xz, yx, ...) order.
    """
    d, u2, a, b, phase = _ab_exp(points, r0, k)
    n = points.shape[0]
    out = np.empty((n, 9), dtype=np.complex128)
    diag = a * a * phase
    cross = (b * b - 2.0 * a * b) * phase / u2
    for i in range(3):
        for j in range(3):
            comp = cross * (d[:, i] * d[:, j])
            if i == j:
                comp = comp + diag
            out[:, 3 * i + j] = comp
    return out
