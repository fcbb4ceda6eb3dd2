"""Free-space electromagnetic Green tensor and its radial scalars.

Unit convention used throughout the package: every length is measured in
units of the emitter's transition wavelength, so the transition wavenumber
is exactly 2*pi.  Rates are always reported normalized to the free-space
rate, which removes dipole moment, hbar and epsilon_0 from the code path.
"""

import numpy as np

# transition wavenumber in wavelength units
K_TRANSITION = 2.0 * np.pi


def scalar_a(q):
    """Radial scalar a(q) = 1/q + i/q^2 - 1/q^3 of the free-space tensor."""
    q = float(q)
    if q <= 0.0:
        raise ValueError(f"q must be positive, got {q}")
    q2 = q * q
    q3 = q2 * q
    return 1.0 / q + 1j / q2 - 1.0 / q3


def scalar_b(q):
    """Radial scalar b(q) = 1/q + 3i/q^2 - 3/q^3 of the free-space tensor."""
    q = float(q)
    if q <= 0.0:
        raise ValueError(f"q must be positive, got {q}")
    q2 = q * q
    q3 = q2 * q
    return 1.0 / q + 3j / q2 - 3.0 / q3


def vacuum_green(r, rp, k=K_TRANSITION):
    """Free-space Green tensor (k/4pi)(a I - b uu/u^2) e^{iq} at r != rp.

    The contact (delta-function) term is excluded; observation points must
    stay off the source.  Returns a symmetric (3, 3) complex array.
    """
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    u = r - rp
    dist = np.linalg.norm(u)
    if dist == 0.0:
        raise ValueError("vacuum_green requires distinct points")
    q = k * dist
    uhat = u / dist
    a = scalar_a(q)
    b = scalar_b(q)
    phase = np.exp(1j * q)
    return (k / (4.0 * np.pi)) * phase * (
        a * np.eye(3) - b * np.outer(uhat, uhat)
    )


def vacuum_green_imag_coincident(k=K_TRANSITION):
    """Imaginary part of the Green tensor at coincident points, (k/6pi) I.

    This is the q -> 0 limit of Im vacuum_green and pins the free-space
    rate normalization: contracting with any unit dipole gives k/6pi.
    """
    return (k / (6.0 * np.pi)) * np.eye(3)
