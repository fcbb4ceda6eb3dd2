"""Stationary-phase decay rates for surface-parallel dipoles.

Over a wide thin plate the lateral integrals of the rate integral are
dominated by the stationary point directly beneath the emitter.  Reducing
them there leaves a single depth integral,

    G_par/G_0 ~= 1 + (3 k^3 / 2 pi) Im{ chi int_0^{d_z} dz a^2(q_z)
                     e^{2 i q_z} L_x(z) L_y(z) },      q_z = k (z + z_A),

where L_x(z) = int_0^{d_x/2} exp(i k^2 x^2 / q_z) dx folds into Fresnel
integrals, L_x = sqrt(pi q_z / 2) / k * [C(w) + i S(w)] with
w = (d_x/2) k sqrt(2 / (pi q_z)).  For an arbitrarily wide plate
C, S -> 1/2 and the rate reduces to

    G_par/G_0 ~= 1 + (3 k / 16) Im{ chi int_0^{d_z} dz a^2(q_z) q_z
                     e^{2 i q_z} (1 + i)^2 }.

The approximation is paraxial; results carry a caveat flag when the
emitter sits closer than a wavelength.
"""

from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .born import RateResult, _as_susceptibility
from .errors import ConvergenceError
from .greens import K_TRANSITION, scalar_a

__all__ = [
    "FresnelPair",
    "fresnel_cs",
    "spa_rate_parallel",
    "spa_rate_parallel_infinite",
]

# series/continued-fraction crossover of fresnel_cs
_SERIES_LIMIT = 1.6

_QUAD_OPTS = dict(epsabs=1e-14, epsrel=1e-7, limit=400)

# emitter heights below this carry the paraxial-validity caveat flag
_NEAR_FIELD_LIMIT = 1.0


class FresnelPair(NamedTuple):
    """Fresnel cosine and sine integrals C(x), S(x)."""

    c: float
    s: float


def _fresnel_series(x):
    """Power series of C + iS; accurate and stable for |x| <= ~3."""
    w = 0.5 * np.pi * x * x
    w2 = w * w
    # C-series amplitude u_n = (-w^2)^n / (2n)!, S-series v_n with odd factorials
    u = 1.0
    v = w
    c = x
    s = x * w / 3.0
    n = 0
    while True:
        u *= -w2 / ((2 * n + 1) * (2 * n + 2))
        v *= -w2 / ((2 * n + 2) * (2 * n + 3))
        n += 1
        dc = x * u / (4 * n + 1)
        ds = x * v / (4 * n + 3)
        c += dc
        s += ds
        if abs(dc) + abs(ds) < 1e-17 * (abs(c) + abs(s)) or n > 60:
            return c, s


def _erfc_cf(z, max_iter=300):
    """sqrt(pi) e^{z^2} erfc(z) via the Lentz continued fraction (Re z > 0)."""
    tiny = 1e-280
    f = tiny
    c = f
    d = 0.0 + 0.0j
    for n in range(1, max_iter + 1):
        a = 1.0 if n == 1 else 0.5 * (n - 1)
        d = z + a * d
        if d == 0.0:
            d = tiny
        c = z + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return f
    return f


def fresnel_cs(x):
    """Fresnel integrals (C(x), S(x)) with the pi t^2 / 2 convention.

    Power series below |x| = 1.6, continued-fraction asymptotics of the
    complex error function beyond; both odd in x.
    """
    x = float(x)
    ax = abs(x)
    if ax <= _SERIES_LIMIT:
        c, s = _fresnel_series(ax)
    else:
        # C + iS = (1+i)/2 [1 - erfc(z)], z = sqrt(pi)/2 (1-i) x, and
        # e^{-z^2} = e^{i pi x^2 / 2} is a pure phase
        z = 0.5 * np.sqrt(np.pi) * (1.0 - 1.0j) * ax
        w = 0.5 * np.pi * ax * ax
        phase = complex(np.cos(w), np.sin(w))
        erfc = phase * _erfc_cf(z) / np.sqrt(np.pi)
        cs = 0.5 * (1.0 + 1.0j) * (1.0 - erfc)
        c, s = cs.real, cs.imag
    if x < 0.0:
        return FresnelPair(-c, -s)
    return FresnelPair(c, s)


def _lateral_factor(half_width, q_z, k):
    """L = int_0^{half_width} exp(i k^2 x^2 / q_z) dx via Fresnel integrals."""
    scale = np.sqrt(0.5 * np.pi * q_z) / k
    w = half_width / scale
    c, s = fresnel_cs(w)
    return scale * complex(c, s)


def _quad_checked(f, a, b, what):
    out = quad(f, a, b, full_output=1, **_QUAD_OPTS)
    if len(out) > 3:
        value, abserr, info, message = out[:4]
        if abserr > 1e-6:
            raise ConvergenceError(
                f"{what} integral did not converge: {message}",
                best=(value, abserr, info["neval"]),
            )
        return value, abserr, info["neval"]
    value, abserr, info = out
    return value, abserr, info["neval"]


def spa_rate_parallel(z_A, geom, chi, k=K_TRANSITION):
    """Stationary-phase parallel-dipole rate for a finite plate."""
    if z_A <= 0:
        raise ValueError("spa_rate_parallel requires z_A > 0")
    chi = _as_susceptibility(chi)
    result = RateResult(rate=1.0, error_estimate=0.0, evaluations=0)
    if z_A < _NEAR_FIELD_LIMIT:
        result.add_flag("spa_paraxial_caveat")
    if chi.beyond_linear_range:
        result.add_flag("chi_beyond_linear_range")
    if chi.chi == 0:
        return result

    half_x = geom.d_x / 2.0
    half_y = geom.d_y / 2.0

    def integrand(z):
        q_z = k * (z + z_A)
        amp = scalar_a(q_z) ** 2 * np.exp(2j * q_z)
        lat = _lateral_factor(half_x, q_z, k) * _lateral_factor(half_y, q_z, k)
        return (chi.chi * amp * lat).imag

    value, abserr, neval = _quad_checked(integrand, 0.0, geom.d_z, "lateral-folded")
    pref = 3.0 * k ** 3 / (2.0 * np.pi)
    result.rate = 1.0 + pref * value
    result.error_estimate = pref * abserr
    result.evaluations = neval
    return result


def spa_rate_parallel_infinite(z_A, d_z, chi, k=K_TRANSITION):
    """Stationary-phase parallel-dipole rate, laterally infinite plate."""
    if z_A <= 0:
        raise ValueError("spa_rate_parallel_infinite requires z_A > 0")
    if d_z <= 0:
        raise ValueError("plate thickness d_z must be positive")
    chi = _as_susceptibility(chi)
    result = RateResult(rate=1.0, error_estimate=0.0, evaluations=0)
    if z_A < _NEAR_FIELD_LIMIT:
        result.add_flag("spa_paraxial_caveat")
    if chi.beyond_linear_range:
        result.add_flag("chi_beyond_linear_range")
    if chi.chi == 0:
        return result

    corner = (1.0 + 1.0j) ** 2

    def integrand(z):
        q_z = k * (z + z_A)
        return (chi.chi * scalar_a(q_z) ** 2 * q_z * np.exp(2j * q_z) * corner).imag

    value, abserr, neval = _quad_checked(integrand, 0.0, d_z, "depth")
    pref = 3.0 * k / 16.0
    result.rate = 1.0 + pref * value
    result.error_estimate = pref * abserr
    result.evaluations = neval
    return result
