"""First-order decay-rate integrands and assembled normalized rates.

The plate occupies x in [-d_x/2, d_x/2], y in [-d_y/2, d_y/2],
z in [-d_z, 0]; the coordinate origin sits at the center of its top
surface and the emitter must lie strictly outside.

Two equivalent integration routes are provided and cross-checked in the
tests: a cheap scalar integrand for axis-aligned dipoles, and the full
3x3 tensor integrand contracted with an arbitrary unit dipole.  The two
carry prefactors 3k^3/8pi and (6pi/k)(k^4/16pi^2) respectively, which are
identical.
"""

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .cubature import Box, QuadratureSpec, _integrate_box_vec, integrate_box
from .errors import ConvergenceError, GeometryError
from .greens import K_TRANSITION

__all__ = [
    "Susceptibility",
    "PlateGeometry",
    "EmitterConfig",
    "RateResult",
    "born1_tensor_integrand",
    "rate_integrand",
    "decay_rate",
]

# |chi| range where the linear expansion is trusted; larger values only flag
CHI_LINEAR_RANGE = 0.5

_AXES = {"parallel_x": 0, "parallel_y": 1, "perpendicular_z": 2}


@dataclass(frozen=True)
class Susceptibility:
    """Dielectric contrast chi = eps - 1 at the transition frequency."""

    chi: complex

    def __post_init__(self):
        chi = complex(self.chi)
        if not (np.isfinite(chi.real) and np.isfinite(chi.imag)):
            raise ValueError("susceptibility must be finite")
        if chi.imag < 0:
            raise ValueError("passive medium requires Im chi >= 0")
        object.__setattr__(self, "chi", chi)

    @property
    def beyond_linear_range(self):
        return abs(self.chi) > CHI_LINEAR_RANGE


@dataclass(frozen=True)
class PlateGeometry:
    """Rectangular plate extents, in wavelength units."""

    d_x: float
    d_y: float
    d_z: float

    def __post_init__(self):
        for name in ("d_x", "d_y", "d_z"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def box(self):
        return Box(
            lo=(-self.d_x / 2.0, -self.d_y / 2.0, -self.d_z),
            hi=(self.d_x / 2.0, self.d_y / 2.0, 0.0),
        )


@dataclass(frozen=True)
class EmitterConfig:
    """Emitter position and unit dipole orientation."""

    position: tuple
    dipole: tuple

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        dip = np.asarray(self.dipole, dtype=float)
        if pos.shape != (3,) or dip.shape != (3,):
            raise ValueError("position and dipole must be 3-vectors")
        if not np.all(np.isfinite(pos)):
            raise ValueError("position must be finite")
        norm = np.linalg.norm(dip)
        if not np.isfinite(norm) or norm == 0.0:
            raise ValueError("dipole must be a nonzero finite vector")
        object.__setattr__(self, "position", tuple(pos))
        object.__setattr__(self, "dipole", tuple(dip / norm))

    @property
    def axis(self):
        """0, 1 or 2 for an axis-aligned dipole, None otherwise."""
        dip = np.abs(self.dipole)
        i = int(np.argmax(dip))
        return i if dip[i] > 1.0 - 1e-12 else None


@dataclass
class RateResult:
    """Normalized rate with an a-posteriori error estimate and work count."""

    rate: float
    error_estimate: float
    evaluations: int
    flag: str = ""

    def add_flag(self, token):
        self.flag = token if not self.flag else f"{self.flag};{token}"


def _as_susceptibility(chi):
    return chi if isinstance(chi, Susceptibility) else Susceptibility(chi)


def rate_prefactor(k=K_TRANSITION):
    """Scalar-route prefactor 3k^3/8pi of the normalized rate integral."""
    return 3.0 * k ** 3 / (8.0 * np.pi)


def rate_integrand(s, r_A, k=K_TRANSITION, orientation="parallel_x"):
    """Pointwise rate integrand [a^2 + (b^2 - 2ab) w/u^2] e^{2iq}.

    ``w`` is (x - x_A)^2 for "parallel_x" and (z - z_A)^2 for
    "perpendicular_z".  Susceptibility and the 3k^3/8pi prefactor are the
    caller's business.
    """
    if orientation not in _AXES:
        raise ValueError(f"unknown orientation {orientation!r}")
    pts = np.ascontiguousarray(np.asarray(s, dtype=float).reshape(1, 3))
    r0 = np.ascontiguousarray(np.asarray(r_A, dtype=float))
    return complex(kernels.rate_integrand_batch(pts, r0, k, _AXES[orientation])[0])


def born1_tensor_integrand(s, r_A, k=K_TRANSITION, chi=0.0):
    """Pointwise tensor integrand of the equal-position first-order term.

    Returns (k^4 chi / 16 pi^2) [a^2 I + (b^2 - 2ab) uu/u^2] e^{2iq} as a
    symmetric (3, 3) complex array; integrating it over the plate volume
    gives the first-order correction to the equal-position Green tensor.
    """
    chi = _as_susceptibility(chi)
    pts = np.ascontiguousarray(np.asarray(s, dtype=float).reshape(1, 3))
    r0 = np.ascontiguousarray(np.asarray(r_A, dtype=float))
    raw = kernels.tensor_integrand_batch(pts, r0, k)[0].reshape(3, 3)
    return (k ** 4 * chi.chi / (16.0 * np.pi ** 2)) * raw


def _require_outside(box, position):
    lo = np.asarray(box.lo)
    hi = np.asarray(box.hi)
    pos = np.asarray(position)
    gap = np.maximum(np.maximum(lo - pos, pos - hi), 0.0)
    if float(np.sqrt(np.sum(gap * gap))) == 0.0:
        raise GeometryError(
            f"emitter at {tuple(pos)} lies inside or on the plate box"
        )


def decay_rate(geom, emitter, chi, quad=None, k=K_TRANSITION, route="auto"):
    """Normalized decay rate Gamma/Gamma_0 of an emitter beside the plate.

    ``route`` selects the integration path: "scalar" (axis-aligned dipoles
    only), "tensor" (any unit dipole), or "auto" which picks the scalar
    route when the dipole is axis-aligned.

    Raises GeometryError if the emitter touches the plate box, and
    ConvergenceError (with ``best`` holding the partial RateResult) if the
    cubature budget runs out.
    """
    chi = _as_susceptibility(chi)
    if quad is None:
        quad = QuadratureSpec()
    box = geom.box
    _require_outside(box, emitter.position)

    result = RateResult(rate=1.0, error_estimate=0.0, evaluations=0)
    if chi.beyond_linear_range:
        result.add_flag("chi_beyond_linear_range")
    if chi.chi == 0:
        return result

    pos = np.ascontiguousarray(np.asarray(emitter.position, dtype=float))
    axis = emitter.axis
    if route == "auto":
        route = "scalar" if axis is not None else "tensor"
    if route == "scalar" and axis is None:
        raise ValueError("scalar route requires an axis-aligned dipole")
    if route not in ("scalar", "tensor"):
        raise ValueError(f"unknown route {route!r}")

    try:
        if route == "scalar":
            def f(pts):
                return kernels.rate_integrand_batch(pts, pos, k, axis)

            value, estimate, evals = integrate_box(f, box, quad, near_point=pos)
            pref = rate_prefactor(k)
            result.rate = 1.0 + pref * (chi.chi * value).imag
            result.error_estimate = pref * abs(chi.chi) * estimate
            result.evaluations = evals
        else:
            def f(pts):
                return kernels.tensor_integrand_batch(pts, pos, k)

            value, estimate, evals = _integrate_box_vec(f, box, quad, m=9,
                                                        near_point=pos)
            g1 = (k ** 4 * chi.chi / (16.0 * np.pi ** 2)) * value.reshape(3, 3)
            dip = np.asarray(emitter.dipole)
            contraction = float(dip @ g1.imag @ dip)
            result.rate = 1.0 + (6.0 * np.pi / k) * contraction
            scale = (6.0 * np.pi / k) * (k ** 4 * abs(chi.chi) / (16.0 * np.pi ** 2))
            result.error_estimate = scale * estimate * float(np.sum(np.abs(dip)) ** 2)
            result.evaluations = evals
    except ConvergenceError as exc:
        value, estimate, evals = exc.best
        if route == "scalar":
            pref = rate_prefactor(k)
            result.rate = 1.0 + pref * (chi.chi * value).imag
            result.error_estimate = pref * abs(chi.chi) * estimate
        else:
            g1 = (k ** 4 * chi.chi / (16.0 * np.pi ** 2)) * value.reshape(3, 3)
            dip = np.asarray(emitter.dipole)
            result.rate = 1.0 + (6.0 * np.pi / k) * float(dip @ g1.imag @ dip)
            scale = (6.0 * np.pi / k) * (k ** 4 * abs(chi.chi) / (16.0 * np.pi ** 2))
            result.error_estimate = scale * estimate * float(np.sum(np.abs(dip)) ** 2)
        result.evaluations = evals
        result.add_flag("no_convergence")
        raise ConvergenceError(str(exc), best=result) from None

    return result
