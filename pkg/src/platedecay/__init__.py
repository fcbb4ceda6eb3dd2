"""Decay-rate modification of a dipole emitter near a rectangular plate."""

from .backend import BACKEND_NAME
from .born import (
    EmitterConfig,
    PlateGeometry,
    RateResult,
    Susceptibility,
    born1_tensor_integrand,
    decay_rate,
    rate_integrand,
)
from .cubature import Box, McSpec, QuadratureSpec, integrate_box, mc_integrate
from .errors import ConvergenceError, GeometryError
from .greens import (
    K_TRANSITION,
    scalar_a,
    scalar_b,
    vacuum_green,
    vacuum_green_imag_coincident,
)
from .scenarios import (
    Scenario,
    SweepRow,
    SweepSpec,
    evaluate_point,
    format_config,
    parse_config,
    presets,
    rows_to_csv,
    run_scenario,
    run_scenarios,
)
from .slab import (
    SlabConfig,
    fresnel_r,
    slab_rate,
    slab_rate_linearized,
    slab_reflection,
)
from .spa import (
    FresnelPair,
    fresnel_cs,
    spa_rate_parallel,
    spa_rate_parallel_infinite,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "Box",
    "ConvergenceError",
    "EmitterConfig",
    "FresnelPair",
    "GeometryError",
    "K_TRANSITION",
    "McSpec",
    "PlateGeometry",
    "QuadratureSpec",
    "RateResult",
    "Scenario",
    "SlabConfig",
    "Susceptibility",
    "SweepRow",
    "SweepSpec",
    "born1_tensor_integrand",
    "decay_rate",
    "evaluate_point",
    "format_config",
    "fresnel_cs",
    "fresnel_r",
    "integrate_box",
    "mc_integrate",
    "parse_config",
    "presets",
    "rate_integrand",
    "rows_to_csv",
    "run_scenario",
    "run_scenarios",
    "scalar_a",
    "scalar_b",
    "slab_rate",
    "slab_rate_linearized",
    "slab_reflection",
    "spa_rate_parallel",
    "spa_rate_parallel_infinite",
    "vacuum_green",
    "vacuum_green_imag_coincident",
    "__version__",
]
