"""Parameter sweeps, figure-reproduction presets, and CSV emission.

A Scenario bundles one method (finite-plate volume integral, infinite-slab
reference in full or chi-linearized form, or a stationary-phase variant)
with a geometry, susceptibility, dipole orientation and a one-axis sweep.
Scenario files are strict INI: one section per scenario, dotted key groups
for geometry/emitter/sweep/quadrature, and any unknown key is an error
(silent typos in physics parameters are the failure mode worth preventing).

Sweep points are independent; ``run_scenario`` may fan them out over a
process pool, but rows always come back ordered by sweep value, so the
output is identical however many workers run.
"""

import concurrent.futures
import configparser
import io
from dataclasses import dataclass, field

import numpy as np

from .born import (
    EmitterConfig,
    PlateGeometry,
    RateResult,
    Susceptibility,
    decay_rate,
)
from .cubature import QuadratureSpec
from .errors import ConvergenceError
from .slab import SlabConfig, slab_rate, slab_rate_linearized
from .spa import spa_rate_parallel, spa_rate_parallel_infinite

__all__ = [
    "Scenario",
    "SweepSpec",
    "SweepRow",
    "evaluate_point",
    "run_scenario",
    "run_scenarios",
    "presets",
    "parse_config",
    "format_config",
    "rows_to_csv",
]

METHODS = ("born", "slab", "slab_linear", "spa", "spa_infinite")
SWEEP_AXES = ("z_A", "d_z", "x_A")
_AXIS_DIPOLES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}

CSV_COLUMNS = (
    "sweep_name",
    "sweep_value",
    "method",
    "orientation",
    "rate",
    "error_estimate",
    "evaluations",
    "flag",
)


@dataclass(frozen=True)
class SweepSpec:
    """One swept quantity: emitter height, plate thickness or lateral offset."""

    axis: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if self.count < 2:
            raise ValueError("sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError("sweep start must be below stop")

    @property
    def values(self):
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class Scenario:
    """A fully specified sweep of one method over one axis."""

    name: str
    method: str
    geometry: PlateGeometry
    chi: complex
    orientation: object  # "x" | "y" | "z" | (dx, dy, dz)
    sweep: SweepSpec
    emitter: tuple = (0.0, 0.0, 0.5)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        Susceptibility(self.chi)  # validates
        if isinstance(self.orientation, str):
            if self.orientation not in _AXIS_DIPOLES:
                raise ValueError(f"unknown orientation {self.orientation!r}")
        else:
            vec = tuple(float(v) for v in self.orientation)
            if len(vec) != 3 or not any(vec):
                raise ValueError("vector orientation must be a nonzero 3-vector")
            object.__setattr__(self, "orientation", vec)
        emitter = tuple(float(v) for v in self.emitter)
        if len(emitter) != 3:
            raise ValueError("emitter must be a 3-vector")
        object.__setattr__(self, "emitter", emitter)
        object.__setattr__(self, "chi", complex(self.chi))
        if self.method.startswith("spa") and self._dipole()[2] != 0.0:
            raise ValueError(
                "stationary-phase methods cover surface-parallel dipoles only"
            )
        for value in self.sweep.values:
            self._check_point(value)

    def _dipole(self):
        if isinstance(self.orientation, str):
            return _AXIS_DIPOLES[self.orientation]
        return self.orientation

    def _point(self, value):
        """Geometry and emitter position at one sweep value."""
        geom = self.geometry
        pos = list(self.emitter)
        if self.sweep.axis == "z_A":
            pos[2] = value
        elif self.sweep.axis == "x_A":
            pos[0] = value
        else:
            geom = PlateGeometry(geom.d_x, geom.d_y, value)
        return geom, tuple(pos)

    def _check_point(self, value):
        geom, pos = self._point(value)
        box = geom.box
        gap = np.maximum(
            np.maximum(np.asarray(box.lo) - pos, np.asarray(pos) - np.asarray(box.hi)),
            0.0,
        )
        if float(np.max(gap)) <= 0.0:
            raise ValueError(
                f"sweep point {self.sweep.axis}={value} places the emitter "
                "inside or on the plate"
            )
        if self.method in ("slab", "slab_linear", "spa", "spa_infinite") and pos[2] <= 0:
            raise ValueError(f"method {self.method} requires emitter height z_A > 0")


@dataclass(frozen=True)
class SweepRow:
    sweep_name: str
    sweep_value: float
    method: str
    orientation: str
    rate: float
    error_estimate: float
    evaluations: int
    flag: str = ""


def _orientation_label(orientation):
    if isinstance(orientation, str):
        return orientation
    return "(" + ",".join(repr(float(v)) for v in orientation) + ")"


def evaluate_point(method, geometry, position, dipole, chi, quadrature=None):
    """One rate evaluation for any method; returns a RateResult.

    Convergence failures of the finite-plate integral come back flagged
    with the best available estimate rather than raising.
    """
    if method == "born":
        emitter = EmitterConfig(position, dipole)
        try:
            return decay_rate(geometry, emitter, chi, quad=quadrature)
        except ConvergenceError as exc:
            return exc.best
    if method in ("slab", "slab_linear"):
        rate_fn = slab_rate if method == "slab" else slab_rate_linearized
        config = SlabConfig(epsilon=1.0 + chi, thickness=geometry.d_z,
                            z_A=position[2])
        dx, dy, dz = dipole
        norm2 = dx * dx + dy * dy + dz * dz
        # the slab response is diagonal: weight parallel/perpendicular rates
        result = RateResult(rate=0.0, error_estimate=0.0, evaluations=0)
        for weight, orient in (((dx * dx + dy * dy) / norm2, "parallel"),
                               (dz * dz / norm2, "perpendicular")):
            if weight == 0.0:
                continue
            part = rate_fn(config, orient)
            result.rate += weight * part.rate
            result.error_estimate += weight * part.error_estimate
            result.evaluations += part.evaluations
            if part.flag:
                result.add_flag(part.flag)
        return result
    if method == "spa":
        return spa_rate_parallel(position[2], geometry, chi)
    if method == "spa_infinite":
        return spa_rate_parallel_infinite(position[2], geometry.d_z, chi)
    raise ValueError(f"method must be one of {METHODS}, got {method!r}")


def _eval_point(scenario, value):
    geom, pos = scenario._point(value)
    result = evaluate_point(
        scenario.method, geom, pos, scenario._dipole(), scenario.chi,
        scenario.quadrature,
    )
    return SweepRow(
        sweep_name=scenario.sweep.axis,
        sweep_value=float(value),
        method=scenario.method,
        orientation=_orientation_label(scenario.orientation),
        rate=result.rate,
        error_estimate=result.error_estimate,
        evaluations=result.evaluations,
        flag=result.flag,
    )


def run_scenario(scenario, threads=1):
    """Evaluate every sweep point; rows ordered by ascending sweep value.

    Per-point convergence failures are recorded in the row's flag column
    (with the best available rate) instead of aborting the sweep.
    """
    values = scenario.sweep.values
    if threads <= 1:
        return [_eval_point(scenario, v) for v in values]
    with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_eval_point, [scenario] * len(values), values))


def run_scenarios(scenarios, threads=1):
    """Run several scenarios; returns a list of (scenario, rows) pairs."""
    return [(sc, run_scenario(sc, threads=threads)) for sc in scenarios]


# --------------------------------------------------------------------------
# scenario file format: strict INI, one section per scenario
# --------------------------------------------------------------------------

_SCALAR_KEYS = {
    "method": str,
    "chi": complex,
    "orientation": None,  # handled specially
    "geometry.d_x": float,
    "geometry.d_y": float,
    "geometry.d_z": float,
    "emitter.x_A": float,
    "emitter.y_A": float,
    "emitter.z_A": float,
    "sweep.axis": str,
    "sweep.start": float,
    "sweep.stop": float,
    "sweep.count": int,
    "quadrature.rel_tol": float,
    "quadrature.abs_tol": float,
    "quadrature.max_depth": int,
    "quadrature.max_evaluations": int,
}


def _parse_orientation(text):
    text = text.strip()
    if text in _AXIS_DIPOLES:
        return text
    return tuple(float(p) for p in text.split(","))


def parse_config(text):
    """Parse a scenario file; unknown sections keys are hard errors."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser.read_string(text)
    scenarios = []
    for section in parser.sections():
        raw = dict(parser.items(section))
        unknown = set(raw) - set(_SCALAR_KEYS)
        if unknown:
            raise ValueError(
                f"unknown key(s) {sorted(unknown)} in scenario {section!r}"
            )
        missing = set(_SCALAR_KEYS) - set(raw)
        if missing:
            raise ValueError(
                f"missing key(s) {sorted(missing)} in scenario {section!r}"
            )
        values = {}
        for key, cast in _SCALAR_KEYS.items():
            if key == "orientation":
                values[key] = _parse_orientation(raw[key])
            else:
                values[key] = cast(raw[key])
        scenarios.append(
            Scenario(
                name=section,
                method=values["method"],
                geometry=PlateGeometry(
                    values["geometry.d_x"],
                    values["geometry.d_y"],
                    values["geometry.d_z"],
                ),
                chi=values["chi"],
                orientation=values["orientation"],
                sweep=SweepSpec(
                    axis=values["sweep.axis"],
                    start=values["sweep.start"],
                    stop=values["sweep.stop"],
                    count=values["sweep.count"],
                ),
                emitter=(
                    values["emitter.x_A"],
                    values["emitter.y_A"],
                    values["emitter.z_A"],
                ),
                quadrature=QuadratureSpec(
                    rel_tol=values["quadrature.rel_tol"],
                    abs_tol=values["quadrature.abs_tol"],
                    max_depth=values["quadrature.max_depth"],
                    max_evaluations=values["quadrature.max_evaluations"],
                ),
            )
        )
    return scenarios


def format_config(scenarios):
    """Serialize scenarios to the deterministic INI form parse_config reads."""
    out = io.StringIO()
    for sc in scenarios:
        out.write(f"[{sc.name}]\n")
        out.write(f"method = {sc.method}\n")
        out.write(f"chi = {sc.chi!r}\n")
        if isinstance(sc.orientation, str):
            out.write(f"orientation = {sc.orientation}\n")
        else:
            out.write(
                "orientation = " + ",".join(repr(v) for v in sc.orientation) + "\n"
            )
        g = sc.geometry
        out.write(f"geometry.d_x = {g.d_x!r}\n")
        out.write(f"geometry.d_y = {g.d_y!r}\n")
        out.write(f"geometry.d_z = {g.d_z!r}\n")
        out.write(f"emitter.x_A = {sc.emitter[0]!r}\n")
        out.write(f"emitter.y_A = {sc.emitter[1]!r}\n")
        out.write(f"emitter.z_A = {sc.emitter[2]!r}\n")
        out.write(f"sweep.axis = {sc.sweep.axis}\n")
        out.write(f"sweep.start = {sc.sweep.start!r}\n")
        out.write(f"sweep.stop = {sc.sweep.stop!r}\n")
        out.write(f"sweep.count = {sc.sweep.count}\n")
        q = sc.quadrature
        out.write(f"quadrature.rel_tol = {q.rel_tol!r}\n")
        out.write(f"quadrature.abs_tol = {q.abs_tol!r}\n")
        out.write(f"quadrature.max_depth = {q.max_depth}\n")
        out.write(f"quadrature.max_evaluations = {q.max_evaluations}\n")
        out.write("\n")
    return out.getvalue()


def rows_to_csv(pairs, reproducible=False, timestamp=None):
    """Render (scenario, rows) pairs as CSV with one comment line per block.

    The optional timestamp comment is suppressed under ``reproducible`` so
    identical inputs yield byte-identical files.
    """
    out = io.StringIO()
    if not reproducible:
        if timestamp is None:
            import datetime

            timestamp = datetime.datetime.now().isoformat(timespec="seconds")
        out.write(f"# generated: {timestamp}\n")
    out.write(",".join(CSV_COLUMNS) + "\n")
    for scenario, rows in pairs:
        out.write(f"# scenario: {scenario.name}\n")
        for row in rows:
            out.write(
                ",".join(
                    (
                        row.sweep_name,
                        repr(row.sweep_value),
                        row.method,
                        f'"{row.orientation}"'
                        if "," in row.orientation
                        else row.orientation,
                        repr(row.rate),
                        repr(row.error_estimate),
                        str(row.evaluations),
                        row.flag,
                    )
                )
                + "\n"
            )
    return out.getvalue()


# --------------------------------------------------------------------------
# figure-reproduction presets
# --------------------------------------------------------------------------

def _chi_tag(chi):
    real = chi.real
    return f"{real:g}"


def presets():
    """Ready-made scenario sets reproducing the reference parameter sweeps.

    Sweep ranges that the source figures leave implicit are fixed here:
    emitter-height sweeps cover z_A in [0.05, 2] with 80 points, thickness
    sweeps d_z in [0.05, 3] with 120 points, and the edge scan x_A in
    [0, 10] with 200 points.
    """
    z_sweep = SweepSpec("z_A", 0.05, 2.0, 80)
    d_sweep = SweepSpec("d_z", 0.05, 3.0, 120)
    x_sweep = SweepSpec("x_A", 0.0, 10.0, 200)
    thin10 = PlateGeometry(10.0, 10.0, 0.2)

    sets = {}

    # thin wide plate vs slab, two contrasts, two orientations
    fig2 = []
    for chi in (0.1 + 1e-8j, 0.5 + 1e-8j):
        for orient in ("x", "z"):
            for method in ("born", "slab", "slab_linear"):
                fig2.append(
                    Scenario(
                        name=f"fig2_{method}_{orient}_chi{_chi_tag(chi)}",
                        method=method,
                        geometry=thin10,
                        chi=chi,
                        orientation=orient,
                        sweep=z_sweep,
                        emitter=(0.0, 0.0, 0.5),
                    )
                )
    sets["fig2"] = fig2

    # shrinking lateral size at fixed thickness
    fig3 = []
    for orient in ("x", "z"):
        for lateral in (3.0, 0.4, 0.2):
            fig3.append(
                Scenario(
                    name=f"fig3_born_L{lateral:g}_{orient}",
                    method="born",
                    geometry=PlateGeometry(lateral, lateral, 0.2),
                    chi=0.1 + 1e-8j,
                    orientation=orient,
                    sweep=z_sweep,
                    emitter=(0.0, 0.0, 0.5),
                )
            )
        for method in ("slab", "slab_linear"):
            fig3.append(
                Scenario(
                    name=f"fig3_{method}_{orient}",
                    method=method,
                    geometry=thin10,
                    chi=0.1 + 1e-8j,
                    orientation=orient,
                    sweep=z_sweep,
                    emitter=(0.0, 0.0, 0.5),
                )
            )
    sets["fig3"] = fig3

    # thickness dependence at a near and a far emitter height
    fig4 = []
    for orient in ("x", "z"):
        for method in ("born", "slab", "slab_linear"):
            fig4.append(
                Scenario(
                    name=f"fig4_{method}_{orient}",
                    method=method,
                    geometry=thin10,
                    chi=0.1 + 1e-8j,
                    orientation=orient,
                    sweep=d_sweep,
                    emitter=(0.0, 0.0, 0.2),
                )
            )
    sets["fig4"] = fig4

    fig4_inset = []
    for method in ("slab_linear", "spa", "spa_infinite"):
        fig4_inset.append(
            Scenario(
                name=f"fig4_inset_{method}_x",
                method=method,
                geometry=thin10,
                chi=0.1 + 1e-8j,
                orientation="x",
                sweep=d_sweep,
                emitter=(0.0, 0.0, 5.0),
            )
        )
    sets["fig4_inset"] = fig4_inset

    # lateral edge scan just above the surface
    fig5 = []
    for orient in ("x", "z"):
        fig5.append(
            Scenario(
                name=f"fig5_born_{orient}",
                method="born",
                geometry=thin10,
                chi=0.5 + 1e-8j,
                orientation=orient,
                sweep=x_sweep,
                emitter=(0.0, 0.0, 0.01),
            )
        )
    sets["fig5"] = fig5

    return sets
