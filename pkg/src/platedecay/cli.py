"""Command-line interface: single rates, sweeps, presets, and a self test.

Subcommands:
    rate      one evaluation, printed as a one-row CSV
    sweep     run every scenario in a config file
    preset    run a named figure-reproduction preset
    selftest  fast invariant checks of the installed build

Output is CSV on stdout or ``--out``; exit status is nonzero on any hard
error.  ``--reproducible`` suppresses the timestamp comment so identical
inputs give byte-identical files.
"""

import argparse
import sys

import numpy as np

from . import __version__
from .backend import BACKEND_NAME
from .born import EmitterConfig, PlateGeometry, decay_rate
from .cubature import Box, McSpec, QuadratureSpec, integrate_box, mc_integrate
from .greens import K_TRANSITION, vacuum_green, vacuum_green_imag_coincident
from .scenarios import (
    SweepRow,
    evaluate_point,
    format_config,
    parse_config,
    presets,
    rows_to_csv,
    run_scenario,
    Scenario,
    CSV_COLUMNS,
)
from .slab import SlabConfig, slab_rate
from .spa import fresnel_cs


def _add_common(parser):
    parser.add_argument("--out", help="write CSV here instead of stdout")
    parser.add_argument("--tol", type=float, default=None,
                        help="relative cubature tolerance override")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker processes for sweep points")
    parser.add_argument("--reproducible", action="store_true",
                        help="omit the timestamp comment line")
    parser.add_argument("--seed", type=int, default=0,
                        help="Monte-Carlo oracle seed (selftest only)")


def _quad_from(args):
    if args.tol is None:
        return QuadratureSpec()
    return QuadratureSpec(rel_tol=args.tol)


def _emit(text, args):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _with_quadrature(scenarios, args):
    if args.tol is None:
        return scenarios
    quad = QuadratureSpec(rel_tol=args.tol)
    return [
        Scenario(
            name=sc.name, method=sc.method, geometry=sc.geometry, chi=sc.chi,
            orientation=sc.orientation, sweep=sc.sweep, emitter=sc.emitter,
            quadrature=quad,
        )
        for sc in scenarios
    ]


def _cmd_rate(args):
    geometry = PlateGeometry(args.d_x, args.d_y, args.d_z)
    position = (args.x_A, args.y_A, args.z_A)
    orientation = args.orientation
    if orientation not in ("x", "y", "z"):
        dipole = tuple(float(v) for v in orientation.split(","))
        label = "(" + ",".join(repr(v) for v in dipole) + ")"
    else:
        dipole = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}[orientation]
        label = orientation
    result = evaluate_point(
        args.method, geometry, position, dipole, complex(args.chi),
        _quad_from(args),
    )
    row = SweepRow(
        sweep_name="z_A",
        sweep_value=args.z_A,
        method=args.method,
        orientation=label,
        rate=result.rate,
        error_estimate=result.error_estimate,
        evaluations=result.evaluations,
        flag=result.flag,
    )
    lines = [",".join(CSV_COLUMNS)]
    lines.append(
        ",".join((row.sweep_name, repr(row.sweep_value), row.method,
                  f'"{row.orientation}"' if "," in row.orientation
                  else row.orientation,
                  repr(row.rate), repr(row.error_estimate),
                  str(row.evaluations), row.flag))
    )
    _emit("\n".join(lines) + "\n", args)
    return 0


def _cmd_sweep(args):
    with open(args.config) as fh:
        scenarios = parse_config(fh.read())
    scenarios = _with_quadrature(scenarios, args)
    pairs = [(sc, run_scenario(sc, threads=args.threads)) for sc in scenarios]
    _emit(rows_to_csv(pairs, reproducible=args.reproducible), args)
    return 0


def _cmd_preset(args):
    sets = presets()
    if args.name not in sets:
        print(f"unknown preset {args.name!r}; choose from {sorted(sets)}",
              file=sys.stderr)
        return 2
    scenarios = _with_quadrature(sets[args.name], args)
    if args.dump_config:
        _emit(format_config(scenarios), args)
        return 0
    pairs = [(sc, run_scenario(sc, threads=args.threads)) for sc in scenarios]
    _emit(rows_to_csv(pairs, reproducible=args.reproducible), args)
    return 0


def _cmd_selftest(args):
    checks = []

    def check(name, ok, detail=""):
        checks.append(ok)
        status = "pass" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        print(f"[{status}] {name}{suffix}")

    print(f"platedecay {__version__}, kernel backend: {BACKEND_NAME}")
    k = K_TRANSITION

    g = vacuum_green((0, 0, 1e-4), (0, 0, 0), k)
    anchor = np.max(np.abs(g.imag - vacuum_green_imag_coincident(k)))
    check("free-space normalization anchor", anchor < 1e-6, f"dev {anchor:.1e}")

    geom = PlateGeometry(0.6, 0.6, 0.3)
    emitter = EmitterConfig((0.1, -0.05, 0.4), (1, 0, 0))
    vac = decay_rate(geom, emitter, 0.0)
    check("vacuum rate is exactly one", vac.rate == 1.0)

    chi = 0.1 + 1e-8j
    scalar = decay_rate(geom, emitter, chi, route="scalar")
    tensor = decay_rate(geom, emitter, chi, route="tensor")
    dev = abs(scalar.rate - tensor.rate) / abs(scalar.rate - 1.0)
    check("scalar and tensor routes agree", dev < 1e-10, f"dev {dev:.1e}")

    slab_vac = slab_rate(SlabConfig(1.0, 0.2, 0.5), "parallel")
    check("slab rate at unit permittivity", slab_vac.rate == 1.0)

    pair = fresnel_cs(1.0)
    fres_dev = max(abs(pair.c - 0.7798934003768226),
                   abs(pair.s - 0.4382591473903548))
    check("Fresnel integrals at x=1", fres_dev < 1e-9, f"dev {fres_dev:.1e}")

    box = Box((-0.2, -0.2, -0.4), (0.2, 0.2, 0.0))
    from .backend import kernels

    pos = np.ascontiguousarray([0.0, 0.0, 0.3])

    def f(pts):
        return kernels.rate_integrand_batch(pts, pos, k, 0)

    spec = McSpec(samples=200_000, seed=args.seed)
    mc1, se = mc_integrate(f, box, spec)
    mc2, _ = mc_integrate(f, box, spec)
    check("Monte-Carlo determinism", mc1 == mc2)
    cub, est, _ = integrate_box(f, box, QuadratureSpec(), near_point=pos)
    dev = abs(cub - mc1)
    limit = 5.0 * np.hypot(se, est)
    check("cubature matches Monte-Carlo", dev < limit,
          f"dev {dev:.2e} < {limit:.2e}")

    ok = all(checks)
    print("selftest:", "ok" if ok else "FAILED")
    return 0 if ok else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="platedecay",
        description="Decay-rate modification near a rectangular dielectric plate",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_rate = sub.add_parser("rate", help="single rate evaluation")
    p_rate.add_argument("--method", default="born",
                        choices=["born", "slab", "slab_linear", "spa",
                                 "spa_infinite"])
    p_rate.add_argument("--d-x", type=float, default=10.0)
    p_rate.add_argument("--d-y", type=float, default=10.0)
    p_rate.add_argument("--d-z", type=float, default=0.2)
    p_rate.add_argument("--chi", default="0.1+1e-8j",
                        help="complex susceptibility, e.g. '0.1+1e-8j'")
    p_rate.add_argument("--orientation", default="x",
                        help="x, y, z, or 'dx,dy,dz'")
    p_rate.add_argument("--x-A", type=float, default=0.0)
    p_rate.add_argument("--y-A", type=float, default=0.0)
    p_rate.add_argument("--z-A", type=float, default=0.5)
    _add_common(p_rate)
    p_rate.set_defaults(func=_cmd_rate)

    p_sweep = sub.add_parser("sweep", help="run scenarios from a config file")
    p_sweep.add_argument("config")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_preset = sub.add_parser("preset", help="run a figure-reproduction preset")
    p_preset.add_argument("name",
                          choices=["fig2", "fig3", "fig4", "fig4_inset", "fig5"])
    p_preset.add_argument("--dump-config", action="store_true",
                          help="print the preset as a scenario file and exit")
    _add_common(p_preset)
    p_preset.set_defaults(func=_cmd_preset)

    p_self = sub.add_parser("selftest", help="fast invariant checks")
    _add_common(p_self)
    p_self.set_defaults(func=_cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
