"""Acceptance suite: one test per criterion, each printing a verdict line.

Run as ``pytest tests/test_acceptance.py -v -s``.  The heavyweight pieces
(the 1e8-sample Monte-Carlo cross-check and the edge-scan preset) put the
whole suite in the minutes range; everything else is seconds.
"""

import os

import numpy as np

from platedecay import (
    Box,
    EmitterConfig,
    K_TRANSITION,
    McSpec,
    PlateGeometry,
    QuadratureSpec,
    SlabConfig,
    decay_rate,
    fresnel_cs,
    integrate_box,
    mc_integrate,
    presets,
    run_scenario,
    slab_rate,
    slab_rate_linearized,
    spa_rate_parallel,
    spa_rate_parallel_infinite,
    vacuum_green,
    vacuum_green_imag_coincident,
)
from platedecay.backend import kernels
from platedecay.born import rate_prefactor
from platedecay.greens import scalar_a

from test_spa import fresnel_series_oracle

K = K_TRANSITION
CHI = 0.1 + 1e-8j
THREADS = min(4, os.cpu_count() or 1)


def _verdict(num, ok, text):
    print(f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, text


# 1 ------------------------------------------------------------------------

def test_criterion_01_vacuum_identity():
    geom = PlateGeometry(1.0, 1.0, 0.2)
    rates = {
        "born": decay_rate(geom, EmitterConfig((0, 0, 0.4), (1, 0, 0)), 0.0).rate,
        "slab": slab_rate(SlabConfig(1.0, 0.2, 0.4), "parallel").rate,
        "slab_linear": slab_rate_linearized(SlabConfig(1.0, 0.2, 0.4),
                                            "perpendicular").rate,
        "spa": spa_rate_parallel(2.0, geom, 0.0).rate,
        "spa_infinite": spa_rate_parallel_infinite(2.0, 0.2, 0.0).rate,
    }
    worst = max(abs(rate - 1.0) for rate in rates.values())
    _verdict(1, worst <= 1e-10,
             f"all methods return 1 for chi=0 (worst dev {worst:.1e})")


# 2 ------------------------------------------------------------------------

def test_criterion_02_normalization_anchor():
    target = vacuum_green_imag_coincident(K)
    worst = 0.0
    for direction in [(1, 0, 0), (0, 0, 1), (1, 1, 0), (1, 2, 3)]:
        d = 1e-4 * np.asarray(direction, float) / np.linalg.norm(direction)
        g = vacuum_green(d, (0, 0, 0), K)
        worst = max(worst, float(np.max(np.abs(g.imag - target))))
    _verdict(2, worst <= 1e-6,
             f"small-separation limit hits k/6pi (worst dev {worst:.1e})")


# 3 ------------------------------------------------------------------------

def test_criterion_03_monte_carlo_oracle_equivalence():
    geom = PlateGeometry(0.4, 0.4, 0.4)
    pos = np.ascontiguousarray([0.0, 0.0, 0.3])
    pref = rate_prefactor(K)
    details = []
    ok = True
    for axis, label in ((0, "parallel"), (2, "perpendicular")):
        def f(pts, axis=axis):
            return kernels.rate_integrand_batch(pts, pos, K, axis)

        cub, est, _ = integrate_box(f, geom.box, QuadratureSpec(),
                                    near_point=pos)
        mc, se = mc_integrate(f, geom.box, McSpec(samples=100_000_000,
                                                  seed=20260809))
        rate_cub = 1.0 + pref * (CHI * cub).imag
        rate_mc = 1.0 + pref * (CHI * mc).imag
        combined = pref * abs(CHI) * np.hypot(se, est)
        dev = abs(rate_cub - rate_mc)
        ok &= dev <= 3.0 * combined
        ok &= est <= 1e-5 * abs(cub)
        details.append(f"{label}: dev {dev:.2e} vs 3sigma {3 * combined:.2e}, "
                       f"cub err {est / abs(cub):.1e} rel")
    _verdict(3, ok, "; ".join(details))


# 4 ------------------------------------------------------------------------

def test_criterion_04_linearity_and_additivity():
    rng = np.random.default_rng(20260810)
    ok = True
    worst = 0.0
    for trial in range(5):
        sides = rng.uniform(0.3, 1.0, 3)
        geom = PlateGeometry(*sides)
        height = rng.uniform(0.2, 0.5)
        emitter = EmitterConfig((rng.uniform(-0.2, 0.2), 0.0, height),
                                (1, 0, 0) if trial % 2 else (0, 0, 1))
        axis = 0 if trial % 2 else 2

        base = decay_rate(geom, emitter, CHI)
        scaled = decay_rate(geom, emitter, 2.5 * CHI)
        tol = 10.0 * (base.error_estimate + scaled.error_estimate) + 2e-12
        dev = abs((scaled.rate - 1.0) - 2.5 * (base.rate - 1.0))
        ok &= dev <= tol
        worst = max(worst, dev)

        pos = np.ascontiguousarray(emitter.position)

        def f(pts):
            return kernels.rate_integrand_batch(pts, pos, K, axis)

        cut = rng.uniform(-0.2, 0.2) * sides[0]
        box = geom.box
        left, el, _ = integrate_box(
            f, Box(box.lo, (cut, box.hi[1], box.hi[2])), near_point=pos)
        right, er, _ = integrate_box(
            f, Box((cut, box.lo[1], box.lo[2]), box.hi), near_point=pos)
        pref = rate_prefactor(K)
        parts = pref * (CHI * (left + right)).imag
        tol = 10.0 * (base.error_estimate + pref * abs(CHI) * (el + er)) + 2e-12
        dev = abs((base.rate - 1.0) - parts)
        ok &= dev <= tol
        worst = max(worst, dev)
    _verdict(4, ok, f"chi-linearity and box-additivity on 5 random "
                    f"geometries (worst dev {worst:.1e})")


# 5 ------------------------------------------------------------------------

def test_criterion_05_plate_to_slab_convergence():
    geom = PlateGeometry(10.0, 10.0, 0.2)
    heights = np.linspace(0.2, 2.0, 20)
    ok = True
    details = []
    for dipole, orient in (((1, 0, 0), "parallel"), ((0, 0, 1), "perpendicular")):
        born = np.array([
            decay_rate(geom, EmitterConfig((0, 0, z), dipole), CHI).rate
            for z in heights
        ])
        slab = np.array([
            slab_rate_linearized(SlabConfig(1.0 + CHI, 0.2, z), orient).rate
            for z in heights
        ])
        # both curves oscillate through zero correction inside the window,
        # so deviations are measured against the sweep-scale correction
        scale = np.max(np.abs(slab - 1.0))
        dev = np.max(np.abs(born - slab)) / scale
        ok &= dev <= 0.10
        details.append(f"{orient}: {100 * dev:.1f}% of sweep scale")

    wide = PlateGeometry(40.0, 40.0, 0.2)
    for dipole, orient in (((1, 0, 0), "parallel"), ((0, 0, 1), "perpendicular")):
        born = decay_rate(wide, EmitterConfig((0, 0, 0.5), dipole), CHI).rate
        slab = slab_rate_linearized(SlabConfig(1.0 + CHI, 0.2, 0.5), orient).rate
        dev = abs(born - slab) / abs(slab - 1.0)
        ok &= dev <= 0.02
        details.append(f"40x40 {orient}: {100 * dev:.2f}%")
    _verdict(5, ok, "; ".join(details))


# 6 ------------------------------------------------------------------------

def test_criterion_06_infinite_slab_fails_for_small_plates():
    geom = PlateGeometry(0.2, 0.2, 0.2)
    ok = True
    details = []
    for dipole, orient in (((1, 0, 0), "parallel"), ((0, 0, 1), "perpendicular")):
        born = decay_rate(geom, EmitterConfig((0, 0, 0.3), dipole), CHI).rate
        slab = slab_rate(SlabConfig(1.0 + CHI, 0.2, 0.3), orient).rate
        frac = abs(born - slab) / abs(slab - 1.0)
        ok &= frac > 0.5
        details.append(f"{orient}: deviation {100 * frac:.0f}% of slab correction")
    _verdict(6, ok, "; ".join(details))


# 7 ------------------------------------------------------------------------

def _local_maxima(xs, ys):
    idx = [i for i in range(1, len(ys) - 1)
           if ys[i] >= ys[i - 1] and ys[i] >= ys[i + 1]]
    return np.asarray(xs)[idx], np.asarray(ys)[idx], idx


def test_criterion_07_thickness_oscillation_period():
    thicknesses = np.arange(0.3, 3.0001, 0.01)
    ok = True
    details = []
    curves = {
        "slab_linear": [
            slab_rate_linearized(SlabConfig(1.0 + CHI, d, 5.0), "parallel").rate
            for d in thicknesses
        ],
        "spa_infinite": [
            spa_rate_parallel_infinite(5.0, d, CHI).rate for d in thicknesses
        ],
    }
    for name, rates in curves.items():
        peaks, _, _ = _local_maxima(thicknesses, rates)
        spacing = np.diff(peaks)
        ok &= len(spacing) >= 3
        ok &= np.all(np.abs(spacing - 0.5) <= 0.05)
        details.append(f"{name}: spacings {np.round(spacing, 3).tolist()}")
    _verdict(7, ok, "; ".join(details))


# 8 ------------------------------------------------------------------------

def _detrended_peak_amplitudes(xs, ys, z_a):
    """Peak-to-adjacent-trough amplitudes with the known slow secular
    envelope |a^2(q) q| of the half-wavelength oscillation divided out."""
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    maxima = [i for i in range(1, len(ys) - 1)
              if ys[i] >= ys[i - 1] and ys[i] >= ys[i + 1]]
    minima = [i for i in range(1, len(ys) - 1)
              if ys[i] <= ys[i - 1] and ys[i] <= ys[i + 1]]
    amps = []
    for i in maxima:
        left = [j for j in minima if j < i]
        right = [j for j in minima if j > i]
        if not left or not right:
            continue
        swing = ys[i] - 0.5 * (ys[left[-1]] + ys[right[0]])
        q = K * (z_a + xs[i])
        envelope = abs(scalar_a(q) ** 2) * q
        amps.append(swing / envelope)
    return amps


def test_criterion_08_finite_plate_beating():
    thicknesses = np.arange(0.3, 3.0001, 0.01)
    z_a = 5.0
    finite = [
        spa_rate_parallel(z_a, PlateGeometry(10.0, 10.0, d), CHI).rate
        for d in thicknesses
    ]
    infinite = [
        spa_rate_parallel_infinite(z_a, d, CHI).rate for d in thicknesses
    ]
    amp_f = _detrended_peak_amplitudes(thicknesses, finite, z_a)
    amp_i = _detrended_peak_amplitudes(thicknesses, infinite, z_a)
    ratio_f = max(amp_f) / min(amp_f)
    ratio_i = max(amp_i) / min(amp_i)
    ok = ratio_f > 1.1 and ratio_i < 1.02
    _verdict(8, ok, f"finite-plate envelope modulation {ratio_f:.3f} (> 1.1), "
                    f"infinite-plate {ratio_i:.4f} (< 1.02)")


# 9 ------------------------------------------------------------------------

def _sign_changes(xs, ys, lo, hi):
    window = (xs >= lo) & (xs <= hi)
    slopes = np.sign(np.diff(ys[window]))
    slopes = slopes[slopes != 0]
    return int(np.sum(slopes[1:] != slopes[:-1]))


def _edge_excursion(xs, ys, edge=5.0):
    """Largest deviation right beside the edge from that side's plateau.

    The normal dipole's rate makes a large but monotonic step across the
    edge; referencing each side to its own plateau keeps the step out of
    the oscillation measure and leaves the genuine flanking excursions.
    """
    plateau_in = np.median(ys[(xs >= edge - 1.0) & (xs <= edge - 0.4)])
    plateau_out = np.median(ys[(xs >= edge + 0.4) & (xs <= edge + 1.0)])
    inner = (xs >= edge - 0.4) & (xs < edge)
    outer = (xs > edge) & (xs <= edge + 0.4)
    return max(
        float(np.max(np.abs(ys[inner] - plateau_in))),
        float(np.max(np.abs(ys[outer] - plateau_out))),
    )


def test_criterion_09_edge_behavior():
    pairs = [(sc, run_scenario(sc, threads=THREADS)) for sc in presets()["fig5"]]
    by_orient = {sc.orientation: rows for sc, rows in pairs}
    ok = True
    details = []
    excursions = {}
    for orient, rows in by_orient.items():
        xs = np.array([row.sweep_value for row in rows])
        ys = np.array([row.rate for row in rows])
        tail = abs(ys[-1] - 1.0)
        ok &= xs[-1] == 10.0 and tail < 0.01
        changes = _sign_changes(xs, ys, 4.0, 6.0)
        ok &= changes >= 3
        excursions[orient] = _edge_excursion(xs, ys)
        details.append(f"{orient}: far-field dev {tail:.1e}, "
                       f"{changes} derivative sign changes, "
                       f"edge excursion {excursions[orient]:.3f}")
    ok &= excursions["x"] > excursions["z"]
    details.append(f"parallel excursion exceeds normal: "
                   f"{excursions['x']:.3f} > {excursions['z']:.3f}")
    _verdict(9, ok, "; ".join(details))


# 10 -----------------------------------------------------------------------

def test_criterion_10_contraction_consistency():
    rng = np.random.default_rng(424242)
    worst = 0.0
    for trial in range(10):
        geom = PlateGeometry(*rng.uniform(0.3, 1.0, 3))
        dipole = (1, 0, 0) if trial % 2 else (0, 0, 1)
        emitter = EmitterConfig(
            (rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
             rng.uniform(0.2, 0.6)),
            dipole,
        )
        scalar = decay_rate(geom, emitter, CHI, route="scalar")
        tensor = decay_rate(geom, emitter, CHI, route="tensor")
        worst = max(worst,
                    abs(scalar.rate - tensor.rate) / abs(scalar.rate - 1.0))
    _verdict(10, worst <= 1e-10,
             f"scalar vs tensor assembly on 10 random configs "
             f"(worst rel dev {worst:.1e})")


# 11 -----------------------------------------------------------------------

def test_criterion_11_fresnel_special_function():
    worst = 0.0
    for x in np.linspace(0.0, 10.0, 41)[1:]:
        c_ref, s_ref = fresnel_series_oracle(x)
        pair = fresnel_cs(float(x))
        worst = max(worst, abs(pair.c - c_ref), abs(pair.s - s_ref))
    c1 = fresnel_cs(1.0).c
    ok = worst <= 1e-9 and abs(c1 - 0.7798934) < 5e-8
    _verdict(11, ok, f"series-oracle agreement on [0, 10] "
                     f"(worst dev {worst:.1e}); C(1) = {c1:.7f}")
