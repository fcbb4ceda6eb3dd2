"""Free-space Green tensor scalars and tensor values."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from platedecay import (
    K_TRANSITION,
    scalar_a,
    scalar_b,
    vacuum_green,
    vacuum_green_imag_coincident,
)

K = K_TRANSITION


def test_scalar_a_unit_argument():
    assert scalar_a(1.0) == pytest.approx(1j)


def test_scalar_a_large_argument():
    val = scalar_a(100.0)
    assert val.real == pytest.approx(0.01 - 1e-6)
    assert val.imag == pytest.approx(1e-4)


def test_scalar_a_leading_order():
    q = 1e6
    assert scalar_a(q) * q == pytest.approx(1.0, abs=2e-6)


def test_scalar_b_values():
    assert scalar_b(1.0) == pytest.approx(-2.0 + 3.0j)
    assert scalar_b(2.0) == pytest.approx(0.125 + 0.75j)


@given(st.floats(min_value=1e-3, max_value=1e3))
def test_b_minus_a_identity(q):
    expected = 2j / q**2 - 2.0 / q**3
    assert scalar_b(q) - scalar_a(q) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_scalar_domain_errors(bad):
    with pytest.raises(ValueError):
        scalar_a(bad)
    with pytest.raises(ValueError):
        scalar_b(bad)


def test_imaginary_parts_large_q():
    q = 1e3
    assert scalar_a(q).imag * q**2 == pytest.approx(1.0, rel=1e-3)
    assert scalar_b(q).imag * q**2 == pytest.approx(3.0, rel=1e-3)


def test_vacuum_green_axial_separation_diagonal():
    g = vacuum_green((0.0, 0.0, 0.7), (0.0, 0.0, 0.0), K)
    off = g - np.diag(np.diag(g))
    assert np.max(np.abs(off)) == 0.0


def test_vacuum_green_symmetry_and_reciprocity():
    rng = np.random.default_rng(7)
    for _ in range(20):
        r = rng.uniform(-1, 1, 3)
        rp = rng.uniform(-1, 1, 3)
        if np.linalg.norm(r - rp) < 1e-3:
            continue
        g = vacuum_green(r, rp, K)
        g_swap = vacuum_green(rp, r, K)
        scale = np.max(np.abs(g))
        assert np.max(np.abs(g - g.T)) <= 1e-12 * scale
        assert np.max(np.abs(g - g_swap.T)) <= 1e-12 * scale
        assert np.max(np.abs(g - g_swap)) <= 1e-12 * scale


def test_vacuum_green_trace_unit_separation():
    # independent evaluation: 3a - b = 2/q, so at q = 2pi the trace is
    # (k/4pi)(2/q) e^{2pi i} = 1/(2pi); frozen from an mpmath check
    g = vacuum_green((1.0, 0.0, 0.0), (0.0, 0.0, 0.0), K)
    trace = np.trace(g)
    assert trace.real == pytest.approx(0.159154943091895336, rel=1e-13)
    assert abs(trace.imag) < 1e-13


def test_vacuum_green_rejects_coincident_points():
    with pytest.raises(ValueError):
        vacuum_green((0.1, 0.2, 0.3), (0.1, 0.2, 0.3), K)


def test_coincident_imaginary_part_value():
    g = vacuum_green_imag_coincident(K)
    assert np.allclose(np.diag(g), 1.0 / 3.0, rtol=1e-14)
    assert np.max(np.abs(g - np.diag(np.diag(g)))) == 0.0


def test_coincident_limit_from_small_separation():
    target = vacuum_green_imag_coincident(K)
    for direction in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]:
        d = 1e-4 * np.asarray(direction, float) / np.linalg.norm(direction)
        g = vacuum_green(d, (0.0, 0.0, 0.0), K)
        assert np.max(np.abs(g.imag - target)) < 1e-6


def test_coincident_contraction_isotropy():
    rng = np.random.default_rng(11)
    g = vacuum_green_imag_coincident(K)
    for _ in range(5):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        assert d @ g @ d == pytest.approx(K / (6.0 * np.pi), rel=1e-14)
