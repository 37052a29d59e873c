import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weakchimera.coupling import (ArcOffset, BumpFunction, CompositeCoupling, CouplingSpecError, FourierCoupling,
                                  G_CHAOS_TERMS, G_TILDE_TERMS, dumps, evaluate, evaluate_deriv, g_chaos,
                                  g_hat, g_tilde, loads, offset_on_intervals, preset)

TWO_PI = 2 * math.pi

# frozen from direct summation of the tabulated terms (see oracles below)
G_CHAOS_AT_0 = -5.806155637622828
G_TILDE_AT_0 = -4.0431455604103


def test_g_chaos_at_zero_matches_summation():
    eta1, eta2 = 0.138, 0.057511
    xi = (eta1, -eta1, eta1 + eta2, eta1 + eta2)
    c = (-2.0, -2.0, -1.0, -0.88)
    oracle = sum(ci * math.cos(x) for ci, x in zip(c, xi))
    assert oracle == pytest.approx(G_CHAOS_AT_0, abs=1e-14)
    assert evaluate(g_chaos(), 0.0) == pytest.approx(oracle, abs=1e-14)
    assert round(evaluate(g_chaos(), 0.0), 4) == -5.8062


def test_g_tilde_at_zero_matches_summation():
    oracle = sum(a * math.cos(z) for _, a, z in G_TILDE_TERMS)
    assert oracle == pytest.approx(G_TILDE_AT_0, abs=1e-12)
    assert g_tilde()(0.0) == pytest.approx(oracle, abs=1e-13)


def test_harmonic_content():
    assert g_chaos().harmonics() == [1, 2, 3, 4]
    assert g_tilde().harmonics() == list(range(6, 25, 2))
    assert len(G_CHAOS_TERMS) == 4


def test_bump_values():
    b = BumpFunction(2.5, 0.25)
    assert b(0.0) == pytest.approx(2.5 / math.e, abs=1e-15)
    assert round(b(0.0), 5) == 0.91970
    assert b(0.25) == 0.0 and b(-0.25) == 0.0
    assert b(TWO_PI - 0.1) == pytest.approx(b(-0.1), abs=1e-15)
    assert b(1.0) == 0.0


def test_bump_validation():
    with pytest.raises(CouplingSpecError):
        BumpFunction(1.0, 4.0)


def test_bump_derivatives_vanish_at_support_edge():
    b = BumpFunction(2.5, 0.25)
    h = 1e-4
    for edge, sign in ((0.25, -1), (-0.25, 1)):
        phi = edge + sign * 1e-3
        f = [b(phi + k * h) for k in (-2, -1, 0, 1, 2)]
        d1 = (f[3] - f[1]) / (2 * h)
        d2 = (f[3] - 2 * f[2] + f[1]) / h**2
        d3 = (f[4] - 2 * f[3] + 2 * f[1] - f[0]) / (2 * h**3)
        assert max(abs(d1), abs(d2), abs(d3)) < 1e-10


def test_g_hat_equals_g_away_from_zero():
    phi = np.linspace(0.25, TWO_PI - 0.25, 2001)
    np.testing.assert_array_equal(g_hat()(phi), g_chaos()(phi))


def test_g_hat_difference_supported_in_bump():
    phi = np.linspace(-np.pi, np.pi, 4001)
    diff = g_hat()(phi) - g_chaos()(phi)
    assert np.all(diff[np.abs(phi) >= 0.25] == 0.0)
    assert np.any(diff[np.abs(phi) < 0.2] != 0.0)


COUPLINGS = {
    "g_chaos": g_chaos(),
    "g_hat": g_hat(),
    "g_hat_refit": preset("g_hat_refit"),
    "offset": offset_on_intervals(g_chaos(), [((1.0, 2.0), 0.7), ((4.0, 4.5), -1.2)], 0.1),
}


@pytest.mark.parametrize("name", list(COUPLINGS))
def test_periodicity(name):
    f = COUPLINGS[name]
    phi = np.random.default_rng(0).uniform(-10, 10, 1000)
    a, b = f(phi), f(phi + TWO_PI)
    if name == "g_chaos":
        # reduction happens once inside the kernel; the two arguments reduce to nearby doubles
        assert np.max(np.abs(a - b)) <= 1e-13
    else:
        assert np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))) <= 1e-12


@pytest.mark.parametrize("name", list(COUPLINGS))
def test_derivative_matches_finite_differences(name):
    f = COUPLINGS[name]
    phi = np.random.default_rng(1).uniform(0, TWO_PI, 1000)
    h = 1e-6
    fd = (f(phi + h) - f(phi - h)) / (2 * h)
    d = evaluate_deriv(f, phi)
    scale = np.maximum(np.abs(d), 1.0)
    assert np.max(np.abs(fd - d) / scale) < 1e-6


def test_scalar_and_array_agree():
    f = g_hat()
    phi = np.array([0.0, 0.1, -0.2, 3.0])
    assert [f(p) for p in phi] == list(f(phi))
    assert isinstance(f(0.1), float)


def test_zero_offset_is_identity():
    f = offset_on_intervals(g_chaos(), [((1.0, 2.0), 0.0)])
    phi = np.linspace(0, TWO_PI, 777)
    np.testing.assert_array_equal(f(phi), g_chaos()(phi))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.05, 1.0), st.floats(-3, 3), st.floats(0.0, 1.0))
def test_offset_exact_inside_and_absent_outside(lo, width, a, u):
    blend = 0.05
    f = offset_on_intervals(g_chaos(), [((lo, lo + width), a)], blend)
    inside = lo + u * width
    assert f(inside) == pytest.approx(g_chaos()(inside) + a, abs=1e-12)
    outside = lo + width + blend + u * (TWO_PI - width - 2 * blend)
    assert f(outside) == pytest.approx(g_chaos()(outside), abs=1e-12)


def test_offset_arc_around_zero():
    f = offset_on_intervals(g_chaos(), [((-0.3, 0.3), 1.5)])
    assert f(0.0) == pytest.approx(G_CHAOS_AT_0 + 1.5, abs=1e-14)
    assert f(-0.29) == pytest.approx(g_chaos()(-0.29) + 1.5, abs=1e-14)
    assert f(1.0) == g_chaos()(1.0)


def test_overlapping_offsets_rejected():
    with pytest.raises(CouplingSpecError):
        offset_on_intervals(g_chaos(), [((1.0, 2.0), 1.0), ((2.05, 3.0), 1.0)], blend=0.05)
    with pytest.raises(CouplingSpecError):
        ArcOffset(2.0, 1.0, 1.0)


def test_text_roundtrip():
    f = offset_on_intervals(g_hat(), [((1.0, 2.0), 0.5)], 0.1)
    text = dumps(f)
    assert text.splitlines()[0].startswith("fourier 1 ")
    g = loads(text)
    phi = np.linspace(0, TWO_PI, 500)
    np.testing.assert_array_equal(g(phi), f(phi))


def test_text_preset_and_errors():
    g = loads("preset g_hat\noffset 1.0 2.0 0.5 0.05\n")
    assert g(1.5) == pytest.approx(g_hat()(1.5) + 0.5)
    with pytest.raises(CouplingSpecError, match="line 1"):
        loads("fourier one 2 3\n")
    with pytest.raises(CouplingSpecError):
        loads("wobble 1 2\n")
    with pytest.raises(CouplingSpecError):
        preset("nonexistent")


def test_harmonic_validation():
    with pytest.raises(CouplingSpecError):
        FourierCoupling(((1.5, 1.0, 0.0),))


def test_sine_helper():
    phi = np.linspace(0, TWO_PI, 50)
    np.testing.assert_allclose(FourierCoupling.sine(-1.0)(phi), -np.sin(phi), atol=1e-15)
    assert isinstance(CompositeCoupling(base=FourierCoupling.constant(2.0))(0.3), float)
