import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weakchimera.analysis import (IntervalSet, InfeasibleError, _arcs_meet, UndersampledError, classify,
                                  ergodic_average, frequency_vector, order_parameter, path_pad,
                                  separation_certificate, symmetry_class,
                                  symmetry_statistics, w_interval, winding_change, xi_set)
from weakchimera.coupling import COHERENT_SEED, FourierCoupling, g_chaos, offset_on_intervals, preset
from weakchimera.dynamics import NetworkSpec
from weakchimera.equilibria import omega_star
from weakchimera.integrate import IntegratorConfig, Trajectory, integrate
from weakchimera.permgroup import Permutation, make_group

TWO_PI = 2 * math.pi


# -- frequencies ------------------------------------------------------------------

def test_sync_frequency_is_g_of_zero():
    spec = NetworkSpec.population(g_chaos(), 4)
    traj = integrate(spec, np.full(4, 0.3), 200.0)
    fv = frequency_vector(traj, spec, burn_in=0.0)
    np.testing.assert_allclose(fv.omega, -5.806155637622828, atol=1e-10)
    np.testing.assert_allclose(fv.omega_field, fv.omega, atol=1e-10)


def test_two_oscillator_frequencies_vanish():
    spec = NetworkSpec.population(preset("neg_sin"), 2)
    traj = integrate(spec, [0.0, 1.0], 2000.0)
    fv = frequency_vector(traj, spec, burn_in=200.0)
    np.testing.assert_allclose(fv.omega, 0.0, atol=1e-12)


def test_relative_equilibrium_frequency():
    g = preset("g_hat_refit")
    spec = NetworkSpec.population(g, 4)
    traj = integrate(spec, np.asarray(COHERENT_SEED), 1000.0)
    fv = frequency_vector(traj, spec, burn_in=0.0)
    np.testing.assert_allclose(fv.omega, omega_star(g, COHERENT_SEED), atol=1e-8)
    assert fv.consistent


def test_burn_in_must_be_shorter_than_horizon():
    spec = NetworkSpec.population(g_chaos(), 3)
    traj = integrate(spec, [0.0, 1.0, 2.0], 10.0)
    with pytest.raises(ValueError):
        frequency_vector(traj, spec, burn_in=10.0)


def test_ergodic_average_constant_and_nonuniform_grid():
    t = np.array([0.0, 0.1, 0.5, 2.0, 3.0])
    traj = Trajectory(t, np.column_stack([t, 2 * t]), np.array([3.0, 6.0]))
    assert ergodic_average(traj, lambda x: np.full(len(x), 4.2)) == pytest.approx(4.2)
    # trapezoid on a linear function is exact: mean of t over [0, 3] is 1.5
    assert ergodic_average(traj, lambda x: x[:, 0]) == pytest.approx(1.5)


def test_ergodic_average_symmetric_cancellation():
    # repulsive sine coupling keeps the splay state, where opposite oscillators sit pi apart
    spec = NetworkSpec.population(FourierCoupling.sine(1.0), 4)
    splay = np.arange(4) * np.pi / 2
    traj = integrate(spec, splay, 100.0)
    avg = ergodic_average(traj, lambda x: np.sin(x[:, 2] - x[:, 0]))
    assert abs(avg) < 1e-10


# -- winding --------------------------------------------------------------------------

def test_winding_rotation_and_constant():
    t = np.linspace(0, 50, 5001)
    assert winding_change(np.exp(1j * 1.3 * t)) == pytest.approx(1.3 * 50, rel=1e-12)
    assert winding_change(np.full(10, 2 + 1j)) == 0.0


def test_winding_matches_lift():
    spec = NetworkSpec.population(g_chaos(), 4)
    traj = integrate(spec, [0.0, 0.9, 2.1, 4.0], 100.0, IntegratorConfig(record_dt=0.05))
    w = winding_change(np.exp(1j * traj.states))
    np.testing.assert_allclose(w, traj.states[-1] - traj.states[0], atol=1e-9)


def test_winding_undersampled():
    z = np.exp(1j * np.array([0.0, 3.0, 6.0]))
    with pytest.raises(UndersampledError):
        winding_change(z)


# -- arc sets ----------------------------------------------------------------------------

def test_xi_set_single_point():
    xi = xi_set(np.array([[0, np.pi / 2, np.pi, 3 * np.pi / 2]]))
    np.testing.assert_allclose(sorted(lo for lo, _ in xi.arcs), [np.pi / 2, np.pi, 3 * np.pi / 2])
    assert xi.measure() == pytest.approx(0.0, abs=1e-12)


def test_default_pad_covers_path_between_samples():
    # phi_2 - phi_1 moves 0.3 per sample, crossing 0 between the last two samples
    x = np.array([[0.0, 5.8], [0.0, 6.1], [0.0, 6.4]])
    assert path_pad(x) == pytest.approx(0.15)
    xi = xi_set(x)
    for d in np.linspace(5.8, 6.4, 25):
        assert xi.contains_point(d % TWO_PI)
    assert xi_set(x, pad=0.0).measure() == pytest.approx(0.0, abs=1e-12)


def test_xi_set_padding_merges_and_wraps():
    xi = IntervalSet.from_points([0.05, TWO_PI - 0.05, 3.0], pad=0.06)
    assert len(xi.arcs) == 2
    assert xi.contains_point(0.0) and xi.contains_point(3.05)
    assert not xi.contains_point(1.0)
    assert xi.within(-0.2, 3.2)
    assert not xi.within(0.0, 3.2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, TWO_PI, exclude_max=True), min_size=1, max_size=30), st.floats(0, 0.5))
def test_from_points_covers_points(points, pad):
    xi = IntervalSet.from_points(points, pad)
    assert all(xi.contains_point(p) for p in points)
    assert xi.measure() <= len(points) * 2 * pad + 1e-9 or xi.is_full()


def test_separation_examples():
    inc = IntervalSet.from_arcs([(0.4, TWO_PI - 0.4)])
    coh = IntervalSet.from_arcs([(-0.3, 0.3)])
    q_inc, q_coh = separation_certificate(inc, coh)
    assert q_inc.within(0.35, TWO_PI - 0.35) and not q_inc.within(0.4, TWO_PI - 0.4)
    assert q_coh.within(-0.33, 0.33)
    assert not q_inc.intersects(q_coh)
    assert separation_certificate(inc, inc) is None
    q1, q2 = separation_certificate(inc, IntervalSet())
    assert q2.is_empty() and q1.is_full()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, TWO_PI, exclude_max=True), min_size=2, max_size=12, unique=True), st.data())
def test_separation_certificate_properties(points, data):
    labels = data.draw(st.lists(st.booleans(), min_size=len(points), max_size=len(points)))
    a = IntervalSet.from_points([p for p, l in zip(points, labels) if l], 0.01)
    b = IntervalSet.from_points([p for p, l in zip(points, labels) if not l], 0.01)
    cert = separation_certificate(a, b)
    if a.intersects(b):
        assert cert is None
        return
    q1, q2 = cert
    assert not q1.intersects(q2)
    for arc in a.arcs:
        assert q1.contains_point(arc[0]) and q1.contains_point(arc[1])
    for arc in b.arcs:
        assert q2.contains_point(arc[0]) and q2.contains_point(arc[1])


# -- W intervals --------------------------------------------------------------------------

def test_w_interval_constant_coupling():
    w = w_interval(FourierCoupling.constant(1.7), IntervalSet.from_arcs([(1.8, 4.5)]), 3, budget=2000)
    assert w.lo == pytest.approx(1.7) and w.hi == pytest.approx(1.7)


def test_w_interval_two_oscillator_oracle():
    # Y = +-sin(psi)/2 with psi in (pi - 0.1, pi + 0.1): grid oracle
    psi = np.linspace(np.pi - 0.1, np.pi + 0.1, 100001)
    oracle = np.max(np.abs(np.sin(psi) / 2))
    assert oracle == pytest.approx(0.0499, abs=1e-4)
    w = w_interval(preset("neg_sin"), IntervalSet.from_arcs([(np.pi - 0.1, np.pi + 0.1)]), 2, budget=4000)
    assert w.lo == pytest.approx(-oracle, abs=1e-5)
    assert w.hi == pytest.approx(oracle, abs=1e-5)
    assert w.padded[0] <= w.lo and w.padded[1] >= w.hi


def test_w_interval_shift_without_zero_in_q():
    """With 0 outside Q the self term g(0) is not shifted: the law is a * (n-1)/n."""
    g = g_chaos()
    Q = IntervalSet.from_arcs([(1.8, 4.5)])
    a, n = 0.8, 3
    f = offset_on_intervals(g, [((1.8, 4.5), a)])
    w0 = w_interval(g, Q, n, budget=4000, rng=3)
    w1 = w_interval(f, Q, n, budget=4000, rng=3)
    assert w1.lo - w0.lo == pytest.approx(a * (n - 1) / n, abs=1e-9)
    assert w1.hi - w0.hi == pytest.approx(a * (n - 1) / n, abs=1e-9)


def test_w_interval_errors():
    with pytest.raises(ValueError):
        w_interval(g_chaos(), IntervalSet.full(), 3, budget=10)
    with pytest.raises(InfeasibleError):
        # three oscillators cannot have every pairwise difference in a short arc away from 0
        w_interval(g_chaos(), IntervalSet.from_arcs([(2.0, 2.1)]), 3, budget=2000)


# -- order parameter and statistics ------------------------------------------------------

def test_order_parameter_examples():
    assert order_parameter(np.full(4, 1.3)) == pytest.approx(1.0)
    assert order_parameter(np.arange(4) * np.pi / 2) == pytest.approx(0.0, abs=1e-15)
    r = order_parameter(np.array([0.0, 1.0, 2.5, 4.0]))
    assert 0 < r < 1
    x = np.r_[np.zeros(4), np.arange(4) * np.pi / 2]
    assert order_parameter(x, 0, 4) == pytest.approx(1.0)
    assert order_parameter(x, 1, 4) == pytest.approx(0.0, abs=1e-15)


def _synthetic(y1, y2, t):
    # phases with phi_3 - phi_1 = asin(y1), phi_4 - phi_2 = asin(y2)
    x = np.zeros((t.size, 4))
    x[:, 1] = 1.0
    x[:, 2] = np.arcsin(y1)
    x[:, 3] = 1.0 + np.arcsin(y2)
    return Trajectory(t, x, x[-1])


def test_symmetry_statistics_quadrants():
    t = np.linspace(0, 100, 1001)
    stats = symmetry_statistics(_synthetic(0.3 + 0.1 * np.sin(t), 0.5 * np.sin(t), t))
    assert stats.S >= 0.2
    assert stats.Q == 2
    stats = symmetry_statistics(_synthetic(0.3 + 0.1 * np.sin(t), np.full(t.size, 0.4), t))
    assert stats.Q == 1
    # grazing the axis inside the dead-band does not count
    stats = symmetry_statistics(_synthetic(0.3 + 0.0 * t, 0.4 + 0.4005 * np.sin(t) ** 2 * -1, t))
    assert stats.Q == 1


def test_symmetry_statistics_requires_four():
    t = np.linspace(0, 1, 3)
    with pytest.raises(ValueError):
        symmetry_statistics(Trajectory(t, np.zeros((3, 6)), np.zeros(6)), n=3)


@pytest.mark.parametrize("S,Q,cls", [(0.5, 1, "trivial"), (-0.2, 3, "uncertain"), (0.05, 1, "nontrivial"),
                                     (0.1, 4, "nontrivial")])
def test_symmetry_class_rule(S, Q, cls):
    assert symmetry_class(S, Q) == cls


# -- classification ------------------------------------------------------------------------

def _constant_coupling_run(row_weights, T=400.0):
    """dphi_k/dt = c * rowsum_k / n exactly: prescribed frequencies."""
    n = len(row_weights)
    H = np.zeros((n, n))
    H[np.arange(n), (np.arange(n) + 1) % n] = row_weights
    spec = NetworkSpec.general(FourierCoupling.constant(2.0), H)
    x0 = np.random.default_rng(0).uniform(0, TWO_PI, n)
    return spec, integrate(spec, x0, T)


def test_classify_weak_chimera():
    spec, traj = _constant_coupling_run([1, 1, 1, 1, 2, 2, 2, 2])
    v = classify(traj, spec, group=make_group("wreath_s2", 4))
    assert v.isotropy.order == 576
    assert v.is_weak_chimera
    assert v.chain_holds()
    assert v.label == "numerical omega-limit proxy"


def test_classify_not_weak_chimera():
    spec, traj = _constant_coupling_run([1] * 8)
    v = classify(traj, spec, group=make_group("wreath_s2", 4))
    assert v.isotropy.order == 1152 and not v.is_weak_chimera
    spec, traj = _constant_coupling_run([1, 2, 3, 4, 5, 6, 7, 8])
    v = classify(traj, spec, group=make_group("wreath_s2", 4))
    assert v.isotropy.order == 1 and not v.is_weak_chimera
    assert v.setwise.order == 1


def test_classify_equivariance():
    spec = NetworkSpec.population(g_chaos(), 4)
    traj = integrate(spec, np.array([0.0, 0.2, 0.2, 3.0]), 600.0)
    v = classify(traj, spec)
    gamma = Permutation((2, 0, 3, 1))
    moved = Trajectory(traj.times, gamma.act(traj.states), gamma.act(traj.final_state))
    w = classify(moved, spec)
    conj = v.isotropy.conjugate(gamma)
    assert w.isotropy.same_as(conj)


def test_classify_product_default_group_and_json():
    spec = NetworkSpec.product(g_chaos(), 3, 0.05)
    traj = integrate(spec, np.random.default_rng(4).uniform(0, TWO_PI, 6), 300.0)
    v = classify(traj, spec)
    assert v.group.order == 72
    d = v.to_dict()
    assert d["schema"] == "weakchimera.verdict/1"
    assert len(d["bands"]) == 2


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, TWO_PI, exclude_max=True), min_size=1, max_size=6), st.floats(0, 0.5),
       st.lists(st.floats(0, TWO_PI, exclude_max=True), min_size=1, max_size=6), st.floats(0, 0.5))
def test_intersects_matches_pairwise_rule(p1, r1, p2, r2):
    a, b = IntervalSet.from_points(p1, r1), IntervalSet.from_points(p2, r2)
    pairwise = any(_arcs_meet(lo1, hi1, lo2, hi2) for lo1, hi1 in a.arcs for lo2, hi2 in b.arcs)
    assert a.intersects(b) == pairwise == b.intersects(a)
