"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every criterion that involves the coupling function is run with the verbatim
``g_hat`` preset. Criteria 2-5 are repeated with ``g_hat_refit`` and reported
as supplementary lines; those repeats are not substitutes for the originals.
A PASS/FAIL line per check is printed in the terminal summary.
"""

import itertools
import math

import numpy as np
import pytest

from weakchimera.analysis import (classify, frequency_vector, order_parameter, separation_certificate,
                                  symmetry_class, symmetry_statistics, w_interval, xi_set, IntervalSet)
from weakchimera.coupling import COHERENT_SEED, FourierCoupling, offset_on_intervals, preset
from weakchimera.dynamics import NetworkSpec
from weakchimera.equilibria import RefinementError, refine, trivial_symmetry_check
from weakchimera.experiments import bootstrap_incoherent, run
from weakchimera.integrate import IntegratorConfig, integrate, integrate_linear
from weakchimera.permgroup import (Permutation, isotropy_subgroup, make_group, self_resolution,
                                  setwise_symmetry_estimate, theta_set, young_subgroup)

pytestmark = pytest.mark.slow

TWO_PI = 2 * math.pi
HORIZON = 1e4
LONG_HORIZON = 2e5
SEEDS = range(5)
CFG = IntegratorConfig()
COUPLINGS = [
    pytest.param("g_hat", id="g_hat"),
    pytest.param("g_hat_refit", id="g_hat_refit-supplementary"),
]

_cache = {}
_verdicts = []


def _label(k, name):
    return f"C{k}" if name == "g_hat" else f"C{k} [supplementary, {name}]"


def cached(key, fn):
    if key not in _cache:
        _cache[key] = fn()
    return _cache[key]


def boot(seed):
    return cached(("boot", seed), lambda: bootstrap_incoherent(preset("g_hat"), 4, seed, 1000.0, 0.4, CFG))


def inc_run(seed):
    def go():
        spec = NetworkSpec.population(preset("g_hat"), 4)
        return run(spec, boot(seed).state, HORIZON, CFG, True, seed)
    return cached(("inc", seed), go)


def equilibrium(name):
    def go():
        try:
            return refine(preset(name), COHERENT_SEED)
        except RefinementError as exc:
            return exc
    return cached(("eq", name), go)


def coherent_samples(name):
    """Tail of a run started at the refined (or raw) coherent offsets."""
    def go():
        eq = equilibrium(name)
        start = eq.alpha if not isinstance(eq, Exception) else np.asarray(COHERENT_SEED)
        traj = integrate(NetworkSpec.population(preset(name), 4), start, 2000.0, CFG)
        return traj.after(1000.0).states
    return cached(("coh", name), go)


def product_initial(name, seed):
    eq = equilibrium(name)
    coh = eq.alpha if not isinstance(eq, Exception) else np.asarray(COHERENT_SEED)
    return np.r_[coh, boot(seed).state + 1.0]


def product_run(name, seed, eps=0.01, lyap=True, horizon=HORIZON):
    def go():
        spec = NetworkSpec.product(preset(name), 4, eps)
        return run(spec, product_initial(name, seed), horizon, CFG, lyap, seed)
    return cached(("prod", name, seed, eps, lyap, horizon), go)


def margin_ok(lams):
    lams = np.asarray(lams)
    return bool(lams.mean() > 0 and lams.mean() >= 3 * lams.std(ddof=1)), lams.mean(), lams.std(ddof=1)


# -- 1 ---------------------------------------------------------------------------

def test_c1_chaotic_incoherent_attractor(report):
    lams = [inc_run(s).lambda_max for s in SEEDS]
    ok_lam, mean, sd = margin_ok(lams)
    xi_ok = all(xi_set(inc_run(s).traj.after(inc_run(s).burn_in).states).within(0.35, TWO_PI - 0.35)
                for s in SEEDS)
    res = inc_run(0)
    tail = res.traj.after(res.burn_in).states
    tol = max(1e-3, 3 * self_resolution(tail))
    sigma = setwise_symmetry_estimate(make_group("symmetric", 4), tail, tol)
    _verdicts.append(classify(res.traj, res.spec, burn_in=res.burn_in))
    ok = ok_lam and xi_ok and sigma.order == 1
    report("C1 chaotic A_inc (n=4, T=1e4, 5 seeds)", ok,
           f"lambda mean {mean:.4f} sd {sd:.4f}; Xi in [0.35, 2pi-0.35]: {xi_ok}; |Sigma_est| = {sigma.order}")
    assert ok


# -- 2 ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", COUPLINGS)
def test_c2_relative_equilibrium(report, name):
    eq = equilibrium(name)
    if isinstance(eq, Exception):
        report(_label(2, name) + " relative equilibrium", False, f"Newton failed: {eq}")
        pytest.fail(str(eq))
    xi_ok = bool(np.all(np.abs(eq.differences()) <= 0.3))
    cert = trivial_symmetry_check(eq)
    traj = integrate(NetworkSpec.population(preset(name), 4), eq.alpha, 2000.0, CFG)
    fv = frequency_vector(traj, NetworkSpec.population(preset(name), 4), burn_in=0.0)
    freq_err = float(np.max(np.abs(fv.omega - eq.omega_star)))
    near = float(np.max(np.abs(eq.alpha - np.asarray(COHERENT_SEED))))
    ok = eq.residual <= 1e-10 and eq.stable and xi_ok and cert.trivial and cert.method == "analytic" \
        and freq_err <= 1e-6
    report(_label(2, name) + " relative equilibrium", ok,
           f"alpha {np.round(eq.alpha, 6).tolist()} (moved {near:.3g} from seed), residual {eq.residual:.2e}, "
           f"max Re(nonzero eig) {eq.nonzero_eigenvalues().real.max():.4g}, Xi in [-0.3,0.3]: {xi_ok}, "
           f"certificate {cert.method}/{cert.trivial}, |Omega - omega*| {freq_err:.2e}")
    assert ok


# -- 3 ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", COUPLINGS)
def test_c3_separation_certificate(report, name):
    res = inc_run(0)
    xi_inc = xi_set(res.traj.after(res.burn_in).states)
    xi_coh = xi_set(coherent_samples(name))
    cert = separation_certificate(xi_inc, xi_coh)
    ok = cert is not None and not cert[0].intersects(cert[1])
    detail = "no certificate" if cert is None else f"Q_inc {np.round(cert[0].to_list(), 3).tolist()}, " \
                                                   f"Q_coh {np.round(cert[1].to_list(), 3).tolist()}"
    report(_label(3, name) + " coupling-function separation", ok,
           detail + f"; measure of Xi(A_coh) {xi_coh.measure():.3f}")
    assert ok


# -- 4 ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", COUPLINGS)
def test_c4_weak_chimera(report, name):
    runs = [product_run(name, s) for s in SEEDS]
    ok_lam, mean, sd = margin_ok([r.lambda_max for r in runs])
    res = runs[0]
    v = classify(res.traj, res.spec, burn_in=res.burn_in)
    _verdicts.append(v)
    young = young_subgroup([range(4), range(4, 8)], 8)
    swap = Permutation(tuple(range(4, 8)) + tuple(range(4)))
    iso_ok = v.isotropy.order == 576 and swap not in v.isotropy and v.isotropy.is_subgroup_of(young)
    s2 = symmetry_statistics(res.traj, 1, 4, res.burn_in)
    tail = res.traj.after(res.burn_in).states
    r1 = float(np.median(order_parameter(tail, 0, 4)))
    r2 = float(np.median(order_parameter(tail, 1, 4)))
    checks = {
        "bands disjoint": v.bands_overlap is False,
        "|Gamma_Omega|=576 no swap": iso_ok,
        "weak chimera": v.is_weak_chimera,
        "|S2|>0.1": abs(s2.S) > 0.1,
        "Q2=1": s2.Q == 1,
        "lambda 3sd": ok_lam,
        "R1>R2": r1 > r2,
    }
    ok = all(checks.values())
    report(_label(4, name) + " weak chimera, eps=0.01", ok,
           f"bands {np.round(v.bands, 4).tolist()}, |Gamma_Omega| {v.isotropy.order}, S2 {s2.S:.3f}, "
           f"Q2 {s2.Q}, lambda mean {mean:.4f} sd {sd:.4f}, median R {r1:.3f}/{r2:.3f}; failed: "
           f"{[k for k, c in checks.items() if not c] or 'none'}")
    assert ok


# -- 5 ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", COUPLINGS)
def test_c5_scan_endpoints(report, name):
    expected = {0.01: "trivial", 0.1: "nontrivial"}
    classes = {}
    stats = {}
    for eps in (0.01, 0.1):
        res = product_run(name, 0, eps, lyap=(eps == 0.01))
        s2 = symmetry_statistics(res.traj, 1, 4, res.burn_in)
        classes[eps] = symmetry_class(s2.S, s2.Q)
        stats[eps] = (round(s2.S, 4), s2.Q)
        if eps == 0.1:
            _verdicts.append(classify(res.traj, res.spec, burn_in=res.burn_in))
        if classes[eps] != expected[eps]:
            # a disagreeing desk-horizon seed is decided by the long run
            long = product_run(name, 0, eps, lyap=False, horizon=LONG_HORIZON)
            s2 = symmetry_statistics(long.traj, 1, 4, long.burn_in)
            classes[eps] = symmetry_class(s2.S, s2.Q)
            stats[eps] = stats[eps] + ("T=2e5", round(s2.S, 4), s2.Q)
            _cache.pop(("prod", name, 0, eps, False, LONG_HORIZON))
    ok = classes == expected
    report(_label(5, name) + " scan endpoints", ok, f"classes {classes}, (S2, Q2) {stats}")
    assert ok


# -- 6 ---------------------------------------------------------------------------

def test_c6_frequency_definitions_agree(report):
    rng = np.random.default_rng(6)
    couplings = ["g_chaos", "g_hat", "g_hat_refit", "neg_sin"]
    worst = 0.0
    for i in range(20):
        g = preset(couplings[i % 4])
        T = 500.0
        if i % 5 == 4:
            spec = NetworkSpec.product(g, 4, float(rng.uniform(0, 0.2)))
        else:
            spec = NetworkSpec.population(g, int(rng.integers(2, 6)))
        x0 = rng.uniform(0, TWO_PI, spec.dim)
        traj = integrate(spec, x0, T, CFG)
        fv = frequency_vector(traj, spec, burn_in=50.0)
        worst = max(worst, fv.discrepancy / max(1e-6, 10.0 / fv.averaging_time))
    ok = worst <= 1.0
    report("C6 lift vs field-average frequency (20 runs)", ok, f"worst discrepancy / tolerance {worst:.2e}")
    assert ok


# -- 7 ---------------------------------------------------------------------------

def test_c7_integrator_oracles(report):
    spec = NetworkSpec.population(preset("neg_sin"), 2)
    worst = 0.0
    for psi0 in (0.3, 1.0, 2.0, 3.0):
        traj = integrate(spec, [0.0, psi0], 10.0, CFG)
        psi = traj.final_state[1] - traj.final_state[0]
        exact = 2 * math.atan(math.tan(psi0 / 2) * math.exp(-10.0))
        worst = max(worst, abs(psi - exact))
    _, lyap = integrate_linear(np.diag([-1.0, 2.0]), np.zeros(2), np.zeros(2), 100.0, CFG, v0=np.array([1.0, 1.0]))
    lam_err = abs(lyap.after(10.0) - 2.0)  # growth after a short transient
    ok = worst <= 1e-6 and lam_err <= 1e-3
    report("C7 integrator oracles", ok, f"closed form err {worst:.2e}, linear exponent err {lam_err:.2e}")
    assert ok


# -- 8 ---------------------------------------------------------------------------

def _exhaustive(elements, v, tol):
    return {p for p in elements if max(abs(v[p[k]] - v[k]) for k in range(len(v))) <= tol}


def test_c8_isotropy_matches_exhaustive_filtering(report):
    rng = np.random.default_rng(8)
    groups = [("symmetric", n) for n in range(2, 8)] + [("cyclic", n) for n in range(2, 9)] + \
             [("wreath_s2", n) for n in range(1, 5)]
    mismatches = 0
    for i in range(100):
        kind, n = groups[i % len(groups)]
        G = make_group(kind, n)
        deg = G.degree
        labels = rng.integers(0, max(1, deg // 2), deg)
        v = labels.astype(float) + rng.uniform(-1e-4, 1e-4, deg)
        tol = 1e-3
        got = {tuple(p.images) for p in isotropy_subgroup(G, v, tol).elements}
        full = [tuple(r) for r in G.table.tolist()]
        if got != _exhaustive(full, v, tol):
            mismatches += 1
        if kind == "symmetric":
            theta = {tuple(p.images) for p in theta_set(v, tol).elements}
            if theta != _exhaustive(list(itertools.permutations(range(deg))), v, tol):
                mismatches += 1
    ok = mismatches == 0
    report("C8 isotropy vs exhaustive filtering (100 vectors)", ok, f"{mismatches} mismatches")
    assert ok


# -- 10 ---------------------------------------------------------------------------

def test_c10_offset_shift_law(report):
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(10):
        terms = tuple((r, float(rng.normal()), float(rng.uniform(0, TWO_PI)))
                      for r in rng.choice(np.arange(1, 6), size=int(rng.integers(1, 4)), replace=False))
        g = FourierCoupling(terms)
        lo, hi = -float(rng.uniform(0.1, 0.8)), float(rng.uniform(0.1, 0.8))
        Q = IntervalSet.from_arcs([(lo, hi)])
        a = float(rng.uniform(-2, 2))
        n = int(rng.integers(2, 5))
        f = offset_on_intervals(g, [((lo, hi), a)])
        w0 = w_interval(g, Q, n, budget=4000, rng=1)
        w1 = w_interval(f, Q, n, budget=4000, rng=1)
        tol = max(w0.spread + w1.spread, 1e-9)
        err = max(abs(w1.lo - (w0.lo + a)), abs(w1.hi - (w0.hi + a)))
        worst = max(worst, err / tol)
    ok = worst <= 1.0
    report("C10 W-interval shift law (10 triples, 0 in Q)", ok, f"worst error / spread {worst:.2e}")
    assert ok


# -- 9 (last: inspects every verdict produced above) -----------------------------------

def test_c9_inclusion_chain(report):
    rng = np.random.default_rng(9)
    for i in range(5):
        spec = NetworkSpec.product(preset("g_chaos"), 3, 0.05 * i) if i % 2 else \
            NetworkSpec.population(preset("g_chaos"), 4)
        traj = integrate(spec, rng.uniform(0, TWO_PI, spec.dim), 400.0, CFG)
        _verdicts.append(classify(traj, spec))
    bad = 0
    for v in _verdicts:
        rows_ok = all(p in v.isotropy for p in v.setwise.elements) and all(p in v.group for p in v.isotropy.elements)
        if not (v.chain_holds() and rows_ok):
            bad += 1
    ok = bad == 0
    report("C9 inclusion chain Sigma_est <= Gamma_Omega <= Gamma", ok, f"{len(_verdicts)} verdicts, {bad} violations")
    assert ok
