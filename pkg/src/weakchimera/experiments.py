"""Experiment drivers shared by the CLI, the scripts and the acceptance tests.

Initial conditions follow a fixed protocol:

* incoherent population: draw a seeded random point of the canonical region
  0 = phi_1 < ... < phi_n < 2pi, integrate ``bootstrap_horizon`` time units
  with the population coupling, and keep it if all pairwise differences over
  the last tenth of the run stay in [margin, 2pi - margin]; otherwise draw
  again (up to 20 draws).
* coherent population: the offsets ``coherent`` refined by Newton, or the raw
  offsets when refinement fails.
* product system: coherent offsets for population 1, the bootstrapped
  incoherent state (shifted by 1 rad) for population 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import (classify, default_burn_in, frequency_vector, order_parameter,
                       symmetry_class, symmetry_statistics, xi_set)
from .config import ExperimentConfig
from .coupling import Coupling
from .dynamics import NetworkSpec
from .equilibria import RefinementError, RelativeEquilibrium, refine
from .integrate import (IntegrationError, IntegratorConfig, LyapunovEstimate, Trajectory, integrate,
                        integrate_with_tangent, random_unit_vector)

TWO_PI = 2.0 * math.pi
MAX_BOOTSTRAP_TRIES = 20


class BootstrapError(RuntimeError):
    pass


@dataclass
class Bootstrap:
    state: np.ndarray
    tries: int
    seed: int
    tail: np.ndarray


def canonical_point(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.r_[0.0, np.sort(rng.uniform(0.0, TWO_PI, n - 1))]


def bootstrap_incoherent(g: Coupling, n: int = 4, seed: int = 0, horizon: float = 1000.0,
                         margin: float = 0.4, cfg: IntegratorConfig | None = None,
                         min_lyapunov: float | None = 0.02) -> Bootstrap:
    """A point on the incoherent attractor: random canonical draws until one settles.

    A draw is accepted when, over the last 10% of ``horizon``, every pairwise
    difference stays in [margin, 2pi - margin] and (unless ``min_lyapunov`` is
    None) the exponent estimated over the second half exceeds ``min_lyapunov``.
    The second test rejects coexisting regular attractors in the same region.
    """
    rng = np.random.default_rng(seed)
    spec = NetworkSpec.population(g, n)
    for attempt in range(1, MAX_BOOTSTRAP_TRIES + 1):
        x0 = canonical_point(rng, n)
        if min_lyapunov is None:
            traj = integrate(spec, x0, horizon, cfg)
        else:
            traj, lyap = integrate_with_tangent(spec, x0, random_unit_vector(n, rng), horizon, cfg)
            if not lyap.after(0.5 * horizon) > min_lyapunov:
                continue
        tail = traj.after(0.9 * horizon).states
        if xi_set(tail, pad=0.0).within(margin, TWO_PI - margin):
            state = traj.final_state - traj.final_state[0]
            return Bootstrap(state, attempt, seed, tail)
    raise BootstrapError(f"no draw of seed {seed} settled with pairwise differences in "
                         f"[{margin}, 2pi - {margin}] and exponent above {min_lyapunov} "
                         f"after {MAX_BOOTSTRAP_TRIES} tries")


def coherent_offsets(g: Coupling, seed_offsets) -> tuple[np.ndarray, RelativeEquilibrium | None, str]:
    """Refined offsets (or the raw seed) plus a note on what happened."""
    seed_offsets = np.asarray(seed_offsets, dtype=float)
    try:
        eq = refine(g, seed_offsets)
    except RefinementError as exc:
        return seed_offsets, None, f"refinement failed ({exc}); using seed offsets"
    if np.max(np.abs(eq.alpha - seed_offsets)) > 0.05:
        return seed_offsets, eq, "refinement left the seed's neighbourhood; using seed offsets"
    return eq.alpha, eq, "refined"


def product_initial_state(cfg: ExperimentConfig, g: Coupling | None = None, seed: int | None = None):
    g = g or cfg.coupling()
    seed = cfg.run.seed if seed is None else seed
    coh, eq, note = coherent_offsets(g, cfg.run.coherent)
    boot = bootstrap_incoherent(g, cfg.network.n, seed, cfg.run.bootstrap_horizon,
                                cfg.run.inc_margin, cfg.integrator, cfg.run.bootstrap_min_lyapunov)
    return np.r_[coh, boot.state + 1.0], {"coherent": note, "bootstrap_tries": boot.tries}


@dataclass
class RunResult:
    spec: NetworkSpec
    traj: Trajectory
    lyap: LyapunovEstimate | None
    burn_in: float
    meta: dict = field(default_factory=dict)

    @property
    def lambda_max(self) -> float:
        return self.lyap.after(self.burn_in) if self.lyap is not None else math.nan


def run(spec: NetworkSpec, x0, horizon: float, cfg: IntegratorConfig, lyapunov: bool = True,
        seed: int = 0, burn_in: float | None = None) -> RunResult:
    burn = default_burn_in(horizon) if burn_in is None else burn_in
    if lyapunov:
        v0 = random_unit_vector(spec.dim, np.random.default_rng(seed + 7919))
        traj, lyap = integrate_with_tangent(spec, x0, v0, horizon, cfg)
    else:
        traj, lyap = integrate(spec, x0, horizon, cfg), None
    return RunResult(spec, traj, lyap, burn)


SCAN_COLUMNS = ("eps", "status", "lambda_max", "S_1", "S_2", "Q_1", "Q_2",
                "omega_min_1", "omega_max_1", "omega_min_2", "omega_max_2",
                "bands_overlap", "class", "R_1_median", "R_2_median", "weak_chimera",
                "horizon", "steps", "error")


def summarize_product(res: RunResult, eps: float, cfg: ExperimentConfig) -> dict:
    a = cfg.analysis
    n = res.spec.n
    verdict = classify(res.traj, res.spec, tol=a.freq_tol, burn_in=res.burn_in)
    s1 = symmetry_statistics(res.traj, 0, n, res.burn_in, a.deadband)
    s2 = symmetry_statistics(res.traj, 1, n, res.burn_in, a.deadband)
    tail = res.traj.after(res.burn_in).states
    (lo1, hi1), (lo2, hi2) = verdict.bands
    return {
        "eps": eps, "status": "ok", "lambda_max": res.lambda_max,
        "S_1": s1.S, "S_2": s2.S, "Q_1": s1.Q, "Q_2": s2.Q,
        "omega_min_1": lo1, "omega_max_1": hi1, "omega_min_2": lo2, "omega_max_2": hi2,
        "bands_overlap": verdict.bands_overlap,
        "class": symmetry_class(s2.S, s2.Q, a.s_threshold),
        "R_1_median": float(np.median(order_parameter(tail, 0, n))),
        "R_2_median": float(np.median(order_parameter(tail, 1, n))),
        "weak_chimera": verdict.is_weak_chimera,
        "horizon": res.traj.horizon, "steps": res.traj.stats.get("steps", 0), "error": "",
    }


def scan_job(args) -> dict:
    """One epsilon of a scan; never raises (failures become a row)."""
    cfg, eps, x0 = args
    spec = NetworkSpec.product(cfg.coupling(), cfg.network.n, eps, cfg.network.omega)
    try:
        res = run(spec, x0, cfg.run.horizon, cfg.integrator, cfg.run.lyapunov, cfg.run.seed,
                  cfg.analysis.burn_in)
        return summarize_product(res, eps, cfg)
    except (IntegrationError, ValueError, FloatingPointError) as exc:
        row = {c: "" for c in SCAN_COLUMNS}
        row.update(eps=eps, status="failed", error=str(exc))
        return row


def population_frequencies(res: RunResult, burn_in: float | None = None):
    return frequency_vector(res.traj, res.spec, res.burn_in if burn_in is None else burn_in)
