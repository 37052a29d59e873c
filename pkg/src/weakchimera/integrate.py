"""Adaptive integration of phase-oscillator networks.

A Dormand-Prince 5(4) pair with PI step control runs inside numba
(:func:`weakchimera.kernels.dopri_run`). States are recorded on a fixed
``record_dt`` grid through the pair's continuous extension, so memory stays
bounded on long runs. Optionally a tangent vector is carried along the
variational equation and renormalized every ``renorm_dt`` to estimate the
maximal Lyapunov exponent.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .dynamics import NetworkSpec


class IntegrationError(RuntimeError):
    def __init__(self, message: str, t_fail: float):
        super().__init__(f"{message} at t = {t_fail:.6g}")
        self.t_fail = t_fail


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-9
    atol: float = 1e-11
    max_step: float = 0.1
    record_dt: float = 0.1
    renorm_dt: float = 1.0
    first_step: float = 1e-3
    max_steps: int = 10**9

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_step <= 0 or self.record_dt <= 0 or self.renorm_dt <= 0:
            raise ValueError("max_step, record_dt and renorm_dt must be positive")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    final_state: np.ndarray
    stats: dict = field(default_factory=dict)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def after(self, t0: float) -> "Trajectory":
        """Samples with time >= t0."""
        i = int(np.searchsorted(self.times, t0 - 1e-12))
        return Trajectory(self.times[i:], self.states[i:], self.final_state, self.stats)

    def to_csv(self, path, digits: int = 15) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"phi_{k + 1}" for k in range(self.dim)])
            fmt = f"{{:.{digits}g}}"
            for t, row in zip(self.times, self.states):
                w.writerow([fmt.format(t)] + [fmt.format(v) for v in row])

    @classmethod
    def from_csv(cls, path) -> "Trajectory":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1:], data[-1, 1:].copy())


@dataclass
class LyapunovEstimate:
    renorm_times: np.ndarray
    log_growth: np.ndarray

    @property
    def running(self) -> np.ndarray:
        """lambda_max(t) = (1/t) * cumulative log growth."""
        return np.cumsum(self.log_growth) / self.renorm_times

    @property
    def final(self) -> float:
        return float(self.running[-1]) if self.log_growth.size else math.nan

    def after(self, t0: float) -> float:
        """Estimate from growth accumulated after ``t0`` only (transient discarded)."""
        mask = self.renorm_times > t0 + 1e-12
        if not mask.any():
            return math.nan
        dt = self.renorm_times[mask][-1] - (self.renorm_times[~mask][-1] if (~mask).any() else 0.0)
        return float(self.log_growth[mask].sum() / dt)


def _empty(shape):
    return np.zeros(shape)


def _run(kind, args, y0, n_state, tangent, T, cfg: IntegratorConfig):
    if T <= 0:
        raise ValueError(f"horizon must be positive, got {T}")
    out = kernels.dopri_run(
        kind, *args, np.ascontiguousarray(y0, dtype=float), n_state, tangent, float(T),
        cfg.rtol, cfg.atol, cfg.max_step, cfg.first_step, cfg.record_dt, cfg.renorm_dt, cfg.max_steps,
    )
    times, states, final, log_growth, status, t_end, n_steps, n_rej, n_lift, nfev = out
    if status == kernels.STATUS_UNDERFLOW:
        raise IntegrationError("step size underflow", t_end)
    if status == kernels.STATUS_MAX_STEPS:
        raise IntegrationError("step budget exhausted", t_end)
    stats = {"steps": int(n_steps), "rejected": int(n_rej), "lift_rejected": int(n_lift), "nfev": int(nfev)}
    traj = Trajectory(times, states, final[:n_state].copy(), stats)
    lyap = None
    if tangent:
        ren_t = cfg.renorm_dt * np.arange(1, log_growth.size + 1)
        lyap = LyapunovEstimate(ren_t, log_growth)
    return traj, lyap


def _network_args(spec: NetworkSpec):
    return spec.kernel_args + (_empty((0, 0)), _empty(0))


def _linear_args(A, b):
    omega, H, table = _empty(0), _empty((0, 0)), (_empty((5, 0)), _empty((5, 0)), _empty(2), _empty((4, 0)))
    return (omega, H, 1.0) + table + (np.ascontiguousarray(A, dtype=float), np.ascontiguousarray(b, dtype=float))


def integrate(spec: NetworkSpec, x0, T: float, cfg: IntegratorConfig | None = None) -> Trajectory:
    cfg = cfg or IntegratorConfig()
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (spec.dim,):
        raise ValueError(f"initial state must have shape ({spec.dim},)")
    return _run(kernels.KIND_NETWORK, _network_args(spec), x0, spec.dim, False, T, cfg)[0]


def integrate_with_tangent(spec: NetworkSpec, x0, v0, T: float, cfg: IntegratorConfig | None = None):
    cfg = cfg or IntegratorConfig()
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if x0.shape != (spec.dim,) or v0.shape != (spec.dim,):
        raise ValueError(f"state and tangent must have shape ({spec.dim},)")
    nv = np.linalg.norm(v0)
    if nv == 0:
        raise ValueError("tangent vector must be nonzero")
    y0 = np.concatenate([x0, v0 / nv])
    return _run(kernels.KIND_NETWORK, _network_args(spec), y0, spec.dim, True, T, cfg)


def integrate_linear(A, b, x0, T: float, cfg: IntegratorConfig | None = None, v0=None):
    """Same stepper on dx/dt = A x + b; used for oracle checks."""
    cfg = cfg or IntegratorConfig()
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    x0 = np.asarray(x0, dtype=float)
    if v0 is None:
        return _run(kernels.KIND_LINEAR, _linear_args(A, b), x0, n, False, T, cfg)[0]
    v0 = np.asarray(v0, dtype=float)
    y0 = np.concatenate([x0, v0 / np.linalg.norm(v0)])
    return _run(kernels.KIND_LINEAR, _linear_args(A, b), y0, n, True, T, cfg)


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)
