"""Relative equilibria of a single fully coupled population.

A relative equilibrium rotates rigidly, phi_k(t) = alpha_k + t * omega_star,
with alpha_1 = 0 pinned. It exists iff every oscillator has the same velocity
Y_k(alpha) = (1/n) sum_j g(alpha_k - alpha_j), where the sum includes the self
term g(0). The common value is omega_star = (1/n) sum_j g(-alpha_j).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coupling import BumpFunction, Coupling, FourierCoupling
from .dynamics import NetworkSpec, jacobian
from .permgroup import (PermGroup, isotropy_subgroup, make_group, setwise_symmetry_estimate)

TWO_PI = 2.0 * math.pi
EQUILIBRIUM_SCHEMA = "weakchimera.equilibrium/1"
STABILITY_MARGIN = 1e-6


class RefinementError(RuntimeError):
    pass


def velocities(g: Coupling, alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    d = alpha[:, None] - alpha[None, :]
    return np.asarray(g(d.ravel())).reshape(d.shape).mean(axis=1)


def residual(g: Coupling, alpha) -> np.ndarray:
    """Y_k(alpha) - Y_1(alpha) for k = 2..n; zero iff alpha is a relative equilibrium."""
    y = velocities(g, alpha)
    return y[1:] - y[0]


def omega_star(g: Coupling, alpha) -> float:
    alpha = np.asarray(alpha, dtype=float)
    return float(np.mean(g(-alpha)))


def _ordered(alpha: np.ndarray) -> bool:
    return bool(alpha[0] == 0.0 and np.all(np.diff(alpha) > 0) and alpha[-1] < TWO_PI)


@dataclass
class RelativeEquilibrium:
    alpha: np.ndarray
    omega_star: float
    residual: float
    eigenvalues: np.ndarray
    iterations: int = 0

    @property
    def n(self) -> int:
        return self.alpha.size

    def nonzero_eigenvalues(self) -> np.ndarray:
        """Spectrum minus the eigenvalue closest to 0 (the phase-shift direction)."""
        ev = self.eigenvalues
        return np.delete(ev, int(np.argmin(np.abs(ev))))

    @property
    def stable(self) -> bool:
        """All transverse eigenvalues have real part below -1e-6 (a numerical proxy)."""
        return bool(np.all(self.nonzero_eigenvalues().real < -STABILITY_MARGIN))

    def differences(self) -> np.ndarray:
        d = self.alpha[:, None] - self.alpha[None, :]
        return d[~np.eye(self.n, dtype=bool)]

    def to_dict(self) -> dict:
        return {
            "schema": EQUILIBRIUM_SCHEMA,
            "alpha": self.alpha.tolist(),
            "omega_star": self.omega_star,
            "residual": self.residual,
            "eigenvalues": [[float(e.real), float(e.imag)] for e in self.eigenvalues],
            "stable": self.stable,
            "stability_rule": f"nonzero eigenvalues with real part < -{STABILITY_MARGIN:g}",
            "iterations": self.iterations,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _residual_jacobian(spec: NetworkSpec, alpha: np.ndarray) -> np.ndarray:
    J = jacobian(spec, alpha)
    return (J[1:] - J[0])[:, 1:]


def build(g: Coupling, alpha) -> RelativeEquilibrium:
    alpha = np.asarray(alpha, dtype=float)
    spec = NetworkSpec.population(g, alpha.size)
    ev = np.linalg.eigvals(jacobian(spec, alpha))
    res = residual(g, alpha)
    return RelativeEquilibrium(alpha, omega_star(g, alpha), float(np.max(np.abs(res), initial=0.0)), ev)


def refine(g: Coupling, alpha0, tol: float = 1e-10, max_iter: int = 100,
           collision_tol: float = 1e-6) -> RelativeEquilibrium:
    """Damped Newton on alpha_2..alpha_n with alpha_1 = 0 pinned.

    Each step is halved until the residual norm drops and the ordering
    0 = alpha_1 < ... < alpha_n < 2pi survives. A limit in which two offsets
    merge (gap below ``collision_tol``) is a cluster state on the boundary of
    the ordered region and is reported as a failure.
    """
    alpha = np.asarray(alpha0, dtype=float) - float(alpha0[0])
    if not _ordered(alpha):
        raise RefinementError(f"seed offsets must satisfy 0 = a_1 < ... < a_n < 2pi, got {alpha}")
    spec = NetworkSpec.population(g, alpha.size)
    res = residual(g, alpha)
    norm = float(np.max(np.abs(res), initial=0.0))
    if not math.isfinite(norm):
        raise RefinementError("residual is not finite at the seed")
    it = 0
    while norm > tol:
        if it >= max_iter:
            raise RefinementError(f"no convergence in {max_iter} iterations (residual {norm:.3g})")
        it += 1
        Jr = _residual_jacobian(spec, alpha)
        try:
            step = np.linalg.solve(Jr, -res)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(Jr, -res, rcond=None)[0]
        lam = 1.0
        while True:
            trial = alpha.copy()
            trial[1:] += lam * step
            if _ordered(trial):
                r_try = residual(g, trial)
                n_try = float(np.max(np.abs(r_try)))
                if n_try < norm:
                    break
            lam *= 0.5
            if lam < 2.0**-30:
                raise RefinementError(f"line search failed at iteration {it} (residual {norm:.3g})")
        alpha, res, norm = trial, r_try, n_try
    gaps = np.diff(np.r_[alpha, TWO_PI])
    if gaps.min() < collision_tol:
        raise RefinementError(f"converged to a cluster state: offsets {alpha} have a gap of {gaps.min():.3g}")
    eq = build(g, alpha)
    eq.iterations = it
    return eq


# -- symmetry of the periodic orbit -----------------------------------------------

@dataclass(frozen=True)
class SymmetryCertificate:
    trivial: bool
    method: str
    group: PermGroup | None = None
    detail: str = ""


def trivial_symmetry_check(eq: RelativeEquilibrium, n_samples: int = 256,
                           tol: float = 1e-6) -> SymmetryCertificate:
    """Does the orbit of ``eq`` have only the identity as (instantaneous or
    setwise) symmetry in S_n?

    If the offsets span less than pi/2 this holds for structural reasons and
    the answer is immediate. Otherwise the sampled orbit is tested directly.
    """
    span = float(eq.alpha[-1] - eq.alpha[0])
    if span < math.pi / 2:
        return SymmetryCertificate(True, "analytic", detail=f"offset span {span:.6g} < pi/2")
    G = make_group("symmetric", eq.n)
    if eq.omega_star == 0.0:
        iso = isotropy_subgroup(G, np.mod(eq.alpha, TWO_PI), tol)
        return SymmetryCertificate(iso.order == 1, "isotropy", iso, "orbit is a single point")
    t = np.linspace(0.0, TWO_PI / abs(eq.omega_star), n_samples, endpoint=False)
    orbit = eq.alpha[None, :] + eq.omega_star * t[:, None]
    sigma = setwise_symmetry_estimate(G, orbit, tol)
    return SymmetryCertificate(sigma.order == 1, "numeric", sigma, f"{n_samples} orbit samples")


# -- designing a local perturbation ---------------------------------------------------

def design_local_perturbation(base: Coupling, alpha, bump: BumpFunction,
                              harmonics: Sequence[int] = tuple(range(6, 25, 2)),
                              slope: float = 2.0, reg: float = 1e-6,
                              window: float = 0.2) -> FourierCoupling:
    """Fourier modulator p such that alpha is a relative equilibrium of base + p * bump.

    The coefficients solve an equality-constrained regularized least-squares
    problem: the n - 1 equilibrium conditions hold exactly, while the slope of
    the new coupling is pulled toward ``-slope`` at positive differences and
    toward 0 at negative ones (only differences with |d| <= ``window``). With
    that sign pattern the linearization is close to lower triangular with a
    negative diagonal, which makes the equilibrium attracting.
    """
    alpha = np.asarray(alpha, dtype=float)
    n = alpha.size
    harm = np.asarray(harmonics, dtype=float)
    K = harm.size

    def basis(d):
        b, db = bump.value_and_deriv(d)
        c, s = np.cos(harm * d), np.sin(harm * d)
        val = np.r_[c * b, -s * b]
        der = np.r_[-harm * s * b + c * db, -harm * c * b - s * db]
        return val, der

    E, e = [], []
    for k in range(1, n):
        row = np.zeros(2 * K)
        r0 = 0.0
        for j in range(n):
            vk, _ = basis(alpha[k] - alpha[j])
            v1, _ = basis(alpha[0] - alpha[j])
            row += (vk - v1) / n
            r0 += (base(alpha[k] - alpha[j]) - base(alpha[0] - alpha[j])) / n
        E.append(row)
        e.append(-r0)
    S, s = [], []
    for k in range(n):
        for j in range(n):
            d = alpha[k] - alpha[j]
            if j == k or abs(d) > window:
                continue
            _, der = basis(d)
            S.append(der)
            s.append((-slope if d > 0 else 0.0) - base.deriv(d))
    E, e = np.array(E), np.array(e)
    S, s = np.array(S).reshape(-1, 2 * K), np.array(s)
    Q = S.T @ S + reg * np.eye(2 * K)
    kkt = np.block([[2 * Q, E.T], [E, np.zeros((n - 1, n - 1))]])
    coef = np.linalg.solve(kkt, np.r_[2 * S.T @ s, e])[:2 * K]
    A, B = coef[:K], coef[K:]
    # A cos(r phi) - B sin(r phi) = amp * cos(r phi + zeta)
    return FourierCoupling(tuple(zip(harm.astype(int), np.hypot(A, B), np.arctan2(B, A))))
