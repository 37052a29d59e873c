"""Phase-oscillator vector fields.

All three network modes share one kernel,

    dphi_k/dt = omega_k + (1/n) sum_j H_kj g(phi_k - phi_j),

where ``n`` is the population size:

* ``general``    -- user supplied n x n weights ``H``
* ``population`` -- ``H`` all ones (fully symmetric, S_n-equivariant)
* ``product``    -- two populations of n, ``H = [[1, eps], [eps, 1]]`` blockwise

States are lifted phases in R^N; the reduction mod 2pi happens inside ``g``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .coupling import Coupling, as_composite

MODES = ("general", "population", "product")


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class NetworkSpec:
    mode: str
    n: int
    g: Coupling
    eps: float = 0.0
    omega: float = 0.0
    H: np.ndarray | None = dataclasses.field(default=None, compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.eps < 0:
            raise ValueError(f"inter-population strength must be >= 0, got {self.eps}")
        if self.mode == "general":
            if self.H is None:
                raise ValueError("general mode needs an adjacency matrix H")
            H = np.asarray(self.H, dtype=float)
            if H.shape != (self.n, self.n):
                raise DimensionError(f"H must be {self.n}x{self.n}, got {H.shape}")
            object.__setattr__(self, "H", H)

    @classmethod
    def population(cls, g: Coupling, n: int, omega: float = 0.0) -> "NetworkSpec":
        return cls("population", n, g, omega=omega)

    @classmethod
    def product(cls, g: Coupling, n: int, eps: float, omega: float = 0.0) -> "NetworkSpec":
        return cls("product", n, g, eps=eps, omega=omega)

    @classmethod
    def general(cls, g: Coupling, H, omega: float = 0.0) -> "NetworkSpec":
        H = np.asarray(H, dtype=float)
        return cls("general", H.shape[0], g, omega=omega, H=H)

    @property
    def dim(self) -> int:
        return 2 * self.n if self.mode == "product" else self.n

    @property
    def n_populations(self) -> int:
        return 2 if self.mode == "product" else 1

    @cached_property
    def weights(self) -> np.ndarray:
        if self.mode == "general":
            return self.H
        if self.mode == "population":
            return np.ones((self.n, self.n))
        block = np.ones((self.n, self.n))
        return np.block([[block, self.eps * block], [self.eps * block, block]])

    @cached_property
    def kernel_args(self):
        """(omega vector, H, 1/n, *coupling table) for the compiled kernels."""
        table = as_composite(self.g).table()
        omega = np.full(self.dim, float(self.omega))
        return (omega, np.ascontiguousarray(self.weights), 1.0 / self.n) + tuple(np.ascontiguousarray(t) for t in table)

    def populations(self) -> list[np.ndarray]:
        """Index arrays of each population."""
        return [np.arange(p * self.n, (p + 1) * self.n) for p in range(self.n_populations)]


def _check(spec: NetworkSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dim,):
        raise DimensionError(f"state must have shape ({spec.dim},), got {x.shape}")
    return x


def field(spec: NetworkSpec, x) -> np.ndarray:
    """Velocity vector at lifted state ``x``."""
    x = _check(spec, x)
    out = np.empty(spec.dim)
    kernels.network_rhs(x, spec.dim, False, *spec.kernel_args, out)
    return out


def jacobian(spec: NetworkSpec, x) -> np.ndarray:
    x = _check(spec, x)
    omega, H, inv_n, *table = spec.kernel_args
    return kernels.network_jacobian(x, omega, H, inv_n, *table)


def complex_frequency_observable(spec: NetworkSpec, x) -> np.ndarray:
    """Im(F_k) for the torus embedding z_k = exp(i phi_k).

    With dz_k/dt = z_k * i * Y_k(phi) the observable Im(conj(z_k) dz_k/dt)/|z_k|^2
    is the instantaneous angular velocity Y_k.
    """
    x = _check(spec, x)
    z = np.exp(1j * x)
    zdot = z * 1j * field(spec, x)
    return np.imag(np.conj(z) * zdot) / np.abs(z) ** 2


def permutation_action(perm, x) -> np.ndarray:
    """(gamma x)_k = x_{gamma^-1(k)}: oscillator k moves to slot gamma(k)."""
    perm = np.asarray(perm)
    x = np.asarray(x)
    out = np.empty_like(x)
    out[..., perm] = x
    return out
