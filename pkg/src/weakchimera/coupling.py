"""2pi-periodic coupling functions.

Three building blocks, all immutable and callable on scalars or arrays:

* :class:`FourierCoupling` -- finite cosine series ``sum c_r cos(r phi + xi_r)``
* :class:`BumpFunction` -- the smooth bump ``a * beta(phi / b)`` supported on (-b, b)
* :class:`CompositeCoupling` -- ``base + modulator * bump + sum of arc offsets``

Every coupling knows its exact derivative and compiles to a numeric table for
the integration kernels (see :mod:`weakchimera.kernels`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import kernels

TWO_PI = 2.0 * math.pi

# Chaotic n=4 coupling: c_r for r = 1..4, xi_r built from eta_1, eta_2.
ETA_1 = 0.138
ETA_2 = 0.057511
G_CHAOS_TERMS = (
    (1, -2.0, ETA_1),
    (2, -2.0, -ETA_1),
    (3, -1.0, ETA_1 + ETA_2),
    (4, -0.88, ETA_1 + ETA_2),
)

# Local perturbation coefficients (r, a_r, zeta_r); all other harmonics vanish.
G_TILDE_TERMS = (
    (6, -0.676135392447403, 0.846647746060342),
    (8, 0.844660333390606, 0.954985847962987),
    (10, 0.087624615584542, 0.212748482509925),
    (12, -0.644961491438887, 0.025296512718163),
    (14, -0.459724407978054, 0.180050952622569),
    (16, -1.175355598611419, 0.835173783095831),
    (18, 0.799302873723814, 0.850732311209280),
    (20, -1.303832930713680, 0.863697094160152),
    (22, 0.094742514998172, 0.355260772731067),
    (24, -2.293749915528502, 0.463364388737488),
)

# Re-derived perturbation with the same support, bump and harmonics (6, 8, ..., 24).
# Solved so that COHERENT_SEED below is an exact, linearly stable relative
# equilibrium; see equilibria.design_local_perturbation.
G_TILDE_REFIT_TERMS = (
    (6, 339.366517411272866, -1.557485184369993),
    (8, 70.069238172406557, -1.589451842478134),
    (10, 203.110521342816583, 1.590236537123326),
    (12, 294.276976364192365, 1.580175003232309),
    (14, 125.037680251445138, 1.563093554381420),
    (16, 184.369790775116769, -1.547790178358985),
    (18, 335.155709519061247, -1.559617240102597),
    (20, 57.727701150519003, -1.598708821396266),
    (22, 445.630877371898919, 1.586186575989596),
    (24, 182.675562213734310, -1.549500511828039),
)

# Offsets of the coherent relative equilibrium targeted by the local perturbation.
COHERENT_SEED = (0.0, 0.0975, 0.1253, 0.2247)

BUMP_A = 2.5
BUMP_B = 0.25

DEFAULT_BLEND = 0.05

_EMPTY_TERMS = np.zeros((5, 0))
_NO_BUMP = np.zeros(2)
_NO_OFFSETS = np.zeros((4, 0))


class CouplingSpecError(ValueError):
    """Malformed coupling description."""


def _as_array(phi):
    return np.asarray(phi, dtype=float)


def _unwrap_scalar(x, phi):
    return float(x) if np.ndim(phi) == 0 else x


class _Coupling:
    """Shared evaluation plumbing: subclasses provide ``table()``."""

    def table(self):
        raise NotImplementedError

    def value_and_deriv(self, phi):
        v, d = kernels.coupling_eval_array(np.atleast_1d(_as_array(phi)), *self.table())
        return _unwrap_scalar(v.reshape(np.shape(phi)), phi), _unwrap_scalar(d.reshape(np.shape(phi)), phi)

    def __call__(self, phi):
        return self.value_and_deriv(phi)[0]

    def deriv(self, phi):
        return self.value_and_deriv(phi)[1]


@dataclass(frozen=True)
class FourierCoupling(_Coupling):
    """Cosine series; ``terms`` holds (r, c_r, xi_r) triples."""

    terms: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((float(r), float(c), float(x)) for r, c, x in self.terms))
        for r, _, _ in self.terms:
            if r < 0 or r != int(r):
                raise CouplingSpecError(f"harmonic index must be a nonnegative integer, got {r}")

    @classmethod
    def constant(cls, c: float) -> "FourierCoupling":
        return cls(((0, c, 0.0),))

    @classmethod
    def sine(cls, scale: float = 1.0) -> "FourierCoupling":
        """``scale * sin(phi)``, written as ``scale * cos(phi - pi/2)``."""
        return cls(((1, scale, -math.pi / 2),))

    def harmonics(self) -> list[int]:
        return sorted({int(r) for r, c, _ in self.terms if c != 0.0})

    def terms_array(self) -> np.ndarray:
        if not self.terms:
            return _EMPTY_TERMS
        t = np.array(sorted(self.terms), dtype=float).T
        return np.vstack([t, t[1] * np.cos(t[2]), t[1] * np.sin(t[2])])

    def table(self):
        return (self.terms_array(), _EMPTY_TERMS, _NO_BUMP, _NO_OFFSETS)


@dataclass(frozen=True)
class BumpFunction(_Coupling):
    """``a * exp(-1 / (1 - (phi/b)^2))`` on (-b, b) mod 2pi, zero elsewhere."""

    a: float
    b: float

    def __post_init__(self):
        if not 0.0 < self.b < math.pi:
            raise CouplingSpecError(f"bump half-width must lie in (0, pi), got {self.b}")

    def table(self):
        return (_EMPTY_TERMS, np.array([[0.0], [1.0], [0.0], [1.0], [0.0]]), np.array([self.a, self.b]), _NO_OFFSETS)


@dataclass(frozen=True)
class ArcOffset:
    """Add ``amplitude`` on the closed arc [lo, hi] (mod 2pi), blended over ``blend`` radians."""

    lo: float
    hi: float
    amplitude: float
    blend: float = DEFAULT_BLEND

    def __post_init__(self):
        if self.hi < self.lo:
            raise CouplingSpecError(f"offset arc needs lo <= hi, got [{self.lo}, {self.hi}]")
        if self.blend < 0:
            raise CouplingSpecError("blend width must be nonnegative")
        if (self.hi - self.lo) + 2 * self.blend >= TWO_PI:
            raise CouplingSpecError("offset arc plus blend covers the whole circle")


@dataclass(frozen=True)
class CompositeCoupling(_Coupling):
    """``base + modulator * bump + offsets``."""

    base: FourierCoupling = field(default_factory=FourierCoupling)
    modulator: FourierCoupling | None = None
    bump: BumpFunction | None = None
    offsets: tuple[ArcOffset, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(self.offsets))
        _check_disjoint(self.offsets)

    def table(self):
        mod = self.modulator.terms_array() if self.modulator is not None and self.bump is not None else _EMPTY_TERMS
        bump = np.array([self.bump.a, self.bump.b]) if self.bump is not None else _NO_BUMP
        if self.offsets:
            offs = np.array([[o.lo, o.hi, o.amplitude, o.blend] for o in self.offsets]).T.copy()
        else:
            offs = _NO_OFFSETS
        return (self.base.terms_array(), mod, bump, offs)


Coupling = FourierCoupling | CompositeCoupling | BumpFunction


def _arc_distance(a: ArcOffset, b: ArcOffset) -> float:
    """Gap between two closed arcs on the circle (0 if they intersect)."""
    best = math.inf
    for shift in (-TWO_PI, 0.0, TWO_PI):
        lo, hi = b.lo + shift, b.hi + shift
        if hi < a.lo:
            best = min(best, a.lo - hi)
        elif lo > a.hi:
            best = min(best, lo - a.hi)
        else:
            return 0.0
    return best


def _check_disjoint(offsets: Sequence[ArcOffset]) -> None:
    for i, a in enumerate(offsets):
        for b in offsets[i + 1:]:
            if _arc_distance(a, b) <= a.blend + b.blend:
                raise CouplingSpecError(
                    f"offset arcs [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] overlap within their blend widths"
                )


def as_composite(f: Coupling) -> CompositeCoupling:
    if isinstance(f, CompositeCoupling):
        return f
    if isinstance(f, FourierCoupling):
        return CompositeCoupling(base=f)
    if isinstance(f, BumpFunction):
        return CompositeCoupling(modulator=FourierCoupling.constant(1.0), bump=f)
    raise TypeError(f"not a coupling: {f!r}")


def evaluate(f: Coupling, phi):
    return f(phi)


def evaluate_deriv(f: Coupling, phi):
    return f.deriv(phi)


def offset_on_intervals(f: Coupling, specs: Iterable[tuple[tuple[float, float], float]],
                        blend: float = DEFAULT_BLEND) -> CompositeCoupling:
    """Return ``f`` shifted by a constant on each arc.

    ``specs`` is a sequence of ``((lo, hi), amplitude)``. Inside each arc the
    result is exactly ``f + amplitude``; outside the arc widened by ``blend``
    it is exactly ``f``.
    """
    comp = as_composite(f)
    new = tuple(ArcOffset(lo, hi, a, blend) for (lo, hi), a in specs)
    return replace(comp, offsets=comp.offsets + new)


def g_chaos() -> FourierCoupling:
    return FourierCoupling(G_CHAOS_TERMS)


def g_tilde() -> FourierCoupling:
    return FourierCoupling(G_TILDE_TERMS)


def g_hat(a: float = BUMP_A, b: float = BUMP_B) -> CompositeCoupling:
    return CompositeCoupling(base=g_chaos(), modulator=g_tilde(), bump=BumpFunction(a, b))


def g_tilde_refit() -> FourierCoupling:
    return FourierCoupling(G_TILDE_REFIT_TERMS)


def g_hat_refit(a: float = BUMP_A, b: float = BUMP_B) -> CompositeCoupling:
    """``g + g_tilde_refit * beta_ab``: same construction, coefficients re-derived."""
    return CompositeCoupling(base=g_chaos(), modulator=g_tilde_refit(), bump=BumpFunction(a, b))


PRESETS = {
    "g_chaos": g_chaos,
    "g_tilde": g_tilde,
    "g_hat": g_hat,
    "g_tilde_refit": g_tilde_refit,
    "g_hat_refit": g_hat_refit,
    "zero": lambda: FourierCoupling(),
    "neg_sin": lambda: FourierCoupling.sine(-1.0),
}


def preset(name: str) -> Coupling:
    try:
        return PRESETS[name]()
    except KeyError:
        raise CouplingSpecError(f"unknown coupling preset {name!r}; choose from {sorted(PRESETS)}") from None


# -- plain-text serialization -------------------------------------------------
#
#   fourier r c xi        base harmonic
#   modfourier r c xi     harmonic of the bump-modulated part
#   bump a b
#   offset lo hi a blend
#   preset name           start from a named preset (must come first)

def dumps(f: Coupling) -> str:
    comp = as_composite(f)
    lines = [f"fourier {int(r)} {c!r} {x!r}" for r, c, x in comp.base.terms]
    if comp.bump is not None:
        lines.append(f"bump {comp.bump.a!r} {comp.bump.b!r}")
        if comp.modulator is not None:
            lines += [f"modfourier {int(r)} {c!r} {x!r}" for r, c, x in comp.modulator.terms]
    lines += [f"offset {o.lo!r} {o.hi!r} {o.amplitude!r} {o.blend!r}" for o in comp.offsets]
    return "\n".join(lines) + "\n"


def loads(text: str) -> CompositeCoupling:
    base, mod, offsets = [], [], []
    bump = None
    start: CompositeCoupling | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        try:
            if key == "preset":
                if base or mod or offsets or bump or start is not None:
                    raise CouplingSpecError("'preset' must be the first directive")
                start = as_composite(preset(args[0]))
            elif key == "fourier":
                r, c, x = args
                base.append((int(r), float(c), float(x)))
            elif key == "modfourier":
                r, c, x = args
                mod.append((int(r), float(c), float(x)))
            elif key == "bump":
                a, b = map(float, args)
                bump = BumpFunction(a, b)
            elif key == "offset":
                lo, hi, a, blend = map(float, args)
                offsets.append(ArcOffset(lo, hi, a, blend))
            else:
                raise CouplingSpecError(f"unknown directive {key!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, CouplingSpecError):
                raise CouplingSpecError(f"line {lineno}: {exc}") from None
            raise CouplingSpecError(f"line {lineno}: cannot parse {raw!r}") from None
    if start is None:
        start = CompositeCoupling()
    new_base = FourierCoupling(start.base.terms + tuple(base))
    new_mod = start.modulator
    if mod:
        new_mod = FourierCoupling((new_mod.terms if new_mod else ()) + tuple(mod))
    return CompositeCoupling(
        base=new_base,
        modulator=new_mod,
        bump=bump if bump is not None else start.bump,
        offsets=start.offsets + tuple(offsets),
    )
