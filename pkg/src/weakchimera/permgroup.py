"""Permutation groups acting on oscillator indices.

Convention: a permutation ``gamma`` sends oscillator ``k`` to slot
``gamma(k)``, so ``(gamma x)[gamma(k)] = x[k]``. Products compose right to
left, ``(p * q)(k) = p(q(k))``.

Groups are small here (the largest case is S_4 wr S_2 of order 1152), so
elements are enumerated eagerly up to a cap. Past the cap a group can still
exist as generators plus a block structure, but asking for its elements raises
:class:`GroupTooLarge`.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

DEFAULT_CAP = 10**6
TWO_PI = 2.0 * math.pi


class GroupTooLarge(ValueError):
    """Raised instead of enumerating a group past the cap."""


class AmbiguousSymmetryWarning(UserWarning):
    """A Hausdorff distance fell between tol and 10*tol."""


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation of 0..{len(imgs) - 1}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        imgs = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                imgs[a] = b
        return cls(tuple(imgs))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for k, i in enumerate(self.images):
            inv[i] = k
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(self.degree))

    def act(self, x) -> np.ndarray:
        """Move entry k of ``x`` (last axis) to slot ``self(k)``."""
        x = np.asarray(x)
        out = np.empty_like(x)
        out[..., list(self.images)] = x
        return out

    def __repr__(self):
        return f"Permutation({list(self.images)})"


@dataclass(frozen=True, eq=False)
class PermGroup:
    """A permutation group of the given degree.

    ``table`` holds the elements as rows of images, or is None when the
    group was too large to enumerate. ``blocks`` is set for Young subgroups
    (products of symmetric groups on disjoint index blocks), which lets
    membership be decided without enumeration.
    """

    degree: int
    generators: tuple[Permutation, ...]
    order: int
    name: str = ""
    table: np.ndarray | None = field(default=None, repr=False)
    blocks: tuple[tuple[int, ...], ...] | None = None

    @property
    def enumerated(self) -> bool:
        return self.table is not None

    @property
    def elements(self) -> list[Permutation]:
        return [Permutation(tuple(row)) for row in self._table()]

    def _table(self) -> np.ndarray:
        if self.table is None:
            raise GroupTooLarge(f"{self.name or 'group'} of order {self.order} was not enumerated")
        return self.table

    def __len__(self):
        return self.order

    def __contains__(self, perm: Permutation) -> bool:
        if perm.degree != self.degree:
            return False
        if self.table is not None:
            return bool(np.any(np.all(self.table == np.asarray(perm.images), axis=1)))
        if self.blocks is not None:
            return all(set(perm.images[i] for i in blk) == set(blk) for blk in self.blocks)
        raise GroupTooLarge("membership needs enumerated elements or a block structure")

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        if self.degree != other.degree or other.order % self.order:
            return False
        return all(g in other for g in self.generators)

    def same_as(self, other: "PermGroup") -> bool:
        return self.order == other.order and self.is_subgroup_of(other)

    def conjugate(self, gamma: Permutation) -> "PermGroup":
        """gamma * G * gamma^-1."""
        perm = np.asarray(gamma.images)
        inv = np.asarray(gamma.inverse().images)
        table = None if self.table is None else perm[self.table[:, inv]]
        gens = tuple(gamma * g * gamma.inverse() for g in self.generators)
        blocks = None
        if self.blocks is not None:
            blocks = tuple(tuple(sorted(gamma(i) for i in blk)) for blk in self.blocks)
        return PermGroup(self.degree, gens, self.order, self.name, table, blocks)

    def summary(self) -> dict:
        return {
            "order": int(self.order),
            "generators": [list(g.images) for g in self.generators],
            "label": self.name,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary())


# -- construction --------------------------------------------------------------

def _rows_to_group(rows: np.ndarray, name: str, blocks=None) -> PermGroup:
    rows = np.asarray(rows, dtype=np.int64)
    gens = _generators_of(rows)
    return PermGroup(rows.shape[1], gens, rows.shape[0], name, rows, blocks)


def _keys(rows: np.ndarray) -> list[bytes]:
    return [r.tobytes() for r in np.ascontiguousarray(rows, dtype=np.int64)]


def _closure(gens: Sequence[Permutation], degree: int, cap: int) -> np.ndarray:
    """All products of ``gens``; raises GroupTooLarge past ``cap`` elements."""
    ident = np.arange(degree, dtype=np.int64)
    gen_rows = [np.asarray(g.images, dtype=np.int64) for g in gens if not g.is_identity()]
    seen = {ident.tobytes()}
    out = [ident]
    frontier = ident[None, :]
    while frontier.size:
        new = []
        for g in gen_rows:
            prods = g[frontier]  # (g * h)(k) = g(h(k))
            for row, key in zip(prods, _keys(prods)):
                if key not in seen:
                    seen.add(key)
                    new.append(row)
                    if len(seen) > cap:
                        raise GroupTooLarge(f"group generated by {len(gens)} elements exceeds cap {cap}")
        frontier = np.array(new, dtype=np.int64).reshape(-1, degree)
        out.extend(new)
    return np.array(out, dtype=np.int64)


def _generators_of(rows: np.ndarray) -> tuple[Permutation, ...]:
    """A small generating set for the group whose elements are ``rows``.

    Also serves as the closure check: raises ValueError when ``rows`` is not
    closed under composition.
    """
    degree = rows.shape[1]
    members = set(_keys(rows))
    gens: list[Permutation] = []
    span = {np.arange(degree, dtype=np.int64).tobytes()}
    for row, key in zip(rows, _keys(rows)):
        if key in span:
            continue
        gens.append(Permutation(tuple(row)))
        sub = _closure(gens, degree, max(len(members), 1))
        span = set(_keys(sub))
        if not span <= members:
            raise ValueError("element set is not closed under composition")
    if len(span) != len(members):
        raise ValueError("element set is not closed under composition")
    return tuple(gens)


def from_generators(gens: Iterable[Permutation], name: str = "", cap: int = DEFAULT_CAP) -> PermGroup:
    gens = tuple(gens)
    if not gens:
        raise ValueError("need at least one generator")
    rows = _closure(gens, gens[0].degree, cap)
    return PermGroup(gens[0].degree, gens, rows.shape[0], name, rows)


def trivial_group(degree: int) -> PermGroup:
    ident = Permutation.identity(degree)
    return PermGroup(degree, (ident,), 1, "1", np.arange(degree, dtype=np.int64)[None, :])


def _symmetric_rows(points: Sequence[int], degree: int) -> np.ndarray:
    pts = list(points)
    perms = np.array(list(itertools.permutations(pts)), dtype=np.int64).reshape(-1, len(pts))
    rows = np.tile(np.arange(degree, dtype=np.int64), (perms.shape[0], 1))
    rows[:, pts] = perms
    return rows


def _young_rows(blocks: Sequence[Sequence[int]], degree: int) -> np.ndarray:
    rows = np.arange(degree, dtype=np.int64)[None, :]
    for blk in blocks:
        if len(blk) < 2:
            continue
        blk_rows = _symmetric_rows(blk, degree)
        # (b * r)(k) = b(r(k)) for every block permutation b and existing row r
        combined = np.take_along_axis(blk_rows[:, None, :].repeat(rows.shape[0], axis=1),
                                      rows[None, :, :].repeat(blk_rows.shape[0], axis=0), axis=2)
        rows = combined.reshape(-1, degree)
    return rows


def _young_generators(blocks: Sequence[Sequence[int]], degree: int) -> tuple[Permutation, ...]:
    gens = []
    for blk in blocks:
        blk = sorted(blk)
        if len(blk) >= 2:
            gens.append(Permutation.from_cycles(degree, blk[:2]))
        if len(blk) >= 3:
            gens.append(Permutation.from_cycles(degree, blk))
    return tuple(gens) or (Permutation.identity(degree),)


def young_subgroup(blocks: Sequence[Sequence[int]], degree: int, name: str = "",
                   cap: int = DEFAULT_CAP) -> PermGroup:
    """Product of symmetric groups on disjoint blocks; enumerated if order <= cap."""
    blocks = tuple(tuple(sorted(int(i) for i in b)) for b in blocks)
    order = math.prod(math.factorial(len(b)) for b in blocks)
    table = _young_rows(blocks, degree) if order <= cap else None
    label = name or " x ".join(f"S{len(b)}" for b in blocks if len(b) > 1) or "1"
    return PermGroup(degree, _young_generators(blocks, degree), order, label, table, blocks)


def make_group(kind: str, n: int, cap: int = DEFAULT_CAP) -> PermGroup:
    """``symmetric`` S_n, ``cyclic`` Z_n, or ``wreath_s2`` S_n wr S_2 on 2n points."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "symmetric":
        order = math.factorial(n)
        if order > cap:
            raise GroupTooLarge(f"S_{n} has order {order} > cap {cap}")
        return young_subgroup([range(n)], n, name=f"S{n}", cap=cap)
    if kind == "cyclic":
        if n > cap:
            raise GroupTooLarge(f"Z_{n} has order {n} > cap {cap}")
        rows = (np.arange(n)[None, :] + np.arange(n)[:, None]) % n
        gen = Permutation(tuple((np.arange(n) + 1) % n))
        return PermGroup(n, (gen,), n, f"Z{n}", rows.astype(np.int64))
    if kind == "wreath_s2":
        order = 2 * math.factorial(n) ** 2
        if order > cap:
            raise GroupTooLarge(f"S_{n} wr S_2 has order {order} > cap {cap}")
        base = _young_rows([range(n), range(n, 2 * n)], 2 * n)
        swap = np.r_[np.arange(n, 2 * n), np.arange(n)]
        rows = np.vstack([base, swap[base]])
        gens = _young_generators([range(n), range(n, 2 * n)], 2 * n) + (Permutation(tuple(swap)),)
        return PermGroup(2 * n, gens, order, f"S{n} wr S2", rows)
    raise ValueError(f"unknown group kind {kind!r}; expected symmetric, cyclic or wreath_s2")


# -- symmetry computations -----------------------------------------------------

def _subgroup_from_mask(g: PermGroup, mask: np.ndarray, name: str) -> PermGroup:
    rows = g._table()[mask]
    return _rows_to_group(rows, name)


def isotropy_subgroup(g: PermGroup, v, tol: float = 0.0) -> PermGroup:
    """Elements fixing ``v`` up to ``tol``: max_k |v[gamma(k)] - v[k]| <= tol."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    v = np.asarray(v, dtype=float)
    if v.shape != (g.degree,):
        raise ValueError(f"vector must have length {g.degree}")
    table = g._table()
    dev = np.max(np.abs(v[table] - v[None, :]), axis=1)
    return _subgroup_from_mask(g, dev <= tol, f"iso({g.name})")


def value_classes(v, tol: float) -> list[tuple[int, ...]]:
    """Split indices into runs of sorted values whose consecutive gaps are <= tol."""
    v = np.asarray(v, dtype=float)
    order = np.argsort(v, kind="stable")
    classes, cur = [], [int(order[0])]
    for prev, nxt in zip(order[:-1], order[1:]):
        if v[nxt] - v[prev] > tol:
            classes.append(tuple(sorted(cur)))
            cur = []
        cur.append(int(nxt))
    classes.append(tuple(sorted(cur)))
    return classes


def theta_set(v, tol: float = 0.0, cap: int = DEFAULT_CAP) -> PermGroup:
    """All of S_N fixing ``v`` within tol, built from the value classes of ``v``."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("need a nonempty vector")
    return young_subgroup(value_classes(v, tol), v.size, cap=cap)


def _shift_features(x: np.ndarray) -> np.ndarray:
    """Coordinates of x modulo the diagonal rotation: x_k - x_0 in [0, 2pi)."""
    return np.mod(x[:, 1:] - x[:, :1], TWO_PI)


def _directed(tree: cKDTree, pts: np.ndarray, bound: float, probe: int) -> float:
    """max over pts of distance to the tree, inf as soon as it exceeds bound."""
    if probe and pts.shape[0] > probe:
        d, _ = tree.query(pts[:probe], p=np.inf, distance_upper_bound=bound)
        if np.isinf(d).any():
            return math.inf
    d, _ = tree.query(pts, p=np.inf, distance_upper_bound=bound)
    return float(d.max())


def _subsample(x: np.ndarray, max_points: int, seed: int) -> np.ndarray:
    if x.shape[0] > max_points:
        idx = np.sort(np.random.default_rng(seed).choice(x.shape[0], max_points, replace=False))
        x = x[idx]
    return x


def _profile(rows: np.ndarray, x: np.ndarray, tol: float, modulo_shift: bool,
             active: np.ndarray | None = None) -> np.ndarray:
    """Hausdorff distances for permutation rows acting on the cloud x (inf where inactive)."""
    feat = _shift_features if modulo_shift else (lambda y: np.mod(y, TWO_PI))
    tree = cKDTree(feat(x), boxsize=TWO_PI * (1 + 1e-15))
    bound = 10.0 * tol if tol > 0 else 1e-12
    ident = np.arange(x.shape[1])
    out = np.full(rows.shape[0], math.inf)
    for i, row in enumerate(rows):
        if active is not None and not active[i]:
            continue
        if np.array_equal(row, ident):
            out[i] = 0.0
            continue
        fwd = np.empty_like(x)
        fwd[:, row] = x
        d1 = _directed(tree, np.mod(feat(fwd), TWO_PI), bound, 32)
        if math.isinf(d1):
            continue
        bwd = np.empty_like(x)
        bwd[:, np.argsort(row)] = x
        out[i] = max(d1, _directed(tree, np.mod(feat(bwd), TWO_PI), bound, 32))
    return out


def _check_samples(g: PermGroup, samples) -> np.ndarray:
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    if x.shape[0] == 0:
        raise ValueError("need at least one sample")
    if x.shape[1] != g.degree:
        raise ValueError(f"samples must have {g.degree} columns")
    return x


def hausdorff_profile(g: PermGroup, samples, tol: float, modulo_shift: bool = True,
                      max_points: int = 5000, seed: int = 0) -> np.ndarray:
    """Hausdorff distance between gamma*samples and samples, for every gamma in g.

    Distances use the sup-norm circle metric. Values above 10*tol are
    reported as inf (the search stops there). With ``modulo_shift`` the
    comparison is made after quotienting out the common phase rotation.
    """
    x = _subsample(_check_samples(g, samples), max_points, seed)
    return _profile(g._table(), x, tol, modulo_shift)


def orbits(g: PermGroup) -> list[tuple[int, ...]]:
    """Orbits of g on {0, ..., degree - 1}, each sorted."""
    table = g._table()
    seen, out = set(), []
    for k in range(g.degree):
        if k not in seen:
            orb = tuple(sorted(set(table[:, k].tolist())))
            seen.update(orb)
            out.append(orb)
    return out


def block_prefilter(g: PermGroup, samples, blocks, floor: float = 1e-3, modulo_shift: bool = True,
                    max_points: int = 5000, seed: int = 0) -> tuple[np.ndarray, list[float]]:
    """Elements of g whose restriction to every block preserves that block's projected cloud.

    ``blocks`` must be unions of orbits of g. A setwise symmetry of the full
    set maps each block projection onto itself, so this is a necessary
    condition. The projections live in few dimensions and are far better
    sampled than the full cloud, which makes the test sharp. Each block uses
    tolerance max(floor, 3 * self_resolution(block cloud)). Returns the mask
    over g's table and the per-block tolerances.
    """
    x = _subsample(_check_samples(g, samples), max_points, seed)
    table = g._table()
    mask = np.ones(table.shape[0], dtype=bool)
    tols = []
    for block in blocks:
        block = np.asarray(sorted(block))
        if block.size < 2:
            tols.append(0.0)
            continue
        local = np.full(g.degree, -1)
        local[block] = np.arange(block.size)
        rows = local[table[:, block]]
        if (rows < 0).any():
            raise ValueError(f"block {block.tolist()} is not invariant under the group")
        uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
        sub = x[:, block]
        tol = max(floor, 3.0 * self_resolution(sub, modulo_shift, max_points))
        tols.append(tol)
        dist = _profile(uniq, sub, tol, modulo_shift)
        mask &= (dist <= tol)[inverse.ravel()]
    return mask, tols


def setwise_symmetry_estimate(g: PermGroup, samples, tol: float, modulo_shift: bool = True,
                              max_points: int = 5000, blocks=None, block_floor: float = 1e-3) -> PermGroup:
    """Elements of g mapping the sampled set to itself within Hausdorff distance tol.

    For attractors the distance is either ~0 or bounded away from 0, so a
    distance in the band (tol, 10*tol] is suspicious and triggers a warning.
    With ``blocks`` (unions of orbits of g) candidates must first pass
    :func:`block_prefilter`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = _subsample(_check_samples(g, samples), max_points, 0)
    active = None
    if blocks is not None:
        active, _ = block_prefilter(g, x, blocks, block_floor, modulo_shift, max_points)
    dist = _profile(g._table(), x, tol, modulo_shift, active)
    amb = (dist > tol) & (dist <= 10 * tol)
    if amb.any():
        warnings.warn(
            f"{int(amb.sum())} group elements at Hausdorff distance in ({tol:g}, {10 * tol:g}]; "
            "verdict may depend on tol", AmbiguousSymmetryWarning, stacklevel=2)
    mask = dist <= tol
    try:
        return _subgroup_from_mask(g, mask, f"setwise({g.name})")
    except ValueError:
        warnings.warn("accepted elements are not closed; returning the generated subgroup",
                      AmbiguousSymmetryWarning, stacklevel=2)
        gens = [Permutation(tuple(r)) for r in g._table()[mask]]
        return from_generators(gens, f"setwise({g.name})")


def self_resolution(samples, modulo_shift: bool = True, max_points: int = 5000) -> float:
    """Hausdorff distance between the first and second half of a sample cloud.

    A symmetric image of the set cannot be resolved better than this, so it
    sets the scale for ``tol`` in :func:`setwise_symmetry_estimate`.
    """
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    if x.shape[0] < 2:
        return 0.0
    if x.shape[0] > 2 * max_points:
        x = x[np.linspace(0, x.shape[0] - 1, 2 * max_points).astype(int)]
    feat = _shift_features(x) if modulo_shift else np.mod(x, TWO_PI)
    half = feat.shape[0] // 2
    a, b = feat[:half], feat[half:]
    box = TWO_PI * (1 + 1e-15)
    da, _ = cKDTree(b, boxsize=box).query(a, p=np.inf)
    db, _ = cKDTree(a, boxsize=box).query(b, p=np.inf)
    return float(max(da.max(), db.max()))
