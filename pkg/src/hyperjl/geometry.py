"""Points, distances and the basic identities of the half-space model."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class HalfSpacePoint:
    """A point ``(z, x)`` of the half-space model, ``z > 0``."""

    z: float
    x: np.ndarray

    def __post_init__(self):
        z = float(self.z)
        x = np.array(self.x, dtype=np.float64).reshape(-1)
        if not np.isfinite(z) or z <= 0:
            raise ValueError(f"height z must be positive and finite, got {self.z!r}")
        if x.size == 0:
            raise ValueError("x must have dimension >= 1")
        if not np.all(np.isfinite(x)):
            raise ValueError("x must have finite components")
        x.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "x", x)

    @property
    def dim(self) -> int:
        return self.x.size

    def __eq__(self, other):
        if not isinstance(other, HalfSpacePoint):
            return NotImplemented
        return self.z == other.z and self.x.shape == other.x.shape and bool(np.all(self.x == other.x))

    def __hash__(self):
        return hash((self.z, self.x.tobytes()))

    def __repr__(self):
        return f"HalfSpacePoint(z={self.z!r}, x={self.x.tolist()!r})"


class PointSet:
    """An ordered, nonempty collection of half-space points sharing one x-dimension.

    Stored column-wise: ``z`` has shape ``(n,)`` and ``x`` has shape ``(n, d)``.
    Both arrays are read-only.
    """

    def __init__(self, z, x):
        z = np.array(z, dtype=np.float64).reshape(-1)
        x = np.array(x, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2:
            raise ValueError("x must be a 2-D array of shape (n, d)")
        if z.size == 0:
            raise ValueError("a point set must be nonempty")
        if x.shape[0] != z.size:
            raise ValueError(f"got {z.size} heights but {x.shape[0]} coordinate rows")
        if x.shape[1] < 1:
            raise ValueError("x must have dimension >= 1")
        bad = np.flatnonzero(~np.isfinite(z) | (z <= 0))
        if bad.size:
            raise ValueError(f"row {bad[0]}: height z must be positive and finite, got {z[bad[0]]!r}")
        bad = np.flatnonzero(~np.all(np.isfinite(x), axis=1))
        if bad.size:
            raise ValueError(f"row {bad[0]}: x has non-finite components")
        z.setflags(write=False)
        x = np.ascontiguousarray(x)
        x.setflags(write=False)
        self.z = z
        self.x = x

    @classmethod
    def from_points(cls, points: Iterable[HalfSpacePoint]) -> "PointSet":
        points = list(points)
        if not points:
            raise ValueError("a point set must be nonempty")
        dims = {p.dim for p in points}
        if len(dims) != 1:
            raise ValueError(f"points have inconsistent x-dimensions {sorted(dims)}")
        return cls([p.z for p in points], np.stack([p.x for p in points]))

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    @property
    def points(self) -> list[HalfSpacePoint]:
        return list(self)

    def __len__(self) -> int:
        return self.z.size

    def __getitem__(self, i: int) -> HalfSpacePoint:
        return HalfSpacePoint(self.z[i], self.x[i])

    def __iter__(self) -> Iterator[HalfSpacePoint]:
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return (
            self.x.shape == other.x.shape
            and bool(np.all(self.z == other.z))
            and bool(np.all(self.x == other.x))
        )

    def __repr__(self):
        return f"PointSet(n={len(self)}, dim={self.dim})"


def stable_acosh1p(u):
    """Return ``arccosh(1 + u)`` without forming ``1 + u``.

    Uses ``log1p(u + sqrt(u * (u + 2)))``, which keeps full relative accuracy
    as ``u -> 0`` where ``arccosh(1 + u) ~ sqrt(2u)``. Accepts scalars or
    arrays.
    """
    arr = np.asarray(u, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise ValueError("stable_acosh1p requires u >= 0")
    if np.any(np.isinf(arr)):
        raise ValueError("stable_acosh1p requires finite u")
    out = np.log1p(arr + np.sqrt(arr * (arr + 2.0)))
    return float(out) if out.ndim == 0 else out


def _check_pair(p1: HalfSpacePoint, p2: HalfSpacePoint):
    if p1.dim != p2.dim:
        raise ValueError(f"dimension mismatch: {p1.dim} vs {p2.dim}")


def _sq_norm(diff: np.ndarray) -> float:
    # np.sum reduces pairwise, which keeps the error O(log d) for large d.
    return float(np.sum(diff * diff))


def _gap(sq: float, z1: float, z2: float) -> float:
    dz = z1 - z2
    return (sq + dz * dz) / (2.0 * z1 * z2)


def cosh_gap(p1: HalfSpacePoint, p2: HalfSpacePoint) -> float:
    """``(|x1 - x2|^2 + (z1 - z2)^2) / (2 z1 z2)``, which equals ``cosh(d) - 1``."""
    _check_pair(p1, p2)
    return _gap(_sq_norm(p1.x - p2.x), p1.z, p2.z)


def distance(p1: HalfSpacePoint, p2: HalfSpacePoint) -> float:
    """Hyperbolic distance between two half-space points."""
    u = cosh_gap(p1, p2)
    if u == 0.0 and p1 != p2:
        # squared offsets underflowed; use d = 2 asinh(s / (2 sqrt(z1 z2))) on a rescaled norm
        diff = np.append(p1.x - p2.x, p1.z - p2.z)
        m = float(np.max(np.abs(diff)))
        s = m * math.sqrt(_sq_norm(diff / m))
        return 2.0 * math.asinh(s / (2.0 * math.sqrt(p1.z) * math.sqrt(p2.z)))
    return stable_acosh1p(u)


def fcurve(r: float, z1: float, z2: float) -> float:
    """Distance between points at heights ``z1``, ``z2`` whose x-parts are ``r`` apart.

    Strictly increasing in ``r``; ``fcurve(|x1 - x2|, z1, z2) == distance(p1, p2)``.
    """
    r = float(r)
    if not r >= 0 or not np.isfinite(r):
        raise ValueError(f"r must be a finite nonnegative number, got {r!r}")
    for z in (z1, z2):
        if not np.isfinite(z) or not z > 0:
            raise ValueError(f"heights must be positive and finite, got {z!r}")
    return stable_acosh1p(_gap(r * r, float(z1), float(z2)))


def gap_rows(z: np.ndarray, x: np.ndarray, i: int, cols: slice | Sequence[int] | np.ndarray) -> np.ndarray:
    """Vectorized ``cosh_gap`` between point ``i`` and the points indexed by ``cols``."""
    diff = x[cols] - x[i]
    sq = np.sum(diff * diff, axis=1)
    dz = z[cols] - z[i]
    return (sq + dz * dz) / (2.0 * z[i] * z[cols])


def gap_matrix(z: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Symmetric matrix of ``cosh_gap`` values, filled from the upper triangle."""
    n = z.size
    out = np.zeros((n, n))
    for i in range(n - 1):
        out[i, i + 1:] = gap_rows(z, x, i, slice(i + 1, None))
    return out + out.T
