"""Distance matrices, distortion reports and synthetic point sets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hyperjl._rng import GENERATOR, stream
from hyperjl.geometry import PointSet, gap_matrix, stable_acosh1p


def pairwise_distances(ps: PointSet) -> np.ndarray:
    """``(n, n)`` matrix of hyperbolic distances; exactly symmetric, zero diagonal."""
    return stable_acosh1p(gap_matrix(ps.z, ps.x))


@dataclass(frozen=True)
class DistortionReport:
    n: int
    pair_count: int
    min_ratio: Optional[float]
    max_ratio: Optional[float]
    distortion: Optional[float]
    worst_expand_pair: Optional[tuple[int, int]]
    worst_contract_pair: Optional[tuple[int, int]]
    zero_pairs: int
    valid: bool = True

    @property
    def noncontracting(self) -> bool:
        return self.min_ratio is None or self.min_ratio >= 1.0 - 1e-12

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "pair_count": self.pair_count,
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "distortion": self.distortion,
            "worst_expand_pair": list(self.worst_expand_pair) if self.worst_expand_pair else None,
            "worst_contract_pair": list(self.worst_contract_pair) if self.worst_contract_pair else None,
            "zero_pairs": self.zero_pairs,
            "valid": self.valid,
        }


def distortion(d_in, d_out) -> DistortionReport:
    """Compare two distance matrices over the same index set.

    Ratios ``d_out / d_in`` are taken over pairs ``i < j`` with
    ``d_in > 0``; distortion is ``max_ratio / min_ratio``. Pairs with
    ``d_in == 0`` are counted in ``zero_pairs`` and must have ``d_out == 0``,
    otherwise the report is marked invalid.
    """
    d_in = np.asarray(d_in, dtype=np.float64)
    d_out = np.asarray(d_out, dtype=np.float64)
    if d_in.ndim != 2 or d_in.shape[0] != d_in.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d_in.shape}")
    if d_in.shape != d_out.shape:
        raise ValueError(f"shape mismatch: {d_in.shape} vs {d_out.shape}")
    n = d_in.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    a = d_in[iu, ju]
    b = d_out[iu, ju]
    live = a > 0
    zero_pairs = int(np.count_nonzero(~live))
    valid = bool(np.all(b[~live] == 0))
    if not np.any(live):
        return DistortionReport(n, 0, None, None, None, None, None, zero_pairs, valid)
    ratios = np.where(live, b / np.where(live, a, 1.0), np.nan)
    hi = int(np.nanargmax(ratios))
    lo = int(np.nanargmin(ratios))
    max_ratio = float(ratios[hi])
    min_ratio = float(ratios[lo])
    dist = max_ratio / min_ratio if min_ratio > 0 else math.inf
    return DistortionReport(
        n,
        int(live.sum()),
        min_ratio,
        max_ratio,
        dist,
        (int(iu[hi]), int(ju[hi])),
        (int(iu[lo]), int(ju[lo])),
        zero_pairs,
        valid,
    )


def gen_random(n: int, dim: int, seed: int, z_spread: float = 1.0, x_spread: float = 1.0) -> PointSet:
    """Random points with ``z = exp(U(-z_spread, z_spread))`` and ``x ~ N(0, x_spread^2 I)``.

    Point ``i`` is drawn from its own stream keyed by ``(seed, i)``, so a
    prefix of a larger set equals the smaller set.
    """
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be >= 1")
    if z_spread < 0 or x_spread < 0:
        raise ValueError("spreads must be nonnegative")
    z = np.empty(n)
    x = np.empty((n, dim))
    for i in range(n):
        rng = stream(seed, GENERATOR, 0, i)
        z[i] = math.exp(rng.uniform(-z_spread, z_spread)) if z_spread > 0 else 1.0
        x[i] = rng.normal(0.0, x_spread, size=dim) if x_spread > 0 else 0.0
    return PointSet(z, x)


def spacing_for(delta_min: float) -> float:
    """Horizontal spacing ``R`` at height 1 giving distance ``delta_min``.

    ``R = sqrt(2 (cosh D - 1)) = 2 sinh(D / 2)``.
    """
    return 2.0 * math.sinh(delta_min / 2.0)


def gen_separated(
    n: int,
    dim: int,
    delta_min: float,
    seed: int = 0,
    jitter: float = 0.0,
    z_jitter: float = 0.0,
) -> PointSet:
    """Points ``(1, i R e1)`` whose closest pairs are exactly ``delta_min`` apart.

    ``jitter`` adds ``N(0, (jitter R)^2)`` noise to the coordinates orthogonal
    to ``e1``; that can only push points apart. ``z_jitter`` multiplies the
    heights by ``exp(U(-z_jitter, z_jitter))``, which can bring them closer,
    so any jittered set is rescanned and rejected with ``ValueError`` if its
    minimum separation falls below ``delta_min - 1e-9``.
    """
    if n < 2 or dim < 1:
        raise ValueError("need n >= 2 and dim >= 1")
    if not delta_min > 0 or not math.isfinite(delta_min):
        raise ValueError("delta_min must be positive and finite")
    if jitter < 0 or z_jitter < 0:
        raise ValueError("jitter must be nonnegative")
    r = spacing_for(delta_min)
    z = np.ones(n)
    x = np.zeros((n, dim))
    x[:, 0] = np.arange(n) * r
    if jitter > 0 or z_jitter > 0:
        for i in range(n):
            rng = stream(seed, GENERATOR, 1, i)
            side = rng.normal(0.0, 1.0, size=dim - 1)
            tilt = rng.uniform(-1.0, 1.0)
            if jitter > 0:
                x[i, 1:] = side * (jitter * r)
            if z_jitter > 0:
                z[i] = math.exp(z_jitter * tilt)
        ps = PointSet(z, x)
        d = pairwise_distances(ps)
        found = float(np.min(d[np.triu_indices(n, k=1)]))
        if found < delta_min - 1e-9:
            raise ValueError(f"jittered set has separation {found!r} < {delta_min!r}")
        return ps
    return PointSet(z, x)
