"""Embedding well-separated hyperbolic point sets into the hyperbolic plane.

The Euclidean parts are laid out on a line by a non-contracting map ``f``
with measured Lipschitz constant ``L``, and each point ``(z, x)`` goes to
``(z, f(x))``. For every pair at distance ``D``::

    D <= d(g(p1), g(p2)) <= D + 2 ln L + ln 2

so once every pair is at least ``(2 ln L + ln 2) / eps`` apart the distortion
is at most ``1 + eps``. This holds for any non-contracting ``f``; the measured
``L`` stands in for the existential ``O(n)`` line-embedding bound.

Line layouts are induced by an ordering of the points: consecutive points
are placed at their Euclidean distance, which is non-contracting by the
triangle inequality. Up to 8 distinct points the best ordering is found by
exhaustive search; above that the ordering is a preorder walk of the
Euclidean minimum spanning tree rooted at point 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hyperjl.geometry import PointSet
from hyperjl.harness import DistortionReport, distortion, gen_separated, pairwise_distances
from hyperjl.projection import SAFETY
from hyperjl.reduction import CertificateError

EXHAUSTIVE_MAX = 8
SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class LineEmbedding:
    """Positions on the line, one per input vector, plus measured quality.

    ``lipschitz`` is the largest pair ratio ``|f(xi) - f(xj)| / |xi - xj|``
    after calibration; ``min_ratio`` the smallest. ``order`` lists the
    distinct input indices from left to right.
    """

    positions: np.ndarray
    lipschitz: float
    min_ratio: float
    noncontracting_ok: bool
    order: tuple[int, ...]
    method: str

    @property
    def distortion(self) -> float:
        return self.lipschitz / self.min_ratio


def _euclid(v: np.ndarray) -> np.ndarray:
    m = v.shape[0]
    out = np.zeros((m, m))
    for i in range(m - 1):
        diff = v[i + 1:] - v[i]
        out[i, i + 1:] = np.sqrt(np.sum(diff * diff, axis=1))
    return out + out.T


def _layout(dist: np.ndarray, orders: np.ndarray):
    """Positions and pair ratios for a batch of orderings.

    ``orders`` has shape ``(P, m)``. Returns ``positions`` of shape
    ``(P, m)`` indexed by point, and ratios of shape ``(P, pairs)``.
    """
    p, m = orders.shape
    steps = dist[orders[:, :-1], orders[:, 1:]]
    along = np.zeros((p, m))
    along[:, 1:] = np.cumsum(steps, axis=1)
    positions = np.empty((p, m))
    np.put_along_axis(positions, orders, along, axis=1)
    iu, ju = np.triu_indices(m, k=1)
    ratios = np.abs(positions[:, iu] - positions[:, ju]) / dist[iu, ju]
    return positions, ratios


def _exhaustive_order(dist: np.ndarray) -> np.ndarray:
    m = dist.shape[0]
    # an ordering and its reverse give mirror layouts; keep the one starting lower
    perms = np.array([p for p in itertools.permutations(range(m)) if p[0] < p[-1]])
    _, ratios = _layout(dist, perms)
    spread = ratios.max(axis=1) / ratios.min(axis=1)
    return perms[int(np.argmin(spread))]


def mst_preorder(dist: np.ndarray) -> np.ndarray:
    """Preorder walk from vertex 0 of the minimum spanning tree of ``dist``.

    Prim's algorithm; ties go to the lowest index both when picking the next
    vertex and when picking its parent. Children are visited in index order.
    """
    m = dist.shape[0]
    in_tree = np.zeros(m, dtype=bool)
    key = np.full(m, np.inf)
    parent = np.full(m, -1)
    key[0] = 0.0
    children: list[list[int]] = [[] for _ in range(m)]
    for _ in range(m):
        cand = np.where(in_tree, np.inf, key)
        u = int(np.argmin(cand))
        in_tree[u] = True
        if parent[u] >= 0:
            children[parent[u]].append(u)
        closer = ~in_tree & (dist[u] < key)
        key[closer] = dist[u][closer]
        parent[closer] = u
    walk = []
    stack = [0]
    while stack:
        u = stack.pop()
        walk.append(u)
        stack.extend(sorted(children[u], reverse=True))
    return np.array(walk)


def embed_line(vectors, method: str = "auto") -> LineEmbedding:
    """Non-contracting embedding of Euclidean vectors into the real line.

    Parameters
    ----------
    vectors : array_like, shape (n, d)
    method : {"auto", "exhaustive", "mst"}
        ``auto`` searches all orderings when there are at most 8 distinct
        vectors and uses the MST walk otherwise.

    Duplicate vectors share a position. The layout is rescaled so the
    smallest pair ratio is ``1 + 1e-12``.
    """
    v = np.asarray(vectors, dtype=np.float64)
    if v.ndim == 1:
        v = v.reshape(-1, 1)
    if v.ndim != 2 or v.shape[0] == 0:
        raise ValueError("embed_line needs at least one vector")
    if method not in ("auto", "exhaustive", "mst"):
        raise ValueError(f"unknown line-embedding method {method!r}")
    _, first, inverse = np.unique(v, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    keep = np.sort(first)
    # relabel unique rows by first occurrence so index 0 stays the walk root
    relabel = np.empty(keep.size, dtype=int)
    relabel[np.argsort(first)] = np.arange(keep.size)
    inverse = relabel[inverse]
    distinct = v[keep]
    m = distinct.shape[0]

    if m == 1:
        return LineEmbedding(np.zeros(v.shape[0]), 1.0, 1.0, True, (int(keep[0]),), "trivial")

    dist = _euclid(distinct)
    if method == "exhaustive" or (method == "auto" and m <= EXHAUSTIVE_MAX):
        order = _exhaustive_order(dist)
        used = "exhaustive"
    else:
        order = mst_preorder(dist)
        used = "mst"
    positions, ratios = _layout(dist, order.reshape(1, -1))
    positions, ratios = positions[0], ratios[0]
    scale = SAFETY / float(ratios.min())
    positions = positions * scale
    ratios = ratios * scale
    lo, hi = float(ratios.min()), float(ratios.max())
    return LineEmbedding(
        positions[inverse],
        hi,
        lo,
        lo >= 1.0 - 1e-12,
        tuple(int(keep[i]) for i in order),
        used,
    )


def _check_epsilon(epsilon):
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")


def required_separation(n: int, epsilon: float) -> float:
    """The separation ``ln(12 n) / eps`` under which plane embedding is claimed."""
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_epsilon(epsilon)
    return math.log(12 * n) / epsilon


def conservative_separation(lipschitz: float, epsilon: float) -> float:
    """``(2 ln L + ln 2) / eps``: the separation that provably gives distortion ``<= 1 + eps``."""
    _check_epsilon(epsilon)
    if not lipschitz >= 1.0 - 1e-12:
        raise ValueError(f"a non-contracting map has L >= 1, got {lipschitz!r}")
    return additive_gap(lipschitz) / epsilon


def additive_gap(lipschitz: float) -> float:
    """Largest possible ``d(g(p1), g(p2)) - d(p1, p2)`` for a non-contracting line map."""
    return 2.0 * math.log(max(lipschitz, 1.0)) + math.log(2.0)


def min_separation(ps: PointSet) -> float:
    """Smallest distance between two (index-)distinct points of ``ps``."""
    if len(ps) < 2:
        raise ValueError("min_separation needs at least two points")
    d = pairwise_distances(ps)
    return float(np.min(d[np.triu_indices(len(ps), k=1)]))


@dataclass
class PlaneEmbeddingResult:
    embedded: PointSet
    line: LineEmbedding
    min_separation: float
    required_separation: float
    conservative_separation: float
    measured_distortion: float
    certified: bool
    report: DistortionReport
    epsilon: float

    @property
    def additive_bound(self) -> float:
        return additive_gap(self.line.lipschitz)


def embed_plane(ps: PointSet, epsilon: float, method: str = "auto") -> PlaneEmbeddingResult:
    """Map ``ps`` into the hyperbolic plane as ``(z, f(x))`` with ``f`` from :func:`embed_line`.

    The result is certified when the line map is non-contracting and the set
    is at least ``conservative_separation`` apart. A certified result has
    been checked pair by pair against ``D <= d' <= D + 2 ln L + ln 2`` and
    against ``distortion <= 1 + eps``; failing either raises
    :class:`~hyperjl.reduction.CertificateError`. Poorly separated sets are
    still embedded, just not certified.
    """
    if len(ps) < 2:
        raise ValueError("embed_plane needs at least two points")
    _check_epsilon(epsilon)
    line = embed_line(ps.x, method=method)
    embedded = PointSet(ps.z, line.positions.reshape(-1, 1))
    d_in = pairwise_distances(ps)
    d_out = pairwise_distances(embedded)
    report = distortion(d_in, d_out)
    sep = float(np.min(d_in[np.triu_indices(len(ps), k=1)]))
    nominal = required_separation(len(ps), epsilon)
    conservative = conservative_separation(line.lipschitz, epsilon)
    measured = report.distortion if report.distortion is not None else 1.0

    certified = line.noncontracting_ok and sep >= conservative
    if certified:
        gap = additive_gap(line.lipschitz)
        excess = d_out - d_in
        if np.any(excess < -SLACK) or np.any(excess > gap + SLACK):
            raise CertificateError(f"plane embedding breaks D <= d' <= D + {gap!r}")
        if not report.valid or measured > 1.0 + epsilon:
            raise CertificateError(f"plane embedding has distortion {measured!r} > {1 + epsilon!r}")
    return PlaneEmbeddingResult(
        embedded, line, sep, nominal, conservative, measured, bool(certified), report, epsilon
    )


def separated_instance(
    n: int,
    dim: int,
    epsilon: float,
    seed: int = 0,
    jitter: float = 0.0,
    margin: float = 1e-9,
) -> tuple[PointSet, float]:
    """A set from :func:`~hyperjl.harness.gen_separated` spaced for certification.

    The line map's ``L`` is unknown until the set exists, so the set is
    generated at ``L = 1``, ``L`` is measured, and it is generated once more
    at ``conservative_separation(L, eps) * (1 + margin)``. Returns the set
    and the separation used.
    """
    delta = conservative_separation(1.0, epsilon) * (1.0 + margin)
    for _ in range(2):
        ps = gen_separated(n, dim, delta, seed=seed, jitter=jitter)
        needed = conservative_separation(embed_line(ps.x).lipschitz, epsilon)
        if min_separation(ps) >= needed:
            return ps, delta
        delta = needed * (1.0 + margin)
    return gen_separated(n, dim, delta, seed=seed, jitter=jitter), delta
