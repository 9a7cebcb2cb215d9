"""Johnson-Lindenstrauss projections calibrated to be non-contracting.

Two realizations are provided:

``dense-gaussian``
    A ``k x d`` matrix with i.i.d. ``N(0, 1/k)`` entries.
``fast-hadamard``
    ``x -> S H D x / sqrt(k)``: random sign flips ``D``, the unnormalized
    Walsh-Hadamard transform ``H`` of order ``d' = 2**ceil(log2 d)`` in
    natural (Sylvester) ordering, and a sample ``S`` of ``k`` distinct rows.
    Inputs are zero-padded to ``d'``.

A plain JL map is two-sided. :func:`calibrate_noncontracting` rescales it so
that no pair of the given vectors gets closer, and :func:`project_until_valid`
retries fresh maps until the calibrated one stretches every pair by at most
``1 + eps``.

All randomness is drawn from Philox streams keyed by ``(seed, attempt, ...)``,
so a map depends only on its spec, never on call order or thread count.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from hyperjl._rng import PROJECTION, stream

METHODS = ("dense-gaussian", "fast-hadamard", "identity")

# multiplicative guard applied on top of the exact calibration factor
SAFETY = 1.0 + 1e-12


class ProjectionError(RuntimeError):
    """Raised when no attempt of the Las Vegas loop passed verification."""

    def __init__(self, message, report=None, attempts=0):
        super().__init__(message)
        self.report = report
        self.attempts = attempts


def _stream(seed: int, *key: int) -> np.random.Generator:
    return stream(seed, PROJECTION, *key)


def _check_epsilon(epsilon):
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")


def next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


@functools.lru_cache(maxsize=None)
def _sylvester(m: int) -> np.ndarray:
    h = np.ones((1, 1))
    while h.shape[0] < m:
        h = np.block([[h, h], [h, -h]])
    h.setflags(write=False)
    return h


def fwht(a: np.ndarray, block: int = 32) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis (natural order).

    The last axis must have power-of-two length. ``H_n`` is the Kronecker
    product of Sylvester blocks of size ``<= block``; each block is applied
    with one BLAS contraction instead of ``log2(block)`` butterfly passes.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[-1]
    if n < 1 or n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    lead = a.shape[:-1]
    sizes = []
    rest = n
    while rest > 1:
        sizes.append(min(block, rest))
        rest //= sizes[-1]
    out = a.reshape(-1, *sizes) if sizes else a.reshape(-1, 1).copy()
    for axis, m in enumerate(sizes, start=1):
        out = np.moveaxis(np.tensordot(out, _sylvester(m), axes=([axis], [0])), -1, axis)
    return np.ascontiguousarray(out).reshape(*lead, n)


def target_dim(n: int, epsilon: float, input_dim: int, constant: float = 8.0) -> int:
    """``min(input_dim, ceil(constant * ln(max(n, 2)) / eps**2))``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if input_dim < 1:
        raise ValueError("input_dim must be >= 1")
    _check_epsilon(epsilon)
    k = math.ceil(constant * math.log(max(n, 2)) / epsilon**2)
    return max(1, min(input_dim, k))


@dataclass(frozen=True)
class ProjectionSpec:
    input_dim: int
    target_dim: int
    epsilon: float
    seed: int
    method: str = "dense-gaussian"
    attempt: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if not 1 <= self.target_dim <= self.input_dim:
            raise ValueError(f"target_dim must lie in [1, {self.input_dim}], got {self.target_dim}")
        if self.method == "identity" and self.target_dim != self.input_dim:
            raise ValueError("the identity map needs target_dim == input_dim")
        _check_epsilon(self.epsilon)
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.attempt < 0:
            raise ValueError("attempt must be >= 0")


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A JL map plus its calibration factor ``scale``.

    Exactly one of ``matrix`` (dense) or ``signs``/``rows`` (fast) is set;
    the identity map carries neither.
    """

    method: str
    input_dim: int
    target_dim: int
    scale: float = 1.0
    matrix: Optional[np.ndarray] = None
    signs: Optional[np.ndarray] = None
    rows: Optional[np.ndarray] = None

    @property
    def order(self) -> int:
        """Hadamard order ``d'`` of the fast path (``input_dim`` otherwise)."""
        return next_pow2(self.input_dim) if self.method == "fast-hadamard" else self.input_dim

    def with_scale(self, scale: float) -> "LinearMap":
        if not scale > 0 or not math.isfinite(scale):
            raise ValueError(f"scale must be positive and finite, got {scale!r}")
        return replace(self, scale=float(scale))

    def materialize(self) -> np.ndarray:
        """The ``k x d`` matrix of the map, scale included."""
        return apply(self, np.eye(self.input_dim)).T

    def __call__(self, vectors):
        return apply(self, vectors)


def make_projection(spec: ProjectionSpec) -> LinearMap:
    """Draw the map described by ``spec``; deterministic in ``(seed, attempt)``."""
    d, k = spec.input_dim, spec.target_dim
    if spec.method == "identity":
        return LinearMap("identity", d, k)
    if spec.method == "dense-gaussian":
        matrix = np.empty((k, d))
        sd = 1.0 / math.sqrt(k)
        for r in range(k):
            matrix[r] = _stream(spec.seed, spec.attempt, 0, r).standard_normal(d) * sd
        matrix.setflags(write=False)
        return LinearMap("dense-gaussian", d, k, matrix=matrix)
    order = next_pow2(d)
    signs = _stream(spec.seed, spec.attempt, 1).choice(np.array([-1.0, 1.0]), size=order)
    rows = np.sort(_stream(spec.seed, spec.attempt, 2).choice(order, size=k, replace=False))
    signs.setflags(write=False)
    rows.setflags(write=False)
    return LinearMap("fast-hadamard", d, k, signs=signs, rows=rows)


def _as_matrix(vectors, dim: int) -> np.ndarray:
    v = np.asarray(vectors, dtype=np.float64)
    if v.ndim == 1:
        v = v.reshape(1, -1)
    if v.ndim != 2 or (v.shape[0] and v.shape[1] != dim):
        raise ValueError(f"expected vectors of dimension {dim}, got array of shape {v.shape}")
    return v.reshape(-1, dim)


def apply(map: LinearMap, vectors) -> np.ndarray:
    """Apply ``map`` to each row of ``vectors``; returns an ``(n, k)`` array."""
    v = _as_matrix(vectors, map.input_dim)
    if map.method == "identity":
        out = v.copy()
    elif map.method == "dense-gaussian":
        out = v @ map.matrix.T
    else:
        padded = np.zeros((v.shape[0], map.order))
        padded[:, : map.input_dim] = v
        out = fwht(padded * map.signs)[:, map.rows] / math.sqrt(map.target_dim)
    if map.scale != 1.0:
        out *= map.scale
    return out


def pair_lengths(v: np.ndarray) -> np.ndarray:
    """Euclidean lengths of all pairs ``i < j``, in row-major condensed order."""
    n = v.shape[0]
    parts = []
    for i in range(n - 1):
        diff = v[i + 1:] - v[i]
        parts.append(np.sqrt(np.sum(diff * diff, axis=1)))
    return np.concatenate(parts) if parts else np.empty(0)


def pair_index(n: int, flat: int) -> tuple[int, int]:
    """Invert the condensed ordering of :func:`pair_lengths`."""
    i = 0
    while flat >= n - 1 - i:
        flat -= n - 1 - i
        i += 1
    return i, i + 1 + flat


def calibrate_noncontracting(map: LinearMap, vectors) -> LinearMap:
    """Rescale ``map`` so no pair of ``vectors`` contracts.

    The new scale is ``scale * SAFETY / rho_min`` with ``rho_min`` the
    smallest ratio ``|f(xi) - f(xj)| / |xi - xj|`` over pairs with distinct
    inputs.
    """
    v = _as_matrix(vectors, map.input_dim)
    before = pair_lengths(v)
    after = pair_lengths(apply(map, v))
    live = before > 0
    if not np.any(live):
        raise ValueError("need at least two distinct vectors to calibrate")
    rho_min = float(np.min(after[live] / before[live]))
    if rho_min == 0.0:
        raise ValueError("map collapses a pair of distinct vectors; cannot calibrate")
    return map.with_scale(map.scale * SAFETY / rho_min)


@dataclass(frozen=True)
class RatioReport:
    """Pair-ratio summary for a map on a finite set.

    ``min_ratio``/``max_ratio`` are ``None`` when there are no pairs with
    distinct inputs.
    """

    min_ratio: Optional[float]
    max_ratio: Optional[float]
    ok: bool
    pair_count: int = 0
    zero_pairs: int = 0
    coincident_ok: bool = True
    argmin_pair: Optional[tuple[int, int]] = None
    argmax_pair: Optional[tuple[int, int]] = None


def verify_one_sided(inputs, outputs, epsilon: float) -> RatioReport:
    """Check ``|xi - xj| <= |f(xi) - f(xj)| <= (1 + eps) |xi - xj|`` on all pairs.

    Tolerances: ``min_ratio >= 1 - 1e-12`` and
    ``max_ratio <= (1 + eps)(1 + 1e-12)``. Pairs with coincident inputs must
    have coincident outputs.
    """
    x = np.asarray(inputs, dtype=np.float64)
    y = np.asarray(outputs, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if y.ndim == 1:
        y = y.reshape(-1, 1)
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"length mismatch: {x.shape[0]} inputs vs {y.shape[0]} outputs")
    n = x.shape[0]
    before = pair_lengths(x)
    after = pair_lengths(y)
    live = before > 0
    zero = ~live
    coincident_ok = bool(np.all(after[zero] == 0))
    if not np.any(live):
        return RatioReport(None, None, coincident_ok, 0, int(zero.sum()), coincident_ok)
    ratios = np.full(before.shape, np.nan)
    ratios[live] = after[live] / before[live]
    lo = int(np.nanargmin(ratios))
    hi = int(np.nanargmax(ratios))
    min_ratio = float(ratios[lo])
    max_ratio = float(ratios[hi])
    ok = coincident_ok and min_ratio >= 1.0 - 1e-12 and max_ratio <= (1.0 + epsilon) * SAFETY
    return RatioReport(
        min_ratio,
        max_ratio,
        bool(ok),
        int(live.sum()),
        int(zero.sum()),
        coincident_ok,
        pair_index(n, lo),
        pair_index(n, hi),
    )


def project_until_valid(
    vectors,
    epsilon: float,
    seed: int,
    max_attempts: int = 16,
    method: str = "dense-gaussian",
    target: Optional[int] = None,
    constant: float = 8.0,
):
    """Draw, calibrate and verify JL maps until one is non-contracting with stretch ``<= 1 + eps``.

    Parameters
    ----------
    vectors : array_like, shape (n, d)
        The Euclidean points to project.
    epsilon : float
        Allowed stretch, in (0, 1).
    seed : int
        Attempt ``a`` draws its map from the stream keyed ``(seed, a)``.
    max_attempts : int
        Number of maps tried before giving up.
    method : {"dense-gaussian", "fast-hadamard"}
    target : int, optional
        Output dimension; defaults to :func:`target_dim`. When it reaches the
        input dimension the identity map is used, which is exact.
    constant : float
        Constant passed to :func:`target_dim`.

    Returns
    -------
    (LinearMap, ndarray, int)
        The calibrated map, the projected vectors, and the number of attempts used.

    Raises
    ------
    ProjectionError
        If every attempt fails verification. ``err.report`` holds the best one.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    _check_epsilon(epsilon)
    v = np.asarray(vectors, dtype=np.float64)
    if v.ndim != 2 or v.shape[0] < 1:
        raise ValueError("vectors must be a nonempty (n, d) array")
    n, d = v.shape
    k = target_dim(n, epsilon, d, constant) if target is None else int(target)
    if k >= d:
        method, k = "identity", d

    has_pairs = np.any(pair_lengths(v) > 0) if n > 1 else False
    best = None
    for attempt in range(max_attempts):
        spec = ProjectionSpec(d, k, epsilon, seed, method, attempt)
        fmap = make_projection(spec)
        if has_pairs:
            try:
                fmap = calibrate_noncontracting(fmap, v)
            except ValueError:
                continue
        out = apply(fmap, v)
        report = verify_one_sided(v, out, epsilon)
        if report.ok:
            return fmap, out, attempt + 1
        if best is None or (report.max_ratio or math.inf) < (best.max_ratio or math.inf):
            best = report
    raise ProjectionError(
        f"no valid projection in {max_attempts} attempts (best max ratio "
        f"{best.max_ratio if best else None!r}, allowed {1 + epsilon})",
        report=best,
        attempts=max_attempts,
    )
