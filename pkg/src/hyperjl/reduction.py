"""Dimension reduction of hyperbolic point sets: ``g(z, x) = (z, f(x))``.

``f`` is a calibrated JL map on the Euclidean parts. Since the distance is an
increasing function of ``|x1 - x2|`` once the heights are fixed, a map with
``|x1 - x2| <= |f(x1) - f(x2)| <= (1 + eps)|x1 - x2|`` gives, for every pair
at distance ``D``::

    D <= d(g(p1), g(p2)) <= D + 2 eps tanh(D / 2) <= (1 + 3 eps / (1 + D)) D

:func:`reduce` checks both bounds on every pair and refuses to return a
result that breaks them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from hyperjl.geometry import PointSet, gap_matrix, stable_acosh1p
from hyperjl.projection import LinearMap, apply, project_until_valid

SLACK = 1e-9


class CertificateError(AssertionError):
    """A reduction produced a pair outside the proven bounds."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


def thm1_upper(delta, epsilon):
    """``(1 + 3 eps / (1 + delta)) * delta``; works elementwise on arrays."""
    delta = np.asarray(delta, dtype=np.float64)
    if np.any(delta < 0):
        raise ValueError("delta must be nonnegative")
    out = (1.0 + 3.0 * epsilon / (1.0 + delta)) * delta
    return float(out) if out.ndim == 0 else out


def tanh_upper(delta, epsilon):
    """The sharper intermediate bound ``delta + 2 eps tanh(delta / 2)``."""
    delta = np.asarray(delta, dtype=np.float64)
    out = delta + 2.0 * epsilon * np.tanh(delta / 2.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PairRecord:
    i: int
    j: int
    delta_in: float
    delta_out: float
    upper_bound: float
    sharp_bound: float

    @property
    def lower_ok(self) -> bool:
        return self.delta_out >= self.delta_in - SLACK

    @property
    def upper_ok(self) -> bool:
        return self.delta_out <= self.upper_bound + SLACK

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok

    @property
    def slack(self) -> float:
        """Distance to the nearer bound; negative on a violation."""
        return min(self.delta_out - self.delta_in, self.upper_bound - self.delta_out)


def _distances(ps: PointSet) -> np.ndarray:
    return stable_acosh1p(gap_matrix(ps.z, ps.x))


def certify(input: PointSet, output: PointSet, epsilon: float) -> list[PairRecord]:
    """Per-pair records comparing ``output`` with ``input`` against the reduction bound.

    Raises ``ValueError`` if the sets differ in size or in any height.
    """
    if len(input) != len(output):
        raise ValueError(f"point count mismatch: {len(input)} vs {len(output)}")
    if not np.array_equal(input.z, output.z):
        bad = int(np.flatnonzero(input.z != output.z)[0])
        raise ValueError(f"height mismatch at index {bad}")
    d_in = _distances(input)
    d_out = _distances(output)
    iu, ju = np.triu_indices(len(input), k=1)
    din = d_in[iu, ju]
    dout = d_out[iu, ju]
    upper = thm1_upper(din, epsilon)
    sharp = tanh_upper(din, epsilon)
    return [
        PairRecord(int(a), int(b), float(p), float(q), float(u), float(s))
        for a, b, p, q, u, s in zip(iu, ju, din, dout, upper, sharp)
    ]


@dataclass
class ReductionResult:
    reduced: PointSet
    map: LinearMap
    certificate: list[PairRecord]
    epsilon: float
    attempts: int = 1
    seed: Optional[int] = None

    @property
    def violations(self) -> list[PairRecord]:
        return [r for r in self.certificate if not r.ok]

    @property
    def certified(self) -> bool:
        return not self.violations


def reduce(
    input: PointSet,
    epsilon: float,
    seed: int,
    max_attempts: int = 16,
    method: str = "dense-gaussian",
    target: Optional[int] = None,
    constant: float = 8.0,
) -> ReductionResult:
    """Reduce the x-dimension of ``input`` and certify every pair.

    The JL loop runs on the distinct Euclidean parts; duplicates are mapped
    by index so they stay bit-identical. Raises
    :class:`~hyperjl.projection.ProjectionError` when the loop gives up and
    :class:`CertificateError` if any pair breaks the bound.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    unique, inverse = np.unique(input.x, axis=0, return_inverse=True)
    fmap, _, attempts = project_until_valid(
        unique, epsilon, seed, max_attempts=max_attempts, method=method, target=target, constant=constant
    )
    projected = apply(fmap, unique)[np.asarray(inverse).reshape(-1)]
    reduced = PointSet(input.z, projected)
    result = ReductionResult(reduced, fmap, certify(input, reduced, epsilon), epsilon, attempts, seed)
    bad = result.violations
    if bad:
        worst = min(bad, key=lambda r: r.slack)
        raise CertificateError(
            f"{len(bad)} pair(s) violate the reduction bound; worst ({worst.i}, {worst.j}) "
            f"delta_in={worst.delta_in!r} delta_out={worst.delta_out!r} bound={worst.upper_bound!r}",
            bad,
        )
    return result
