"""Inconsistency measures of a reciprocal matrix.

Two scalar factors are provided. The eigenvalue-based factor is
(lambda_max - n) / (n - 1); division by the mean eigenvalue of random
matrices is deliberately not applied, callers who want the strict
consistency ratio can divide by published random-index values themselves.
The triad-based factor scores each triple (i, j, k) by how far the ratio
a_ij * a_jk / a_ik is from 1 in whichever direction is smaller, then
aggregates over triads (worst case by default).

Both factors are invariant under diagonal similarity, so for a perturbed
consistent matrix they depend only on the perturbation multipliers and not
on the underlying weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .matrices import triads
from .solvers import EV_MAX_ITER, EV_TOL, solve_ev

TRIAD_AGGREGATIONS = ("max", "mean")


@dataclass(frozen=True)
class ConsistencyReport:
    """Both inconsistency factors for one matrix."""

    cf_lambda: float
    cf_triad: float


def cf_lambda(lambda_max: float, n: int) -> float:
    """Eigenvalue-based factor (lambda_max - n) / (n - 1), floored at 0.

    The floor absorbs the tiny negative numerators that power-iteration
    noise can produce on consistent matrices.
    """
    if int(n) < 3:
        raise ShapeError(f"order must be >= 3, got {n}")
    v = (float(lambda_max) - n) / (n - 1)
    return v if v > 0.0 else 0.0


def triad_inconsistency(aij: float, ajk: float, aik: float) -> float:
    """Score of a single triad, 0 iff a_ij * a_jk = a_ik, always < 1."""
    r = aij * ajk / aik
    return min(abs(1.0 - r), abs(1.0 - 1.0 / r))


def cf_triad(a: np.ndarray, agg: str = "max") -> float:
    """Triad-based factor aggregated over all triples i < j < k."""
    if agg not in TRIAD_AGGREGATIONS:
        raise ValueError(f"agg must be one of {TRIAD_AGGREGATIONS}, got {agg!r}")
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    values = [triad_inconsistency(a[i, j], a[j, k], a[i, k]) for i, j, k in triads(n)]
    return max(values) if agg == "max" else sum(values) / len(values)


def report(a: np.ndarray, agg: str = "max", ev_tol: float = EV_TOL,
           ev_max_iter: int = EV_MAX_ITER) -> ConsistencyReport:
    """Compute both factors; runs the eigenvector solver for lambda_max."""
    a = np.asarray(a, dtype=float)
    ev = solve_ev(a, tol=ev_tol, max_iter=ev_max_iter)
    return ConsistencyReport(
        cf_lambda=cf_lambda(ev.lambda_max, a.shape[0]),
        cf_triad=cf_triad(a, agg=agg),
    )
