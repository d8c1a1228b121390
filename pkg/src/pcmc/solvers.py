"""Weight estimation: geometric means and the principal eigenvector.

Both solvers return vectors normalized to unit sum. The eigenvector is
computed by power iteration from the all-ones start vector, which is
strictly positive and therefore converges to the Perron vector of any
positive matrix. The eigenvalue estimate is the Rayleigh quotient and the
stopping test is the infinity norm of the eigen-residual, checked against
the vector that is actually returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidEntryError

EV_TOL = 1e-12
EV_MAX_ITER = 10_000


@dataclass(frozen=True)
class EvResult:
    """Principal eigenpair of a positive reciprocal matrix."""

    solution: np.ndarray
    lambda_max: float
    iterations: int
    residual: float


def normalize(v) -> np.ndarray:
    """Scale a positive vector to unit sum."""
    v = np.asarray(v, dtype=float).ravel()
    if not np.all(v > 0.0) or not np.all(np.isfinite(v)):
        raise InvalidEntryError("vector components must be finite and > 0")
    return v / v.sum()


def solve_gm(a: np.ndarray) -> np.ndarray:
    """Normalized row geometric means of a positive reciprocal matrix.

    For a consistent matrix this recovers the generating weights exactly
    (up to normalization).
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    g = np.prod(a, axis=1) ** (1.0 / n)
    return g / g.sum()


def solve_ev(a: np.ndarray, tol: float = EV_TOL, max_iter: int = EV_MAX_ITER) -> EvResult:
    """Dominant eigenpair by power iteration with L1 renormalization.

    Raises :class:`ConvergenceError` carrying the last residual if the
    eigen-residual does not fall below ``tol`` within ``max_iter`` sweeps.
    """
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    x = np.full(n, 1.0 / n)
    residual = np.inf
    for it in range(1, max_iter + 1):
        y = a @ x
        lam = float(x @ y) / float(x @ x)
        residual = float(np.abs(y - lam * x).max())
        if residual <= tol:
            return EvResult(solution=x, lambda_max=lam, iterations=it, residual=residual)
        x = y / y.sum()
    raise ConvergenceError(
        f"power iteration stalled at residual {residual:.3e} after {max_iter} iterations",
        residual=residual,
        iterations=max_iter,
    )
