"""Pairwise comparison matrices: construction and structural predicates.

Matrices are plain float numpy arrays. The constructors here are the only
supported way to build one, and they guarantee a unit diagonal and an
exactly reciprocal lower triangle. All values are immutable by convention;
constructors return fresh arrays with the writeable flag cleared.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import InvalidEntryError, ShapeError

MIN_ORDER = 3
MAX_ORDER = 7

RECIPROCITY_TOL = 1e-12
CONSISTENCY_TOL = 1e-9


def _check_order(n: int) -> int:
    n = int(n)
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise ShapeError(f"order must be in [{MIN_ORDER}, {MAX_ORDER}], got {n}")
    return n


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def from_upper_triangle(n: int, upper) -> np.ndarray:
    """Build a reciprocal matrix from its upper triangle.

    ``upper`` holds the entries a_ij for i < j in row-major order; the
    diagonal is set to 1 and the lower triangle to exact reciprocals.
    """
    n = _check_order(n)
    upper = np.asarray(upper, dtype=float).ravel()
    want = n * (n - 1) // 2
    if upper.size != want:
        raise ShapeError(f"expected {want} upper-triangle entries for order {n}, got {upper.size}")
    if not np.all(upper > 0.0) or not np.all(np.isfinite(upper)):
        raise InvalidEntryError("upper-triangle entries must be finite and > 0")
    a = np.eye(n)
    iu, ju = np.triu_indices(n, k=1)
    a[iu, ju] = upper
    a[ju, iu] = 1.0 / upper
    return _freeze(a)


def from_weights(weights) -> np.ndarray:
    """Consistent matrix of quotients a_ij = w_i / w_j.

    The result is the same for ``weights`` and ``c * weights`` for any
    positive scalar c.
    """
    w = np.asarray(weights, dtype=float).ravel()
    n = _check_order(w.size)
    if not np.all(w > 0.0) or not np.all(np.isfinite(w)):
        raise InvalidEntryError("weights must be finite and > 0")
    a = np.eye(n)
    iu, ju = np.triu_indices(n, k=1)
    upper = w[iu] * (1.0 / w)[ju]
    a[iu, ju] = upper
    a[ju, iu] = 1.0 / upper
    return _freeze(a)


def is_reciprocal(a: np.ndarray, tol: float = RECIPROCITY_TOL) -> bool:
    """True iff a_ij * a_ji is 1 within ``tol`` and the diagonal is 1."""
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    a = np.asarray(a, dtype=float)
    if np.abs(np.diagonal(a) - 1.0).max() > tol:
        return False
    prod = a * a.T
    return bool(np.abs(prod - 1.0).max() <= tol)


def is_consistent(a: np.ndarray, tol: float = CONSISTENCY_TOL) -> bool:
    """True iff a_ij * a_jk = a_ik within ``tol`` over all index triples.

    Assumes a reciprocal input, for which checking ordered triples i<j<k
    is sufficient.
    """
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    for i, j, k in triads(n):
        if abs(a[i, j] * a[j, k] / a[i, k] - 1.0) > tol:
            return False
    return True


def triads(n: int):
    """All index triples i < j < k below order ``n``, lexicographically.

    There are exactly C(n, 3) of them.
    """
    if int(n) < 3:
        raise ShapeError(f"triads need order >= 3, got {n}")
    return itertools.combinations(range(int(n)), 3)


def triad_count(n: int) -> int:
    return math.comb(int(n), 3)
