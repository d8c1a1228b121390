"""Reconstruction of a matrix from a solution and the two accuracy metrics.

The distance between a matrix and the consistent matrix reconstructed from
a solution vector measures the accuracy of that solution. Distances are
taken on raw entries over all n^2 positions, diagonal and both triangles
included; the scaled Euclidean form divides by n^2 so it is comparable to
the maximum-difference (Tchebychev) form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .matrices import from_weights
from .solvers import normalize


@dataclass(frozen=True)
class DistancePair:
    """Both metrics for one (given, reconstructed) matrix pair."""

    euclid_mod: float
    cheb: float


def reconstruct(solution) -> np.ndarray:
    """Consistent matrix of quotients s_i / s_j.

    Scale invariant: a normalized and an unnormalized solution reconstruct
    the same matrix.
    """
    return from_weights(normalize(solution))


def _check_pair(a: np.ndarray, b: np.ndarray):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ShapeError(f"matrix shapes differ: {a.shape} vs {b.shape}")
    return a, b


def dist_euclid_mod(a: np.ndarray, b: np.ndarray) -> float:
    """Square root of the summed squared entry differences, divided by n^2."""
    a, b = _check_pair(a, b)
    n = a.shape[0]
    d = a - b
    return float(np.sqrt((d * d).sum())) / (n * n)


def dist_cheb(a: np.ndarray, b: np.ndarray) -> float:
    """Largest absolute entry difference (infinity metric)."""
    a, b = _check_pair(a, b)
    return float(np.abs(a - b).max())


def distance_pair(a: np.ndarray, b: np.ndarray) -> DistancePair:
    return DistancePair(euclid_mod=dist_euclid_mod(a, b), cheb=dist_cheb(a, b))
