"""Random consistent matrices and their multiplicative perturbation.

Generating inconsistent matrices by rejection is hopeless (the acceptance
region is far too small), so the pipeline is constructive: draw a weight
vector, form the exactly consistent matrix of its quotients, then multiply
every upper-triangle entry by an independent randomizing multiplier
1 + sign * rho * D with rho uniform on [0, 1) and an equiprobable sign.
The lower triangle is set to exact reciprocals, so the result stays
reciprocal to machine precision and equals the consistent matrix at D = 0.

Draw order per trial is fixed so that streams can be replayed:

1. n uniforms, one per weight, mapped log-uniformly onto [1/M, M];
2. one (rho, sign) uniform pair per upper-triangle entry, row-major.

Because the weight draws always consume exactly n uniforms, two trials that
share (seed, cell, index) but differ in the weight scale M see identical
multiplier streams. The perturbed matrices are then diagonally similar,
which makes eigenvalues and triad ratios of a trial independent of M.

Trials are independent by construction (one counter-based stream each), so
generation parallelizes with no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .matrices import MAX_ORDER, MIN_ORDER, from_weights
from .rng import TrialStream

DEFAULT_SCALE_MAX = 3.0


@dataclass(frozen=True)
class PerturbationSpec:
    """Deviation and weight-scale bound for one experiment cell."""

    deviation: float
    scale_max: float = DEFAULT_SCALE_MAX

    def __post_init__(self):
        if not 0.0 <= self.deviation < 1.0:
            raise ParameterError(f"deviation must lie in [0, 1), got {self.deviation}")
        if not self.scale_max > 1.0:
            raise ParameterError(f"scale_max must be > 1, got {self.scale_max}")


@dataclass(frozen=True)
class GeneratedInstance:
    """One trial's ground truth and its perturbed observation."""

    base_weights: np.ndarray
    consistent: np.ndarray
    perturbed: np.ndarray


def randomizing_multiplier(deviation: float, stream: TrialStream) -> float:
    """One multiplier 1 + sign * rho * deviation, in (1 - D, 1 + D].

    Consumes exactly two draws: rho, then the sign.
    """
    if not 0.0 <= deviation < 1.0:
        raise ParameterError(f"deviation must lie in [0, 1), got {deviation}")
    rho = stream.next_double()
    sign = 1.0 if stream.next_double() < 0.5 else -1.0
    return 1.0 + sign * (rho * deviation)


def gen_consistent(n: int, scale_max: float, stream: TrialStream):
    """Draw weights log-uniformly from [1/M, M] and build their matrix.

    Log-uniform weights make w and 1/w identically distributed, so the
    entry distribution is symmetric under transposition.
    """
    if not MIN_ORDER <= int(n) <= MAX_ORDER:
        raise ParameterError(f"order must be in [{MIN_ORDER}, {MAX_ORDER}], got {n}")
    if not scale_max > 1.0:
        raise ParameterError(f"scale_max must be > 1, got {scale_max}")
    log_m = math.log(scale_max)
    w = np.array([math.exp((2.0 * stream.next_double() - 1.0) * log_m) for _ in range(int(n))])
    return w, from_weights(w)


def perturb(consistent: np.ndarray, deviation: float, stream: TrialStream) -> np.ndarray:
    """Multiply each upper-triangle entry by an independent multiplier.

    The lower triangle is overwritten with exact reciprocals and the
    diagonal is left at 1, so the output is reciprocal for any deviation
    and equals the input exactly at deviation 0.
    """
    if not 0.0 <= deviation < 1.0:
        raise ParameterError(f"deviation must lie in [0, 1), got {deviation}")
    c = np.asarray(consistent, dtype=float)
    n = c.shape[0]
    a = np.eye(n)
    for i in range(n - 1):
        for j in range(i + 1, n):
            v = c[i, j] * randomizing_multiplier(deviation, stream)
            a[i, j] = v
            a[j, i] = 1.0 / v
    a.flags.writeable = False
    return a


def generate_instance(n: int, deviation: float, scale_max: float,
                      stream: TrialStream) -> GeneratedInstance:
    """Full draw sequence of one trial: weights first, then multipliers."""
    w, c = gen_consistent(n, scale_max, stream)
    p = perturb(c, deviation, stream)
    return GeneratedInstance(base_weights=w, consistent=c, perturbed=p)
