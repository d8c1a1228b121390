"""Pairwise comparison Monte Carlo: GM vs EV solution accuracy.

Library and batch CLI for the pairwise-comparison inference pipeline:
reciprocal matrix construction, geometric-means and eigenvector solutions,
consistency factors, reconstruction distances, and a seeded Monte Carlo
sweep comparing the two methods across matrix orders and perturbation
deviations.
"""

__version__ = "0.1.0"

from .consistency import ConsistencyReport, cf_lambda, cf_triad
from .errors import (ConvergenceError, EmptyCellError, InvalidEntryError,
                     ParameterError, ShapeError)
from .generator import (DEFAULT_SCALE_MAX, GeneratedInstance, PerturbationSpec,
                        gen_consistent, generate_instance, perturb,
                        randomizing_multiplier)
from .matrices import (from_upper_triangle, from_weights, is_consistent,
                       is_reciprocal, triads)
from .metrics import DistancePair, dist_cheb, dist_euclid_mod, distance_pair, reconstruct
from .montecarlo import (CellAggregate, ExperimentConfig, TrialRecord, aggregate,
                         rank_reversal, run_experiment, run_trial)
from .rng import TrialStream, cell_key
from .solvers import EvResult, normalize, solve_ev, solve_gm

__all__ = [
    "__version__",
    "ConsistencyReport", "cf_lambda", "cf_triad",
    "ConvergenceError", "EmptyCellError", "InvalidEntryError",
    "ParameterError", "ShapeError",
    "DEFAULT_SCALE_MAX", "GeneratedInstance", "PerturbationSpec",
    "gen_consistent", "generate_instance", "perturb", "randomizing_multiplier",
    "from_upper_triangle", "from_weights", "is_consistent", "is_reciprocal", "triads",
    "DistancePair", "dist_cheb", "dist_euclid_mod", "distance_pair", "reconstruct",
    "CellAggregate", "ExperimentConfig", "TrialRecord", "aggregate",
    "rank_reversal", "run_experiment", "run_trial",
    "TrialStream", "cell_key",
    "EvResult", "normalize", "solve_ev", "solve_gm",
]
