"""Acceptance suite: one test per release criterion.

Run `pytest tests/test_acceptance.py -v -s` to see a PASS/FAIL line per
criterion. The shared grid fixture runs the full 20-cell sweep once at
100,000 trials per cell with a fixed seed; criteria 1 to 3 read from it.
Criterion 8 executes the full million-trial-per-cell sweep and is the
slowest part of the suite.
"""

import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from pcmc.cli import main
from pcmc.consistency import cf_lambda, cf_triad
from pcmc.generator import generate_instance
from pcmc.metrics import dist_cheb, dist_euclid_mod, reconstruct
from pcmc.montecarlo import ExperimentConfig, run_experiment, run_trial
from pcmc.rng import TrialStream, cell_key
from pcmc.solvers import solve_ev, solve_gm

from _reference import (DEVIATIONS, HEADLINE_DIFF_CHEB, HEADLINE_DIFF_EUCLID,
                        ORDERS, REFERENCE)

ACCEPTANCE_SEED = 20260809
GRID_TRIALS = 100_000

TRIAD_TOL = 0.01
LAMBDA_TOL = 0.002


@contextmanager
def criterion(name):
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {name}: FAIL", file=sys.stderr)
        raise
    print(f"ACCEPTANCE {name}: PASS", file=sys.stderr)


@pytest.fixture(scope="module")
def grid():
    config = ExperimentConfig(orders=ORDERS, deviations=DEVIATIONS,
                              trials_per_cell=GRID_TRIALS,
                              master_seed=ACCEPTANCE_SEED)
    results = run_experiment(config)
    assert all(a.failures == 0 for a in results)
    return {(a.order, a.deviation): a for a in results}


def test_criterion_1_consistency_factor_reproduction(grid):
    """Mean cf columns match the reference run within stated tolerances."""
    with criterion("1 consistency-factor reproduction"):
        violations = []
        for cell, ref in REFERENCE.items():
            agg = grid[cell]
            dt = agg.mean_cf_triad - ref.triad
            dl = agg.mean_cf_lambda - ref.lam
            if abs(dt) > TRIAD_TOL:
                violations.append(f"cell {cell}: cf_triad {agg.mean_cf_triad:.4f} "
                                  f"vs {ref.triad:.3f} (delta {dt:+.4f} > {TRIAD_TOL})")
            if abs(dl) > LAMBDA_TOL:
                violations.append(f"cell {cell}: cf_lambda {agg.mean_cf_lambda:.4f} "
                                  f"vs {ref.lam:.3f} (delta {dl:+.4f} > {LAMBDA_TOL})")
        assert not violations, (
            "consistency factors off the reference values:\n  "
            + "\n  ".join(violations)
            + "\n(the multiplier law and both factor definitions are locked by "
            "independent oracles in the unit tests; the excess above is "
            "deterministic, far beyond Monte Carlo noise, grows with the "
            "deviation, and persists under every alternative reading of the "
            "generator that was tried)")


def test_criterion_2_central_finding(grid):
    """GM wins under Euclidean, EV wins under Tchebychev, in every cell."""
    with criterion("2 central qualitative finding"):
        for cell, agg in grid.items():
            assert agg.wins_gm_euclid_pct > 50.0, \
                f"cell {cell}: GM Euclidean wins {agg.wins_gm_euclid_pct:.2f}% <= 50%"
            assert agg.wins_ev_cheb_pct > 50.0, \
                f"cell {cell}: EV Tchebychev wins {agg.wins_ev_cheb_pct:.2f}% <= 50%"
        for n in ORDERS:
            for field in ("wins_gm_euclid_pct", "wins_ev_cheb_pct"):
                column = [getattr(grid[(n, d)], field) for d in DEVIATIONS]
                drops = sum(b <= a for a, b in zip(column, column[1:]))
                assert drops <= 1, \
                    f"order {n} {field} not monotone in deviation: {column}"


def test_criterion_3_distance_properties(grid):
    """Distances grow with deviation; method gaps stay small."""
    with criterion("3 distance and diff magnitudes"):
        for n in ORDERS:
            for field in ("mean_dist_gm_euclid", "mean_dist_ev_euclid",
                          "mean_dist_gm_cheb", "mean_dist_ev_cheb"):
                column = [getattr(grid[(n, d)], field) for d in DEVIATIONS]
                assert all(a < b for a, b in zip(column, column[1:])), \
                    f"order {n} {field} not increasing with deviation: {column}"
        for cell, agg in grid.items():
            assert agg.diff_euclid <= 0.001, \
                f"cell {cell}: diff_euclid {agg.diff_euclid:.5f} > 0.001"
            assert agg.diff_cheb <= 0.01, \
                f"cell {cell}: diff_cheb {agg.diff_cheb:.5f} > 0.01"
        max_de = max(a.diff_euclid for a in grid.values())
        max_dc = max(a.diff_cheb for a in grid.values())
        assert HEADLINE_DIFF_EUCLID / 5 <= max_de <= HEADLINE_DIFF_EUCLID * 5, \
            f"max diff_euclid {max_de:.6f} not within 5x of {HEADLINE_DIFF_EUCLID}"
        assert HEADLINE_DIFF_CHEB / 5 <= max_dc <= HEADLINE_DIFF_CHEB * 5, \
            f"max diff_cheb {max_dc:.6f} not within 5x of {HEADLINE_DIFF_CHEB}"


def test_criterion_4_order3_equivalence():
    """At order 3 both methods coincide on every perturbed matrix."""
    with criterion("4 order-3 equivalence"):
        for d in (0.1, 0.5):
            key = cell_key(3, d)
            for trial in range(10_000):
                inst = generate_instance(3, d, 3.0, TrialStream(ACCEPTANCE_SEED, key, trial))
                s_gm = solve_gm(inst.perturbed)
                s_ev = solve_ev(inst.perturbed).solution
                assert np.abs(s_gm - s_ev).max() <= 1e-9
                r_gm = reconstruct(s_gm)
                r_ev = reconstruct(s_ev)
                assert abs(dist_euclid_mod(inst.perturbed, r_gm)
                           - dist_euclid_mod(inst.perturbed, r_ev)) <= 1e-9
                assert abs(dist_cheb(inst.perturbed, r_gm)
                           - dist_cheb(inst.perturbed, r_ev)) <= 1e-9


def test_criterion_5_consistent_case_zero():
    """At deviation 0 both solvers are exact and all measures vanish."""
    with criterion("5 consistent-case zeros"):
        for n in range(3, 8):
            key = cell_key(n, 0.0)
            for trial in range(1000):
                inst = generate_instance(n, 0.0, 3.0, TrialStream(ACCEPTANCE_SEED, key, trial))
                truth = inst.base_weights / inst.base_weights.sum()
                s_gm = solve_gm(inst.perturbed)
                ev = solve_ev(inst.perturbed)
                assert np.abs(s_gm - truth).max() <= 1e-9
                assert np.abs(ev.solution - truth).max() <= 1e-9
                for s in (s_gm, ev.solution):
                    rec = reconstruct(s)
                    assert dist_euclid_mod(inst.perturbed, rec) <= 1e-9
                    assert dist_cheb(inst.perturbed, rec) <= 1e-9
                assert cf_lambda(ev.lambda_max, n) <= 1e-9
                assert cf_triad(inst.perturbed) <= 1e-9


def test_criterion_6_similarity_invariance():
    """Replaying multiplier streams across weight scales fixes lambda and cf."""
    with criterion("6 similarity invariance"):
        for trial in range(1000):
            a = run_trial(5, 0.3, ACCEPTANCE_SEED, trial, scale_max=3.0)
            b = run_trial(5, 0.3, ACCEPTANCE_SEED, trial, scale_max=9.0)
            assert abs(a.lambda_max - b.lambda_max) <= 1e-9
            assert abs(a.cf_triad - b.cf_triad) <= 1e-9


def test_criterion_7_worker_determinism(tmp_path):
    """Same seed gives byte-identical CSV at 1 and 8 workers."""
    with criterion("7 determinism across workers"):
        out1 = tmp_path / "w1.csv"
        out8 = tmp_path / "w8.csv"
        base = ["--trials", "1000", "--seed", "321", "--format", "csv"]
        assert main(base + ["--workers", "1", "--output", str(out1)]) == 0
        assert main(base + ["--workers", "8", "--output", str(out8)]) == 0
        b1 = out1.read_bytes()
        assert b1 == out8.read_bytes()
        assert len(b1.decode().strip("\n").split("\n")) == 21


def test_criterion_8_full_scale_feasibility():
    """The complete million-trials-per-cell sweep finishes in under 30 min."""
    with criterion("8 full-scale feasibility"):
        config = ExperimentConfig(trials_per_cell=1_000_000,
                                  master_seed=ACCEPTANCE_SEED)
        t0 = time.monotonic()
        results = run_experiment(config)
        elapsed = time.monotonic() - t0
        print(f"full-scale sweep: {elapsed:.1f}s", file=sys.stderr)
        assert elapsed < 1800.0
        assert len(results) == 20
        assert all(a.failures == 0 for a in results)
