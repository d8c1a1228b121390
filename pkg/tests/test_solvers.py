"""Solver tests with independent high-precision oracles."""

import mpmath
import numpy as np
import pytest

from pcmc.errors import ConvergenceError, InvalidEntryError
from pcmc.generator import generate_instance
from pcmc.matrices import from_upper_triangle, from_weights
from pcmc.rng import TrialStream, cell_key
from pcmc.solvers import normalize, solve_ev, solve_gm

mpmath.mp.dps = 50


def _gm_oracle_282():
    """Row geometric means of upper (2, 8, 2) at 50 digits."""
    rows = [mpmath.mpf(16), mpmath.mpf(1), mpmath.mpf(1) / 16]
    roots = [mpmath.cbrt(p) for p in rows]
    total = mpmath.fsum(roots)
    return [float(r / total) for r in roots]


def _lambda_oracle(a):
    """Largest real root of the characteristic polynomial of a 3x3 matrix."""
    m = mpmath.matrix(a.tolist())
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    minors = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
              + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
              + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
    det = mpmath.det(m)
    roots = mpmath.polyroots([1, -tr, minors, -det])
    return float(max(r.real for r in roots if abs(r.imag) < 1e-30))


def test_normalize_examples():
    assert np.allclose(normalize((2, 1, 1)), (0.5, 0.25, 0.25), rtol=0, atol=0)
    v = np.array([0.3, 0.45, 0.25])
    assert np.abs(normalize(v) - v).max() <= 1e-15
    for c in (0.1, 1.0, 42.0):
        assert np.allclose(normalize([c] * 4), [0.25] * 4, rtol=1e-15)


def test_normalize_rejects_nonpositive():
    with pytest.raises(InvalidEntryError):
        normalize((1.0, 0.0, 2.0))
    with pytest.raises(InvalidEntryError):
        normalize((1.0, -3.0))


def test_gm_recovers_consistent_weights():
    a = from_weights((4, 2, 1))
    assert np.abs(solve_gm(a) - np.array([4, 2, 1]) / 7).max() <= 1e-15


def test_gm_all_ones():
    for n in range(3, 8):
        assert np.allclose(solve_gm(np.ones((n, n))), np.full(n, 1 / n), rtol=1e-15)


def test_gm_against_high_precision_oracle():
    a = from_upper_triangle(3, (2, 8, 2))
    expected = _gm_oracle_282()
    got = solve_gm(a)
    assert np.abs(got - expected).max() <= 1e-12
    # five-digit reference values for the same case
    assert got == pytest.approx([0.64336, 0.25532, 0.10132], abs=1e-5)


def test_ev_consistent_case():
    a = from_weights((4, 2, 1))
    res = solve_ev(a)
    assert np.abs(res.solution - np.array([4, 2, 1]) / 7).max() <= 1e-12
    assert res.lambda_max == pytest.approx(3.0, abs=1e-12)
    assert res.residual <= 1e-12


def test_ev_all_ones():
    res = solve_ev(np.ones((5, 5)))
    assert np.allclose(res.solution, np.full(5, 0.2), atol=1e-13)
    assert res.lambda_max == pytest.approx(5.0, abs=1e-12)


def test_ev_lambda_against_characteristic_polynomial():
    a = from_upper_triangle(3, (2, 8, 2))
    res = solve_ev(a)
    assert res.lambda_max == pytest.approx(_lambda_oracle(a), abs=1e-9)
    assert res.lambda_max == pytest.approx(3.0536, abs=1e-4)
    assert np.abs(res.solution - solve_gm(a)).max() <= 1e-9


def test_ev_lambda_oracle_on_random_3x3():
    rng = np.random.default_rng(23)
    for _ in range(25):
        a = from_upper_triangle(3, np.exp(rng.uniform(-2.2, 2.2, 3)))
        assert solve_ev(a).lambda_max == pytest.approx(_lambda_oracle(a), abs=1e-9)


def test_ev_residual_contract():
    rng = np.random.default_rng(5)
    for n in (3, 5, 7):
        for _ in range(20):
            a = from_upper_triangle(n, np.exp(rng.uniform(-1.5, 1.5, n * (n - 1) // 2)))
            res = solve_ev(a, tol=1e-12)
            assert np.abs(a @ res.solution - res.lambda_max * res.solution).max() <= 1e-12
            assert res.solution.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(res.solution > 0)
            assert res.lambda_max >= n - 1e-9


def test_order3_gm_ev_equivalence():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(10_000):
        a = from_upper_triangle(3, np.exp(rng.uniform(np.log(1 / 9), np.log(9), 3)))
        gap = np.abs(solve_gm(a) - solve_ev(a).solution).max()
        worst = max(worst, gap)
    assert worst <= 1e-9


def test_consistent_recovery_all_orders():
    rng = np.random.default_rng(41)
    for n in range(3, 8):
        for _ in range(100):
            w = np.exp(rng.uniform(-2, 2, n))
            a = from_weights(w)
            expected = w / w.sum()
            assert np.abs(solve_gm(a) - expected).max() <= 1e-9
            assert np.abs(solve_ev(a).solution - expected).max() <= 1e-9


def test_gm_scale_invariance():
    rng = np.random.default_rng(3)
    w = np.exp(rng.uniform(-1, 1, 5))
    a1 = from_weights(w)
    a2 = from_weights(10.0 * w)
    assert np.abs(solve_gm(a1) - solve_gm(a2)).max() <= 1e-14
    assert np.abs(solve_ev(a1).solution - solve_ev(a2).solution).max() <= 1e-12


def test_eigenvalue_similarity_invariance():
    # Identical multiplier streams over different base weights give
    # diagonally similar matrices, hence equal dominant eigenvalues.
    for trial in range(50):
        a3 = generate_instance(5, 0.3, 3.0, TrialStream(11, cell_key(5, 0.3), trial))
        a9 = generate_instance(5, 0.3, 9.0, TrialStream(11, cell_key(5, 0.3), trial))
        lam3 = solve_ev(a3.perturbed).lambda_max
        lam9 = solve_ev(a9.perturbed).lambda_max
        assert lam3 == pytest.approx(lam9, abs=1e-9)


def test_ev_convergence_error_carries_residual():
    a = from_upper_triangle(3, (2, 8, 2))
    with pytest.raises(ConvergenceError) as err:
        solve_ev(a, tol=1e-12, max_iter=1)
    assert err.value.iterations == 1
    assert err.value.residual > 1e-12


def test_ev_parameter_validation():
    a = np.ones((3, 3))
    with pytest.raises(ValueError):
        solve_ev(a, tol=0.0)
    with pytest.raises(ValueError):
        solve_ev(a, max_iter=0)
