"""Pure Python trial kernel.

Reference implementation of the per-trial pipeline: draw an instance,
solve it both ways, reconstruct, and score. The compiled kernel in
``_mc_kernel.pyx`` mirrors this file statement for statement; keep the
arithmetic, the operation order, and the draw order in exact sync, both
kernels must produce bit-identical results. Change one only together with
the other.
"""

from __future__ import annotations

from math import exp, log, sqrt

from .rng import TrialStream

MAXN = 7


def _rank_order(v, n, idx):
    """Indices of v in descending value order, ties broken by lower index."""
    for i in range(n):
        idx[i] = i
    for a in range(1, n):
        key = idx[a]
        kv = v[key]
        b = a - 1
        while b >= 0:
            cur = idx[b]
            cv = v[cur]
            if cv < kv or (cv == kv and cur > key):
                idx[b + 1] = cur
                b -= 1
            else:
                break
        idx[b + 1] = key


def _trial(n, deviation, scale_max, seed, key, trial, triad_mean, ev_tol, ev_max_iter):
    """Run one trial; returns the flat stats tuple (see trial_values)."""
    stream = TrialStream(seed, key, trial)

    # Weights, then the perturbed matrix (row-major upper triangle).
    log_m = log(scale_max)
    w = [0.0] * n
    rw = [0.0] * n
    for i in range(n):
        u = stream.next_double()
        w[i] = exp((2.0 * u - 1.0) * log_m)
    for i in range(n):
        rw[i] = 1.0 / w[i]
    a = [0.0] * (n * n)
    for i in range(n):
        a[i * n + i] = 1.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            rho = stream.next_double()
            us = stream.next_double()
            sign = 1.0 if us < 0.5 else -1.0
            m = 1.0 + sign * (rho * deviation)
            aij = (w[i] * rw[j]) * m
            a[i * n + j] = aij
            a[j * n + i] = 1.0 / aij

    # Geometric means.
    inv_n = 1.0 / n
    sgm = [0.0] * n
    gsum = 0.0
    for i in range(n):
        p = 1.0
        for j in range(n):
            p = p * a[i * n + j]
        g = p ** inv_n
        sgm[i] = g
        gsum = gsum + g
    for i in range(n):
        sgm[i] = sgm[i] / gsum

    # Power iteration, L1-normalized, Rayleigh eigenvalue estimate.
    x = [inv_n] * n
    y = [0.0] * n
    lam = 0.0
    iters = 0
    converged = 0
    for it in range(1, ev_max_iter + 1):
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc = acc + a[i * n + j] * x[j]
            y[i] = acc
        num = 0.0
        den = 0.0
        for i in range(n):
            num = num + x[i] * y[i]
            den = den + x[i] * x[i]
        lam = num / den
        res = 0.0
        for i in range(n):
            r = abs(y[i] - lam * x[i])
            if r > res:
                res = r
        iters = it
        if res <= ev_tol:
            converged = 1
            break
        ysum = 0.0
        for i in range(n):
            ysum = ysum + y[i]
        for i in range(n):
            x[i] = y[i] / ysum
    sev = x

    # Reconstruction distances for both solutions.
    nn = n * n
    de = [0.0, 0.0]
    dc = [0.0, 0.0]
    for which, s in enumerate((sgm, sev)):
        ss = 0.0
        mx = 0.0
        for i in range(n):
            for j in range(n):
                d = a[i * n + j] - s[i] / s[j]
                ss = ss + d * d
                ad = abs(d)
                if ad > mx:
                    mx = ad
        de[which] = sqrt(ss) / nn
        dc[which] = mx

    # Consistency factors of the perturbed matrix.
    v = (lam - n) / (n - 1)
    cf_lam = v if v > 0.0 else 0.0
    best = 0.0
    acc_t = 0.0
    ntriads = 0
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for k in range(j + 1, n):
                r = a[i * n + j] * a[j * n + k] / a[i * n + k]
                v1 = abs(1.0 - r)
                v2 = abs(1.0 - 1.0 / r)
                tv = v1 if v1 < v2 else v2
                if tv > best:
                    best = tv
                acc_t = acc_t + tv
                ntriads += 1
    cf_tri = acc_t / ntriads if triad_mean else best

    # Rank reversal between the two solutions.
    o1 = [0] * n
    o2 = [0] * n
    _rank_order(sgm, n, o1)
    _rank_order(sev, n, o2)
    reversal = 0
    for i in range(n):
        if o1[i] != o2[i]:
            reversal = 1
            break

    return (cf_tri, cf_lam, de[0], de[1], dc[0], dc[1], reversal, lam, iters, converged)


def _check_args(n, deviation, scale_max, ev_tol, ev_max_iter):
    if not 3 <= n <= MAXN:
        raise ValueError(f"order must be in [3, {MAXN}], got {n}")
    if not 0.0 <= deviation < 1.0:
        raise ValueError(f"deviation must lie in [0, 1), got {deviation}")
    if not scale_max > 1.0:
        raise ValueError(f"scale_max must be > 1, got {scale_max}")
    if not ev_tol > 0.0:
        raise ValueError("ev_tol must be > 0")
    if ev_max_iter < 1:
        raise ValueError("ev_max_iter must be >= 1")


def trial_values(n, deviation, scale_max, seed, key, trial,
                 triad_mean=False, ev_tol=1e-12, ev_max_iter=10_000):
    """Stats of a single trial.

    Returns (cf_triad, cf_lambda, dist_gm_euclid, dist_ev_euclid,
    dist_gm_cheb, dist_ev_cheb, rank_reversal, lambda_max, iterations,
    converged). A zero ``converged`` flag marks a solver failure; the
    other fields are then based on the last iterate and should be ignored.
    """
    n = int(n)
    _check_args(n, deviation, scale_max, ev_tol, ev_max_iter)
    return _trial(n, float(deviation), float(scale_max), int(seed), int(key),
                  int(trial), bool(triad_mean), float(ev_tol), int(ev_max_iter))


def run_chunk(n, deviation, scale_max, seed, key, start, count,
              triad_mean=False, ev_tol=1e-12, ev_max_iter=10_000):
    """Accumulate trials [start, start + count) of one cell.

    Returns (ok, sum_cf_triad, sum_cf_lambda, sum_de_gm, sum_de_ev,
    sum_dc_gm, sum_dc_ev, wins2x_gm_euclid, wins2x_ev_cheb, reversals,
    failures). Sums are Neumaier-compensated; win counters are doubled so
    that ties can credit one unit to each side exactly.
    """
    n = int(n)
    _check_args(n, deviation, scale_max, ev_tol, ev_max_iter)
    deviation = float(deviation)
    scale_max = float(scale_max)
    seed = int(seed)
    key = int(key)
    triad_mean = bool(triad_mean)
    ev_tol = float(ev_tol)
    ev_max_iter = int(ev_max_iter)

    sums = [0.0] * 6
    comps = [0.0] * 6
    w2x_gm_e = 0
    w2x_ev_c = 0
    reversals = 0
    failures = 0
    ok = 0
    for trial in range(int(start), int(start) + int(count)):
        vals = _trial(n, deviation, scale_max, seed, key, trial,
                      triad_mean, ev_tol, ev_max_iter)
        if not vals[9]:
            failures += 1
            continue
        ok += 1
        for f in range(6):
            s = sums[f]
            xv = vals[f]
            t = s + xv
            if abs(s) >= abs(xv):
                comps[f] = comps[f] + ((s - t) + xv)
            else:
                comps[f] = comps[f] + ((xv - t) + s)
            sums[f] = t
        de_gm, de_ev, dc_gm, dc_ev = vals[2], vals[3], vals[4], vals[5]
        if de_gm < de_ev:
            w2x_gm_e += 2
        elif de_gm == de_ev:
            w2x_gm_e += 1
        if dc_ev < dc_gm:
            w2x_ev_c += 2
        elif dc_ev == dc_gm:
            w2x_ev_c += 1
        reversals += vals[6]

    totals = [sums[f] + comps[f] for f in range(6)]
    return (ok, totals[0], totals[1], totals[2], totals[3], totals[4], totals[5],
            w2x_gm_e, w2x_ev_c, reversals, failures)
