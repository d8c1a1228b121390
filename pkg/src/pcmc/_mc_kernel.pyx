# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trial kernel.

Statement-for-statement mirror of ``_kernel_py.py`` (which documents the
pipeline); keep both in exact sync, including operation order, so results
stay bit-identical between the two. The per-trial body runs without the
GIL, so chunks can execute on plain threads.
"""

from libc.math cimport exp, fabs, log, pow, sqrt
from libc.stdint cimport uint64_t

cdef extern from *:
    ctypedef unsigned long long uint128_t "unsigned __int128"

cdef uint64_t PHILOX_M0 = 0xD2E7470EE14C6C93
cdef uint64_t PHILOX_M1 = 0xCA5A826395121157
cdef uint64_t PHILOX_W0 = 0x9E3779B97F4A7C15
cdef uint64_t PHILOX_W1 = 0xBB67AE8584CAA73B
cdef double INV_2_53 = 1.1102230246251565e-16

DEF MAXN = 7


cdef struct Stream:
    uint64_t k0
    uint64_t k1
    uint64_t trial
    uint64_t block
    uint64_t buf[4]
    int pos


cdef inline void _refill(Stream* s) noexcept nogil:
    cdef uint64_t c0 = s.trial
    cdef uint64_t c1 = s.block
    cdef uint64_t c2 = 0
    cdef uint64_t c3 = 0
    cdef uint64_t k0 = s.k0
    cdef uint64_t k1 = s.k1
    cdef uint64_t hi0, lo0, hi1, lo1
    cdef int r
    for r in range(10):
        lo0 = PHILOX_M0 * c0
        hi0 = <uint64_t> (((<uint128_t> PHILOX_M0) * c0) >> 64)
        lo1 = PHILOX_M1 * c2
        hi1 = <uint64_t> (((<uint128_t> PHILOX_M1) * c2) >> 64)
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + PHILOX_W0
        k1 = k1 + PHILOX_W1
    s.buf[0] = c0
    s.buf[1] = c1
    s.buf[2] = c2
    s.buf[3] = c3
    s.block += 1
    s.pos = 0


cdef inline double _next_double(Stream* s) noexcept nogil:
    cdef uint64_t x
    if s.pos == 4:
        _refill(s)
    x = s.buf[s.pos]
    s.pos += 1
    return <double> (x >> 11) * INV_2_53


cdef inline void _rank_order(double* v, int n, int* idx) noexcept nogil:
    cdef int i, a, b, key, cur
    cdef double kv, cv
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


cdef struct TrialOut:
    double cf_tri
    double cf_lam
    double de_gm
    double de_ev
    double dc_gm
    double dc_ev
    double lam
    int reversal
    int iters
    int converged


cdef TrialOut _trial(int n, double deviation, double scale_max, uint64_t seed,
                     uint64_t key, uint64_t trial, bint triad_mean,
                     double ev_tol, int ev_max_iter) noexcept nogil:
    cdef Stream st
    cdef TrialOut out
    cdef double w[MAXN]
    cdef double rw[MAXN]
    cdef double a[MAXN * MAXN]
    cdef double sgm[MAXN]
    cdef double x[MAXN]
    cdef double y[MAXN]
    cdef int o1[MAXN]
    cdef int o2[MAXN]
    cdef double* sol
    cdef int i, j, k, it, which, nn, ntriads, iters, converged, reversal
    cdef double u, log_m, rho, us, sign, m, aij, inv_n, p, g, gsum
    cdef double acc, num, den, lam, res, r, ysum
    cdef double ss, mx, d, ad, de0, de1, dc0, dc1
    cdef double v, cf_lam, best, acc_t, v1, v2, tv, cf_tri

    st.k0 = seed
    st.k1 = key
    st.trial = trial
    st.block = 0
    st.pos = 4

    # Weights, then the perturbed matrix (row-major upper triangle).
    log_m = log(scale_max)
    for i in range(n):
        u = _next_double(&st)
        w[i] = exp((2.0 * u - 1.0) * log_m)
    for i in range(n):
        rw[i] = 1.0 / w[i]
    for i in range(n):
        a[i * n + i] = 1.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            rho = _next_double(&st)
            us = _next_double(&st)
            sign = 1.0 if us < 0.5 else -1.0
            m = 1.0 + sign * (rho * deviation)
            aij = (w[i] * rw[j]) * m
            a[i * n + j] = aij
            a[j * n + i] = 1.0 / aij

    # Geometric means.
    inv_n = 1.0 / n
    gsum = 0.0
    for i in range(n):
        p = 1.0
        for j in range(n):
            p = p * a[i * n + j]
        g = pow(p, inv_n)
        sgm[i] = g
        gsum = gsum + g
    for i in range(n):
        sgm[i] = sgm[i] / gsum

    # Power iteration, L1-normalized, Rayleigh eigenvalue estimate.
    for i in range(n):
        x[i] = inv_n
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
            r = fabs(y[i] - lam * x[i])
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

    # Reconstruction distances for both solutions.
    nn = n * n
    de0 = de1 = dc0 = dc1 = 0.0
    for which in range(2):
        if which == 0:
            sol = &sgm[0]
        else:
            sol = &x[0]
        ss = 0.0
        mx = 0.0
        for i in range(n):
            for j in range(n):
                d = a[i * n + j] - sol[i] / sol[j]
                ss = ss + d * d
                ad = fabs(d)
                if ad > mx:
                    mx = ad
        if which == 0:
            de0 = sqrt(ss) / nn
            dc0 = mx
        else:
            de1 = sqrt(ss) / nn
            dc1 = mx

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
                v1 = fabs(1.0 - r)
                v2 = fabs(1.0 - 1.0 / r)
                tv = v1 if v1 < v2 else v2
                if tv > best:
                    best = tv
                acc_t = acc_t + tv
                ntriads += 1
    cf_tri = acc_t / ntriads if triad_mean else best

    # Rank reversal between the two solutions.
    _rank_order(sgm, n, o1)
    _rank_order(x, n, o2)
    reversal = 0
    for i in range(n):
        if o1[i] != o2[i]:
            reversal = 1
            break

    out.cf_tri = cf_tri
    out.cf_lam = cf_lam
    out.de_gm = de0
    out.de_ev = de1
    out.dc_gm = dc0
    out.dc_ev = dc1
    out.lam = lam
    out.reversal = reversal
    out.iters = iters
    out.converged = converged
    return out


def _check_args(int n, double deviation, double scale_max, double ev_tol,
                int ev_max_iter):
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
    """Stats of a single trial; same contract as the pure Python kernel."""
    cdef int cn = int(n)
    _check_args(cn, deviation, scale_max, ev_tol, ev_max_iter)
    cdef TrialOut o = _trial(cn, float(deviation), float(scale_max), int(seed),
                             int(key), int(trial), bool(triad_mean),
                             float(ev_tol), int(ev_max_iter))
    return (o.cf_tri, o.cf_lam, o.de_gm, o.de_ev, o.dc_gm, o.dc_ev,
            o.reversal, o.lam, o.iters, o.converged)


def run_chunk(n, deviation, scale_max, seed, key, start, count,
              triad_mean=False, ev_tol=1e-12, ev_max_iter=10_000):
    """Accumulate trials [start, start + count) of one cell.

    Same contract as the pure Python kernel: Neumaier-compensated sums and
    doubled win counters, computed without holding the GIL.
    """
    cdef int cn = int(n)
    _check_args(cn, deviation, scale_max, ev_tol, ev_max_iter)
    cdef double cdev = float(deviation)
    cdef double cmax = float(scale_max)
    cdef uint64_t cseed = int(seed)
    cdef uint64_t ckey = int(key)
    cdef uint64_t cstart = int(start)
    cdef uint64_t ccount = int(count)
    cdef bint cmean = bool(triad_mean)
    cdef double ctol = float(ev_tol)
    cdef int citer = int(ev_max_iter)

    cdef double sums[6]
    cdef double comps[6]
    cdef double vals[6]
    cdef long long w2x_gm_e = 0
    cdef long long w2x_ev_c = 0
    cdef long long reversals = 0
    cdef long long failures = 0
    cdef long long ok = 0
    cdef uint64_t t
    cdef TrialOut o
    cdef double sv, xv, tt
    cdef int f
    for f in range(6):
        sums[f] = 0.0
        comps[f] = 0.0

    with nogil:
        for t in range(cstart, cstart + ccount):
            o = _trial(cn, cdev, cmax, cseed, ckey, t, cmean, ctol, citer)
            if not o.converged:
                failures += 1
                continue
            ok += 1
            vals[0] = o.cf_tri
            vals[1] = o.cf_lam
            vals[2] = o.de_gm
            vals[3] = o.de_ev
            vals[4] = o.dc_gm
            vals[5] = o.dc_ev
            for f in range(6):
                sv = sums[f]
                xv = vals[f]
                tt = sv + xv
                if fabs(sv) >= fabs(xv):
                    comps[f] = comps[f] + ((sv - tt) + xv)
                else:
                    comps[f] = comps[f] + ((xv - tt) + sv)
                sums[f] = tt
            if o.de_gm < o.de_ev:
                w2x_gm_e += 2
            elif o.de_gm == o.de_ev:
                w2x_gm_e += 1
            if o.dc_ev < o.dc_gm:
                w2x_ev_c += 2
            elif o.dc_ev == o.dc_gm:
                w2x_ev_c += 1
            reversals += o.reversal

    return (ok, sums[0] + comps[0], sums[1] + comps[1], sums[2] + comps[2],
            sums[3] + comps[3], sums[4] + comps[4], sums[5] + comps[5],
            w2x_gm_e, w2x_ev_c, reversals, failures)
