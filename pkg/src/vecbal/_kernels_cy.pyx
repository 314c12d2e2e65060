# cython: language_level=3
"""Compiled simulation kernels; exact twin of _kernels_py / _scalar.

Every function mirrors its pure-Python counterpart operation for
operation: same operand order, same libm calls, IEEE doubles
throughout.  The extension is built with FMA contraction disabled
(-ffp-contract=off) so trajectories stay byte-identical to the
fallback.  Change nothing here without mirroring it there.
"""

from libc.math cimport M_PI, cos, fabs, log, pow, sin, sqrt
from libc.stdint cimport int64_t, uint64_t

cdef double TWO_PI = 2.0 * M_PI
cdef double ONE_THIRD = 1.0 / 3.0
cdef double TWO_THIRDS = 2.0 / 3.0
cdef double TWO53_INV = 1.0 / 9007199254740992.0
cdef double TOL = 1e-9

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15UL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9UL
cdef uint64_t MIX2 = 0x94D049BB133111EBUL

cdef enum:
    STRAT_UNIFORM_RANDOM = 0
    STRAT_GREEDY_1D = 1
    STRAT_INNER_PRODUCT = 2
    STRAT_BEST_OF_TWO = 3

cdef enum:
    KIND_UNIFORM_BALL = 0
    KIND_ATOMIC = 1
    KIND_MIXTURE = 2
    KIND_PATHOLOGICAL = 3

cdef enum:
    ERR_OK = 0
    ERR_TRIANGLE = 1
    ERR_STEP_BOUND = 2
    ERR_GREEDY = 4
    ERR_CONSERVATION = 5

cdef enum:
    DEBUG_CONSERVATION = 1
    DEBUG_TRIANGLE = 2
    DEBUG_STEP_BOUND = 4
    DEBUG_GREEDY = 8

BACKEND_NAME = "cython"


cdef struct Rng:
    uint64_t seed
    uint64_t counter


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline uint64_t next_u64(Rng* st) noexcept nogil:
    st.counter += 1
    return mix64(st.seed + st.counter * GOLDEN)


cdef inline double next_f64(Rng* st) noexcept nogil:
    return <double>(next_u64(st) >> 11) * TWO53_INV


cdef inline double next_open(Rng* st) noexcept nogil:
    return <double>((next_u64(st) >> 11) + 1) * TWO53_INV


cdef inline void sample_uniform_ball(int d, Rng* st, double[::1] v, double[::1] z) noexcept nogil:
    cdef Py_ssize_t npairs = (d + 1) // 2
    cdef Py_ssize_t p, l
    cdef double u1, u2, r, a, ss, nrm, u, rad, scale
    for p in range(npairs):
        u1 = next_open(st)
        u2 = next_f64(st)
        r = sqrt(-2.0 * log(u1))
        a = TWO_PI * u2
        z[2 * p] = r * cos(a)
        z[2 * p + 1] = r * sin(a)
    ss = 0.0
    for l in range(d):
        ss += z[l] * z[l]
    nrm = sqrt(ss)
    u = next_f64(st)
    rad = pow(u, 1.0 / <double>d)
    if nrm > 0.0:
        scale = rad / nrm
        for l in range(d):
            v[l] = z[l] * scale
    else:
        for l in range(d):
            v[l] = 0.0


cdef inline Py_ssize_t pick_weighted(double[::1] w, Py_ssize_t lo, Py_ssize_t hi, double u) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(lo, hi):
        acc += w[i]
        if u < acc:
            return i
    return hi - 1


cdef inline void sample_compiled(
    int kind, int d,
    double[:, ::1] atoms, double[::1] weights,
    int64_t[::1] comp_kind, double[::1] comp_w,
    int64_t[::1] comp_off, int64_t[::1] comp_cnt,
    double[::1] pw, double[::1] pinvl,
    Rng* st, double[::1] v, double[::1] z,
) noexcept nogil:
    cdef double u, u2
    cdef Py_ssize_t idx, c, off, l
    if kind == KIND_UNIFORM_BALL:
        sample_uniform_ball(d, st, v, z)
        return
    if kind == KIND_ATOMIC:
        u = next_f64(st)
        idx = pick_weighted(weights, 0, weights.shape[0], u)
        for l in range(d):
            v[l] = atoms[idx, l]
        return
    if kind == KIND_MIXTURE:
        u = next_f64(st)
        c = pick_weighted(comp_w, 0, comp_w.shape[0], u)
        if comp_kind[c] == KIND_UNIFORM_BALL:
            sample_uniform_ball(d, st, v, z)
        else:
            u2 = next_f64(st)
            off = comp_off[c]
            idx = pick_weighted(weights, off, off + comp_cnt[c], u2)
            for l in range(d):
                v[l] = atoms[idx, l]
        return
    # pathological
    u = next_f64(st)
    if u < ONE_THIRD:
        v[0] = 0.0
        v[1] = 0.5
    elif u < TWO_THIRDS:
        sample_uniform_ball(2, st, v, z)
    else:
        u2 = next_f64(st)
        idx = pick_weighted(pw, 0, pw.shape[0], u2)
        v[0] = pinvl[idx]
        v[1] = -0.5


cdef inline double inner_product(double[::1] v, double[:, ::1] sums, Py_ssize_t i, int d) noexcept nogil:
    cdef double ip = 0.0
    cdef Py_ssize_t l
    for l in range(d):
        ip += v[l] * sums[i, l]
    return ip


cdef inline int decide(
    int strategy, double[::1] v, double[:, ::1] sums, int k, int d,
    Rng* st, int* pair_i, int* pair_j,
) noexcept nogil:
    cdef Py_ssize_t best, i, j
    cdef double val, ip, ip_i, ip_j, v0
    cdef Py_ssize_t npairs, p, r
    pair_i[0] = -1
    pair_j[0] = -1
    if strategy == STRAT_INNER_PRODUCT:
        best = 0
        val = inner_product(v, sums, 0, d)
        for i in range(1, k):
            ip = inner_product(v, sums, i, d)
            if ip < val:
                val = ip
                best = i
        return <int>best
    if strategy == STRAT_BEST_OF_TWO:
        npairs = k * (k - 1) // 2
        p = <Py_ssize_t>(next_f64(st) * npairs)
        i = 0
        r = p
        while r >= k - 1 - i:
            r -= k - 1 - i
            i += 1
        j = i + 1 + r
        ip_i = inner_product(v, sums, i, d)
        ip_j = inner_product(v, sums, j, d)
        pair_i[0] = <int>i
        pair_j[0] = <int>j
        return <int>(i if ip_i <= ip_j else j)
    if strategy == STRAT_UNIFORM_RANDOM:
        return <int>(next_f64(st) * k)
    # greedy-1d
    v0 = v[0]
    if v0 < 0.0:
        best = 0
        val = sums[0, 0]
        for i in range(1, k):
            if sums[i, 0] > val:
                val = sums[i, 0]
                best = i
        return <int>best
    best = 0
    val = sums[0, 0]
    for i in range(1, k):
        if sums[i, 0] < val:
            val = sums[i, 0]
            best = i
    return <int>best


cdef inline void kahan_add(double[:, ::1] sums, double[:, ::1] comp, int h, double[::1] v, int d) noexcept nogil:
    cdef Py_ssize_t l
    cdef double y, t
    for l in range(d):
        y = v[l] - comp[h, l]
        t = sums[h, l] + y
        comp[h, l] = (t - sums[h, l]) - y
        sums[h, l] = t


cdef inline double max_pair_sq(double[:, ::1] sums, int k, int d) noexcept nogil:
    cdef double best = 0.0
    cdef double ss, dl
    cdef Py_ssize_t i, j, l
    for i in range(k):
        for j in range(i + 1, k):
            ss = 0.0
            for l in range(d):
                dl = sums[i, l] - sums[j, l]
                ss += dl * dl
            if ss > best:
                best = ss
    return best


cdef inline double observable_s(double[:, ::1] sums, int k, int d) noexcept nogil:
    cdef double total = 0.0
    cdef double ss, dl
    cdef Py_ssize_t i, j, l
    for i in range(k):
        for j in range(i + 1, k):
            ss = 0.0
            for l in range(d):
                dl = sums[i, l] - sums[j, l]
                ss += dl * dl
            total += ss
    return total


cdef inline double merged_imbalance(double[:, ::1] sums, int k, int d) noexcept nogil:
    cdef int kp = k // 2
    cdef bint odd = k % 2 == 1
    cdef double w = 1.0 + 1.0 / <double>kp if odd else 1.0
    cdef double ss = 0.0
    cdef double a1, a2, dl
    cdef Py_ssize_t i, l
    for l in range(d):
        a1 = 0.0
        for i in range(kp):
            a1 += sums[i, l]
        a2 = 0.0
        for i in range(kp, k):
            a2 += sums[i, l]
        dl = w * a1 - a2 if odd else a1 - a2
        ss += dl * dl
    return sqrt(ss)


def sample_once(
    int kind, int dist_d,
    double[:, ::1] atoms, double[::1] weights,
    int64_t[::1] comp_kind, double[::1] comp_w,
    int64_t[::1] comp_off, int64_t[::1] comp_cnt,
    double[::1] pw, double[::1] pinvl,
    uint64_t[::1] rng_state,
    double[::1] v, double[::1] z,
):
    """Draw one vector; test hook for draw-budget and twin-parity checks."""
    cdef Rng st
    st.seed = rng_state[0]
    st.counter = rng_state[1]
    sample_compiled(kind, dist_d, atoms, weights, comp_kind, comp_w,
                    comp_off, comp_cnt, pw, pinvl, &st, v, z)
    rng_state[0] = st.seed
    rng_state[1] = st.counter


def run_trial_kernel(
    double[:, ::1] sums, double[:, ::1] comp,
    int kind, int dist_d,
    double[:, ::1] atoms, double[::1] weights,
    int64_t[::1] comp_kind, double[::1] comp_w,
    int64_t[::1] comp_off, int64_t[::1] comp_cnt,
    double[::1] pw, double[::1] pinvl,
    int strategy,
    uint64_t[::1] rng_state,
    int64_t n_start, int64_t n_end,
    int64_t[::1] cpt_times, double[:, ::1] out_rows,
    double d_running, int debug_flags,
    double[:, ::1] totals, int64_t[::1] err_out,
    double[::1] v, double[::1] z,
):
    cdef int k = <int>sums.shape[0]
    cdef int d = dist_d
    cdef Rng st
    st.seed = rng_state[0]
    st.counter = rng_state[1]
    err_out[0] = ERR_OK
    err_out[1] = 0

    cdef Py_ssize_t m = cpt_times.shape[0]
    cdef Py_ssize_t pos = 0
    while pos < m and cpt_times[pos] <= n_start:
        pos += 1
    cdef int64_t next_cpt = cpt_times[pos] if pos < m else -1

    cdef bint track_tot = (debug_flags & DEBUG_CONSERVATION) != 0
    cdef bint check_triangle = (debug_flags & DEBUG_TRIANGLE) != 0
    cdef bint check_step = (debug_flags & DEBUG_STEP_BOUND) != 0 and strategy == STRAT_INNER_PRODUCT
    cdef bint check_greedy = (debug_flags & DEBUG_GREEDY) != 0 and strategy == STRAT_GREEDY_1D

    cdef int64_t n = n_start
    cdef int h, pi, pj
    cdef Py_ssize_t i, l
    cdef double s_before, s_after, s_now, best, cur, vv, y, t, col, at

    with nogil:
        while n < n_end:
            s_before = observable_s(sums, k, d) if check_step else 0.0
            sample_compiled(kind, d, atoms, weights, comp_kind, comp_w,
                            comp_off, comp_cnt, pw, pinvl, &st, v, z)
            h = decide(strategy, v, sums, k, d, &st, &pi, &pj)
            kahan_add(sums, comp, h, v, d)
            if track_tot:
                for l in range(d):
                    y = v[l] - totals[1, l]
                    t = totals[0, l] + y
                    totals[1, l] = (t - totals[0, l]) - y
                    totals[0, l] = t
            n += 1
            best = max_pair_sq(sums, k, d)
            cur = sqrt(best)
            if cur > d_running:
                d_running = cur
            if check_step:
                s_after = observable_s(sums, k, d)
                vv = 0.0
                for l in range(d):
                    vv += v[l] * v[l]
                if s_after - s_before > (k - 1) * vv + TOL * (1.0 + s_before):
                    err_out[0] = ERR_STEP_BOUND
                    err_out[1] = n
                    break
            if check_triangle:
                s_now = observable_s(sums, k, d)
                if best > 2.0 * s_now / k + TOL * (1.0 + s_now):
                    err_out[0] = ERR_TRIANGLE
                    err_out[1] = n
                    break
            if check_greedy and cur > 1.0 + TOL:
                err_out[0] = ERR_GREEDY
                err_out[1] = n
                break
            if n == next_cpt:
                s_now = observable_s(sums, k, d)
                if track_tot:
                    for l in range(d):
                        col = 0.0
                        for i in range(k):
                            col += sums[i, l]
                        at = fabs(totals[0, l])
                        if fabs(col - totals[0, l]) > TOL * (at if at > 1.0 else 1.0):
                            err_out[0] = ERR_CONSERVATION
                            err_out[1] = n
                            break
                    if err_out[0] != ERR_OK:
                        break
                out_rows[pos, 0] = d_running
                out_rows[pos, 1] = s_now
                out_rows[pos, 2] = cur
                out_rows[pos, 3] = merged_imbalance(sums, k, d)
                pos += 1
                next_cpt = cpt_times[pos] if pos < m else -1

    rng_state[0] = st.seed
    rng_state[1] = st.counter
    return d_running


cdef inline double pair_a_sq(double[:, ::1] sums, int a, int b, int d) noexcept nogil:
    cdef double ss = 0.0
    cdef double dl
    cdef Py_ssize_t l
    for l in range(d):
        dl = sums[a, l] - sums[b, l]
        ss += dl * dl
    return ss


def drift_probe_kernel(
    double[:, ::1] sums, double[:, ::1] comp,
    int kind, int dist_d,
    double[:, ::1] atoms, double[::1] weights,
    int64_t[::1] comp_kind, double[::1] comp_w,
    int64_t[::1] comp_off, int64_t[::1] comp_cnt,
    double[::1] pw, double[::1] pinvl,
    int strategy,
    uint64_t[::1] rng_state,
    int pair_a, int pair_b,
    double[:, ::1] buckets,
    int64_t burn_in, int64_t n_steps,
    int reseed, double reseed_lo, double reseed_hi,
    int64_t[:, ::1] counts, double[:, ::1] means, double[:, ::1] m2s,
    double[::1] v, double[::1] z,
):
    cdef int k = <int>sums.shape[0]
    cdef int d = dist_d
    cdef Rng st
    st.seed = rng_state[0]
    st.counter = rng_state[1]
    cdef Py_ssize_t nb = buckets.shape[0]
    cdef Py_ssize_t npairs_g = (d + 1) // 2

    cdef int64_t total = burn_in + n_steps
    cdef int64_t t_step
    cdef int h, pi, pj, c0, c1
    cdef Py_ssize_t p, i, l, r, bucket
    cdef int64_t cnt
    cdef double a_before, a_target, u1, u2, rr, aa, ss, nrm, half_r, e_l
    cdef double delta, mean, dlt
    cdef bint in_a, in_b

    with nogil:
        for t_step in range(total):
            a_before = pair_a_sq(sums, pair_a, pair_b, d)
            if reseed and not (reseed_lo <= a_before < reseed_hi):
                a_target = reseed_lo + next_f64(&st) * (reseed_hi - reseed_lo)
                for p in range(npairs_g):
                    u1 = next_open(&st)
                    u2 = next_f64(&st)
                    rr = sqrt(-2.0 * log(u1))
                    aa = TWO_PI * u2
                    z[2 * p] = rr * cos(aa)
                    z[2 * p + 1] = rr * sin(aa)
                ss = 0.0
                for l in range(d):
                    ss += z[l] * z[l]
                nrm = sqrt(ss)
                half_r = 0.5 * sqrt(a_target)
                for i in range(k):
                    for l in range(d):
                        sums[i, l] = 0.0
                        comp[i, l] = 0.0
                if nrm > 0.0:
                    for l in range(d):
                        e_l = z[l] / nrm
                        sums[pair_a, l] = half_r * e_l
                        sums[pair_b, l] = -half_r * e_l
                else:
                    sums[pair_a, 0] = half_r
                    sums[pair_b, 0] = -half_r
                a_before = pair_a_sq(sums, pair_a, pair_b, d)
            sample_compiled(kind, d, atoms, weights, comp_kind, comp_w,
                            comp_off, comp_cnt, pw, pinvl, &st, v, z)
            h = decide(strategy, v, sums, k, d, &st, &pi, &pj)
            kahan_add(sums, comp, h, v, d)
            if t_step < burn_in:
                continue
            bucket = -1
            for r in range(nb):
                if buckets[r, 0] <= a_before < buckets[r, 1]:
                    bucket = r
                    break
            if bucket < 0:
                continue
            delta = pair_a_sq(sums, pair_a, pair_b, d) - a_before
            c0 = 0
            c1 = -1
            if pi >= 0:
                in_a = pi == pair_a or pi == pair_b
                in_b = pj == pair_a or pj == pair_b
                if in_a and in_b:
                    c1 = 1
                elif not in_a and not in_b:
                    c1 = 2
                else:
                    c1 = 3
            cnt = counts[bucket, c0] + 1
            counts[bucket, c0] = cnt
            mean = means[bucket, c0]
            dlt = delta - mean
            mean += dlt / <double>cnt
            means[bucket, c0] = mean
            m2s[bucket, c0] += dlt * (delta - mean)
            if c1 >= 0:
                cnt = counts[bucket, c1] + 1
                counts[bucket, c1] = cnt
                mean = means[bucket, c1]
                dlt = delta - mean
                mean += dlt / <double>cnt
                means[bucket, c1] = mean
                m2s[bucket, c1] += dlt * (delta - mean)

    rng_state[0] = st.seed
    rng_state[1] = st.counter


def step_probe_kernel(
    double[:, ::1] sums, double[:, ::1] comp,
    int kind, int dist_d,
    double[:, ::1] atoms, double[::1] weights,
    int64_t[::1] comp_kind, double[::1] comp_w,
    int64_t[::1] comp_off, int64_t[::1] comp_cnt,
    double[::1] pw, double[::1] pinvl,
    uint64_t[::1] rng_state,
    double ell_half,
    int64_t burn_in, int64_t n_steps,
    int reseed, double[:, ::1] init_sums,
    int64_t[::1] counts_out,
    double[::1] v, double[::1] z,
):
    cdef int k = <int>sums.shape[0]
    cdef int d = dist_d
    cdef Rng st
    st.seed = rng_state[0]
    st.counter = rng_state[1]
    cdef double thr_dec = -sqrt(2.0 * ell_half) / k
    cdef double thr_flat = -<double>k

    cdef int64_t total = burn_in + n_steps
    cdef int64_t t_step
    cdef int h, pi, pj
    cdef Py_ssize_t i, l
    cdef double s_cur, s_next, ds

    with nogil:
        s_cur = observable_s(sums, k, d)
        for t_step in range(total):
            if reseed and s_cur < ell_half:
                for i in range(k):
                    for l in range(d):
                        sums[i, l] = init_sums[i, l]
                        comp[i, l] = 0.0
                s_cur = observable_s(sums, k, d)
            sample_compiled(kind, d, atoms, weights, comp_kind, comp_w,
                            comp_off, comp_cnt, pw, pinvl, &st, v, z)
            h = decide(STRAT_INNER_PRODUCT, v, sums, k, d, &st, &pi, &pj)
            kahan_add(sums, comp, h, v, d)
            s_next = observable_s(sums, k, d)
            if t_step >= burn_in and s_cur >= ell_half:
                counts_out[0] += 1
                ds = s_next - s_cur
                if ds <= thr_dec:
                    counts_out[1] += 1
                if ds >= thr_flat:
                    counts_out[2] += 1
            s_cur = s_next

    rng_state[0] = st.seed
    rng_state[1] = st.counter
