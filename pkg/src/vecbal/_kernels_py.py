"""Pure-Python simulation kernels (fallback twin of _kernels_cy).

Same flat signatures, same arithmetic, same draw order as the compiled
kernels; trajectories are byte-identical between the two backends.
State arrays are lowered to Python lists inside the loop for speed and
written back on exit.

Debug flag bits (debug_flags):
  1  conservation: maintain a parallel Kahan total of every sample and
     compare bin totals against it at each checkpoint
  2  triangle bound 2S/k >= maxPair^2 after every step
  4  inner-product one-step bound dS <= (k-1)*|v|^2 after every step
  8  greedy-1d bound maxPair <= 1 after every step

Kernel error codes: 0 ok, 1 triangle, 2 step bound, 4 greedy bound,
5 conservation.  err_out = [code, step].
"""

from __future__ import annotations

import math

from ._scalar import (
    STRAT_BEST_OF_TWO,
    STRAT_GREEDY_1D,
    STRAT_INNER_PRODUCT,
    STRAT_UNIFORM_RANDOM,
    PyDist,
    decide_best_of_two,
    decide_greedy_1d,
    decide_inner_product,
    decide_uniform_random,
    gauss_pair,
    kahan_add,
    sample_compiled,
)
from .rng import Stream

BACKEND_NAME = "python"

ERR_OK = 0
ERR_TRIANGLE = 1
ERR_STEP_BOUND = 2
ERR_GREEDY = 4
ERR_CONSERVATION = 5

DEBUG_CONSERVATION = 1
DEBUG_TRIANGLE = 2
DEBUG_STEP_BOUND = 4
DEBUG_GREEDY = 8

_TOL = 1e-9


def _max_pair_sq(sums, k, d):
    best = 0.0
    for i in range(k):
        row_i = sums[i]
        for j in range(i + 1, k):
            row_j = sums[j]
            ss = 0.0
            for l in range(d):
                dl = row_i[l] - row_j[l]
                ss += dl * dl
            if ss > best:
                best = ss
    return best


def _observable_s(sums, k, d):
    total = 0.0
    for i in range(k):
        row_i = sums[i]
        for j in range(i + 1, k):
            row_j = sums[j]
            ss = 0.0
            for l in range(d):
                dl = row_i[l] - row_j[l]
                ss += dl * dl
            total += ss
    return total


def _merged_imbalance(sums, k, d):
    kp = k // 2
    odd = k % 2 == 1
    w = 1.0 + 1.0 / kp if odd else 1.0
    ss = 0.0
    for l in range(d):
        a1 = 0.0
        for i in range(kp):
            a1 += sums[i][l]
        a2 = 0.0
        for i in range(kp, k):
            a2 += sums[i][l]
        dl = w * a1 - a2 if odd else a1 - a2
        ss += dl * dl
    return math.sqrt(ss)


def _decide(strategy, v, sums, k, d, stream):
    """Returns (bin, pair_i, pair_j); pair indices are -1 unless best-of-two."""
    if strategy == STRAT_INNER_PRODUCT:
        return decide_inner_product(v, sums, k, d), -1, -1
    if strategy == STRAT_BEST_OF_TWO:
        return decide_best_of_two(v, sums, k, d, stream)
    if strategy == STRAT_UNIFORM_RANDOM:
        return decide_uniform_random(k, stream), -1, -1
    return decide_greedy_1d(v[0], sums, k), -1, -1


def run_trial_kernel(
    sums_arr,
    comp_arr,
    dist: PyDist,
    strategy: int,
    rng_state,
    n_start: int,
    n_end: int,
    cpt_times,
    out_rows,
    d_running: float,
    debug_flags: int,
    totals_arr,
    err_out,
) -> float:
    """Advance steps n_start+1 .. n_end, filling checkpoint rows (D, S, curMax, merged).

    rng_state is a uint64 array [seed, counter], advanced in place.
    Returns the updated running max D; out_rows[r] corresponds to
    cpt_times[r].  totals_arr (2, d) carries the conservation
    accumulator when debug bit 1 is set.
    """
    k = len(sums_arr)
    d = dist.d
    stream = Stream(int(rng_state[0]), int(rng_state[1]))
    sums = [[float(sums_arr[i][l]) for l in range(d)] for i in range(k)]
    comp = [[float(comp_arr[i][l]) for l in range(d)] for i in range(k)]
    tot = [float(totals_arr[0][l]) for l in range(d)] if debug_flags & DEBUG_CONSERVATION else None
    tot_c = [float(totals_arr[1][l]) for l in range(d)] if tot is not None else None
    v = [0.0] * d

    err_out[0] = ERR_OK
    err_out[1] = 0
    m = len(cpt_times)
    pos = 0
    while pos < m and cpt_times[pos] <= n_start:
        pos += 1
    next_cpt = cpt_times[pos] if pos < m else -1

    check_triangle = debug_flags & DEBUG_TRIANGLE
    check_step = debug_flags & DEBUG_STEP_BOUND and strategy == STRAT_INNER_PRODUCT
    check_greedy = debug_flags & DEBUG_GREEDY and strategy == STRAT_GREEDY_1D

    n = n_start
    while n < n_end:
        s_before = _observable_s(sums, k, d) if check_step else 0.0
        sample_compiled(dist, stream, v)
        h, _, _ = _decide(strategy, v, sums, k, d, stream)
        kahan_add(sums, comp, h, v, d)
        if tot is not None:
            for l in range(d):
                y = v[l] - tot_c[l]
                t = tot[l] + y
                tot_c[l] = (t - tot[l]) - y
                tot[l] = t
        n += 1
        best = _max_pair_sq(sums, k, d)
        cur = math.sqrt(best)
        if cur > d_running:
            d_running = cur
        if check_step:
            s_after = _observable_s(sums, k, d)
            vv = 0.0
            for l in range(d):
                vv += v[l] * v[l]
            if s_after - s_before > (k - 1) * vv + _TOL * (1.0 + s_before):
                err_out[0] = ERR_STEP_BOUND
                err_out[1] = n
                break
        if check_triangle:
            s_now = _observable_s(sums, k, d)
            if best > 2.0 * s_now / k + _TOL * (1.0 + s_now):
                err_out[0] = ERR_TRIANGLE
                err_out[1] = n
                break
        if check_greedy and cur > 1.0 + _TOL:
            err_out[0] = ERR_GREEDY
            err_out[1] = n
            break
        if n == next_cpt:
            s_now = _observable_s(sums, k, d)
            if tot is not None:
                for l in range(d):
                    col = 0.0
                    for i in range(k):
                        col += sums[i][l]
                    if abs(col - tot[l]) > _TOL * max(1.0, abs(tot[l])):
                        err_out[0] = ERR_CONSERVATION
                        err_out[1] = n
                        break
                if err_out[0] != ERR_OK:
                    break
            out_rows[pos][0] = d_running
            out_rows[pos][1] = s_now
            out_rows[pos][2] = cur
            out_rows[pos][3] = _merged_imbalance(sums, k, d)
            pos += 1
            next_cpt = cpt_times[pos] if pos < m else -1

    for i in range(k):
        for l in range(d):
            sums_arr[i][l] = sums[i][l]
            comp_arr[i][l] = comp[i][l]
    if tot is not None:
        for l in range(d):
            totals_arr[0][l] = tot[l]
            totals_arr[1][l] = tot_c[l]
    rng_state[0] = stream.seed
    rng_state[1] = stream.counter
    return d_running


def _pair_a_sq(sums, a, b, d):
    ss = 0.0
    row_a = sums[a]
    row_b = sums[b]
    for l in range(d):
        dl = row_a[l] - row_b[l]
        ss += dl * dl
    return ss


def drift_probe_kernel(
    sums_arr,
    comp_arr,
    dist: PyDist,
    strategy: int,
    rng_state,
    pair_a: int,
    pair_b: int,
    buckets,
    burn_in: int,
    n_steps: int,
    reseed: int,
    reseed_lo: float,
    reseed_hi: float,
    counts,
    means,
    m2s,
) -> None:
    """One-step deltas of A = |B_a - B_b|^2, bucketed by the starting A.

    Accumulator columns: 0 all recorded steps, then the best-of-two
    event split 1 E+ (both tracked bins in the sampled pair), 2 E-
    (neither), 3 E_i (exactly one).  Non-best-of-two strategies fill
    only column 0.  In reseed mode, whenever A leaves [reseed_lo,
    reseed_hi) the tracked pair is re-prepared at a uniform A in that
    range along a fresh uniform direction (1 + 2*ceil(d/2) draws), all
    other bins zeroed; recording then continues, so every recorded
    delta still measures one true transition of the assignment chain.
    """
    k = len(sums_arr)
    d = dist.d
    stream = Stream(int(rng_state[0]), int(rng_state[1]))
    sums = [[float(sums_arr[i][l]) for l in range(d)] for i in range(k)]
    comp = [[float(comp_arr[i][l]) for l in range(d)] for i in range(k)]
    v = [0.0] * d
    nb = len(buckets)
    npairs_g = (d + 1) // 2

    total = burn_in + n_steps
    for t in range(total):
        a_before = _pair_a_sq(sums, pair_a, pair_b, d)
        if reseed and not (reseed_lo <= a_before < reseed_hi):
            a_target = reseed_lo + stream.next_f64() * (reseed_hi - reseed_lo)
            z = [0.0] * (2 * npairs_g)
            for p in range(npairs_g):
                z0, z1 = gauss_pair(stream)
                z[2 * p] = z0
                z[2 * p + 1] = z1
            ss = 0.0
            for l in range(d):
                ss += z[l] * z[l]
            nrm = math.sqrt(ss)
            half_r = 0.5 * math.sqrt(a_target)
            for i in range(k):
                for l in range(d):
                    sums[i][l] = 0.0
                    comp[i][l] = 0.0
            if nrm > 0.0:
                for l in range(d):
                    e_l = z[l] / nrm
                    sums[pair_a][l] = half_r * e_l
                    sums[pair_b][l] = -half_r * e_l
            else:
                sums[pair_a][0] = half_r
                sums[pair_b][0] = -half_r
            a_before = _pair_a_sq(sums, pair_a, pair_b, d)
        sample_compiled(dist, stream, v)
        h, pi, pj = _decide(strategy, v, sums, k, d, stream)
        kahan_add(sums, comp, h, v, d)
        if t < burn_in:
            continue
        bucket = -1
        for r in range(nb):
            if buckets[r][0] <= a_before < buckets[r][1]:
                bucket = r
                break
        if bucket < 0:
            continue
        delta = _pair_a_sq(sums, pair_a, pair_b, d) - a_before
        if pi < 0:
            cols = (0,)
        else:
            in_a = pi == pair_a or pi == pair_b
            in_b = pj == pair_a or pj == pair_b
            if in_a and in_b:
                cols = (0, 1)
            elif not in_a and not in_b:
                cols = (0, 2)
            else:
                cols = (0, 3)
        for c in cols:
            cnt = counts[bucket][c] + 1
            counts[bucket][c] = cnt
            mean = means[bucket][c]
            dlt = delta - mean
            mean += dlt / cnt
            means[bucket][c] = mean
            m2s[bucket][c] += dlt * (delta - mean)

    for i in range(k):
        for l in range(d):
            sums_arr[i][l] = sums[i][l]
            comp_arr[i][l] = comp[i][l]
    rng_state[0] = stream.seed
    rng_state[1] = stream.counter


def step_probe_kernel(
    sums_arr,
    comp_arr,
    dist: PyDist,
    rng_state,
    ell_half: float,
    burn_in: int,
    n_steps: int,
    reseed: int,
    init_sums,
    counts_out,
) -> None:
    """Inner-product step-law probe over states with S_t >= ell_half.

    counts_out = [visits, decrements, no_drops]: over visited steps,
    decrements count dS <= -sqrt(2*ell_half)/k and no-drops count
    dS >= -k.  In reseed mode the bins are reset to init_sums whenever
    S falls below the threshold (no draws consumed).
    """
    k = len(sums_arr)
    d = dist.d
    stream = Stream(int(rng_state[0]), int(rng_state[1]))
    sums = [[float(sums_arr[i][l]) for l in range(d)] for i in range(k)]
    comp = [[float(comp_arr[i][l]) for l in range(d)] for i in range(k)]
    v = [0.0] * d
    thr_dec = -math.sqrt(2.0 * ell_half) / k
    thr_flat = -float(k)

    total = burn_in + n_steps
    s_cur = _observable_s(sums, k, d)
    for t in range(total):
        if reseed and s_cur < ell_half:
            for i in range(k):
                for l in range(d):
                    sums[i][l] = float(init_sums[i][l])
                    comp[i][l] = 0.0
            s_cur = _observable_s(sums, k, d)
        sample_compiled(dist, stream, v)
        h = decide_inner_product(v, sums, k, d)
        kahan_add(sums, comp, h, v, d)
        s_next = _observable_s(sums, k, d)
        if t >= burn_in and s_cur >= ell_half:
            counts_out[0] += 1
            ds = s_next - s_cur
            if ds <= thr_dec:
                counts_out[1] += 1
            if ds >= thr_flat:
                counts_out[2] += 1
        s_cur = s_next

    for i in range(k):
        for l in range(d):
            sums_arr[i][l] = sums[i][l]
            comp_arr[i][l] = comp[i][l]
    rng_state[0] = stream.seed
    rng_state[1] = stream.counter
