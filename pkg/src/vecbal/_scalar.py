"""Scalar per-step primitives: sampling, assignment decisions, Kahan adds.

This is the reference arithmetic for one simulation step.  The compiled
kernel (_kernels_cy.pyx) mirrors every function here operation for
operation; both run on IEEE doubles with identical operand order and
the same libm calls, which is what makes compiled and fallback
trajectories byte-identical.  Change nothing here without mirroring it
there.

Draw budget per sample (documented contract, also in the rng module):
  uniform-ball(d): ceil(d/2) Box-Muller pairs (2 draws each, first draw
    of a pair open-interval for the log) + 1 radius draw; odd d
    discards the last Gaussian but still consumes its draws
  atomic: 1 draw, sequential inverse CDF in declared atom order
  mixture: 1 selector draw + the chosen leaf's budget
  pathological: 1 selector draw, then 0 / 3 / 1 draws for the
    atom / uniform-disk / s-index branches
Strategy draws (consumed after the sample's): uniform-random 1,
best-of-two 1 (pair = lexicographic unordered-pair index), others 0.
"""

from __future__ import annotations

import math
from typing import NamedTuple

TWO_PI = 2.0 * math.pi
ONE_THIRD = 1.0 / 3.0
TWO_THIRDS = 2.0 / 3.0

STRAT_UNIFORM_RANDOM = 0
STRAT_GREEDY_1D = 1
STRAT_INNER_PRODUCT = 2
STRAT_BEST_OF_TWO = 3

KIND_UNIFORM_BALL = 0
KIND_ATOMIC = 1
KIND_MIXTURE = 2
KIND_PATHOLOGICAL = 3


class PyDist(NamedTuple):
    """CompiledDistribution lowered to plain Python containers."""

    kind: int
    d: int
    atoms: list
    weights: list
    comp_kind: list
    comp_w: list
    comp_off: list
    comp_cnt: list
    pw: list
    pinvl: list


def py_dist(cd) -> PyDist:
    return PyDist(
        kind=int(cd.kind),
        d=int(cd.d),
        atoms=[[float(x) for x in row] for row in cd.atoms],
        weights=[float(x) for x in cd.weights],
        comp_kind=[int(x) for x in cd.comp_kind],
        comp_w=[float(x) for x in cd.comp_w],
        comp_off=[int(x) for x in cd.comp_off],
        comp_cnt=[int(x) for x in cd.comp_cnt],
        pw=[float(x) for x in cd.pw],
        pinvl=[float(x) for x in cd.pinvl],
    )


def gauss_pair(stream) -> tuple[float, float]:
    u1 = stream.next_open()
    u2 = stream.next_f64()
    r = math.sqrt(-2.0 * math.log(u1))
    a = TWO_PI * u2
    return r * math.cos(a), r * math.sin(a)


def sample_uniform_ball(d: int, stream, v: list) -> None:
    npairs = (d + 1) // 2
    z = [0.0] * (2 * npairs)
    for p in range(npairs):
        z0, z1 = gauss_pair(stream)
        z[2 * p] = z0
        z[2 * p + 1] = z1
    ss = 0.0
    for l in range(d):
        ss += z[l] * z[l]
    nrm = math.sqrt(ss)
    u = stream.next_f64()
    rad = u ** (1.0 / d)
    if nrm > 0.0:
        scale = rad / nrm
        for l in range(d):
            v[l] = z[l] * scale
    else:
        for l in range(d):
            v[l] = 0.0


def _pick_weighted(weights, lo: int, hi: int, u: float) -> int:
    """First index i in [lo, hi) with u < cumulative weight, else hi-1."""
    acc = 0.0
    for i in range(lo, hi):
        acc += weights[i]
        if u < acc:
            return i
    return hi - 1


def sample_compiled(pd: PyDist, stream, v: list) -> None:
    """Draw one vector from a compiled distribution into v (length d)."""
    kind = pd.kind
    if kind == KIND_UNIFORM_BALL:
        sample_uniform_ball(pd.d, stream, v)
        return
    if kind == KIND_ATOMIC:
        u = stream.next_f64()
        idx = _pick_weighted(pd.weights, 0, len(pd.weights), u)
        row = pd.atoms[idx]
        for l in range(pd.d):
            v[l] = row[l]
        return
    if kind == KIND_MIXTURE:
        u = stream.next_f64()
        c = _pick_weighted(pd.comp_w, 0, len(pd.comp_w), u)
        if pd.comp_kind[c] == KIND_UNIFORM_BALL:
            sample_uniform_ball(pd.d, stream, v)
        else:
            u2 = stream.next_f64()
            off = pd.comp_off[c]
            idx = _pick_weighted(pd.weights, off, off + pd.comp_cnt[c], u2)
            row = pd.atoms[idx]
            for l in range(pd.d):
                v[l] = row[l]
        return
    # pathological
    u = stream.next_f64()
    if u < ONE_THIRD:
        v[0] = 0.0
        v[1] = 0.5
    elif u < TWO_THIRDS:
        sample_uniform_ball(2, stream, v)
    else:
        u2 = stream.next_f64()
        idx = _pick_weighted(pd.pw, 0, len(pd.pw), u2)
        v[0] = pd.pinvl[idx]
        v[1] = -0.5


def decide_uniform_random(k: int, stream) -> int:
    return int(stream.next_f64() * k)


def decide_greedy_1d(v0: float, sums, k: int) -> int:
    if v0 < 0.0:  # feed the largest bin
        best = 0
        val = sums[0][0]
        for i in range(1, k):
            if sums[i][0] > val:
                val = sums[i][0]
                best = i
        return best
    best = 0  # v > 0 (and v = 0 by convention): feed the smallest
    val = sums[0][0]
    for i in range(1, k):
        if sums[i][0] < val:
            val = sums[i][0]
            best = i
    return best


def inner_product(v, row, d: int) -> float:
    ip = 0.0
    for l in range(d):
        ip += v[l] * row[l]
    return ip


def decide_inner_product(v, sums, k: int, d: int) -> int:
    best = 0
    val = inner_product(v, sums[0], d)
    for i in range(1, k):
        ip = inner_product(v, sums[i], d)
        if ip < val:
            val = ip
            best = i
    return best


def unordered_pair(p: int, k: int) -> tuple[int, int]:
    """p-th unordered pair in lexicographic order: (0,1), (0,2), ..., (1,2), ..."""
    i = 0
    r = p
    while r >= k - 1 - i:
        r -= k - 1 - i
        i += 1
    return i, i + 1 + r


def decide_best_of_two(v, sums, k: int, d: int, stream) -> tuple[int, int, int]:
    """Returns (chosen bin, pair i, pair j) with i < j."""
    npairs = k * (k - 1) // 2
    p = int(stream.next_f64() * npairs)
    i, j = unordered_pair(p, k)
    ip_i = inner_product(v, sums[i], d)
    ip_j = inner_product(v, sums[j], d)
    return (i if ip_i <= ip_j else j), i, j


def kahan_add(sums, comp, h: int, v, d: int) -> None:
    row_s = sums[h]
    row_c = comp[h]
    for l in range(d):
        y = v[l] - row_c[l]
        t = row_s[l] + y
        row_c[l] = (t - row_s[l]) - y
        row_s[l] = t
