"""Bin-ensemble state and its observables.

A BinEnsemble holds k running vector sums in R^d plus a step counter.
Bin sums use compensated (Kahan) summation so conservation stays inside
test tolerance even at 10^8 steps.  All reported distances are true
Euclidean norms.

Bin indices are 0-based throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class PairObservables:
    """Snapshot of the pairwise statistics of one ensemble.

    s is the sum of squared pairwise distances between bins; the
    triangle bound 2*s/k >= max_pair_dist**2 holds in every reachable
    state.  deltas, when requested, is the strict upper triangle of
    squared pair distances.
    """

    max_pair_dist: float
    s: float
    deltas: np.ndarray | None = None


class BinEnsemble:
    """k running bin sums in R^d with a step counter."""

    __slots__ = ("d", "k", "sums", "comp", "n")

    def __init__(self, d: int, k: int):
        if d < 1:
            raise ValueError("dimension d must be >= 1")
        if k < 2:
            raise ValueError("bin count k must be >= 2")
        self.d = d
        self.k = k
        self.sums = np.zeros((k, d), dtype=np.float64)
        self.comp = np.zeros((k, d), dtype=np.float64)  # Kahan compensation terms
        self.n = 0

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.k:
            raise IndexError(f"bin index {i} out of range for k={self.k}")

    def pair_delta(self, i: int, j: int) -> np.ndarray:
        """Difference of bin sums, sums[i] - sums[j]."""
        self._check_index(i)
        self._check_index(j)
        if i == j:
            raise ValueError("pair_delta requires two distinct bins")
        return self.sums[i] - self.sums[j]

    def apply(self, v, h: int) -> "BinEnsemble":
        """Add v to bin h (compensated) and advance the step counter."""
        self._check_index(h)
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.d,):
            raise ValueError(f"vector has shape {v.shape}, expected ({self.d},)")
        sums, comp = self.sums, self.comp
        for l in range(self.d):
            y = v[l] - comp[h, l]
            t = sums[h, l] + y
            comp[h, l] = (t - sums[h, l]) - y
            sums[h, l] = t
        self.n += 1
        return self

    def _pair_sq(self, i: int, j: int) -> float:
        ss = 0.0
        for l in range(self.d):
            dl = self.sums[i, l] - self.sums[j, l]
            ss += dl * dl
        return ss

    def observable_s(self) -> float:
        """Sum of squared pairwise distances between bins."""
        total = 0.0
        for i in range(self.k):
            for j in range(i + 1, self.k):
                total += self._pair_sq(i, j)
        return total

    def max_pair_distance(self) -> float:
        """Largest Euclidean distance between any two bin sums."""
        best = 0.0
        for i in range(self.k):
            for j in range(i + 1, self.k):
                ss = self._pair_sq(i, j)
                if ss > best:
                    best = ss
        return math.sqrt(best)

    def pair_observables(self, with_deltas: bool = False) -> PairObservables:
        best = 0.0
        total = 0.0
        deltas = np.zeros((self.k, self.k)) if with_deltas else None
        for i in range(self.k):
            for j in range(i + 1, self.k):
                ss = self._pair_sq(i, j)
                total += ss
                if ss > best:
                    best = ss
                if deltas is not None:
                    deltas[i, j] = ss
        return PairObservables(max_pair_dist=math.sqrt(best), s=total, deltas=deltas)

    def merged_imbalance(self) -> float:
        """Distance between the two super-bins formed by splitting at k' = floor(k/2).

        For odd k the first super-bin is reweighted by (1 + 1/k') so the
        two sides carry equal expected mass.
        """
        kp = self.k // 2
        ss = 0.0
        odd = self.k % 2 == 1
        w = 1.0 + 1.0 / kp if odd else 1.0
        for l in range(self.d):
            a1 = 0.0
            for i in range(kp):
                a1 += self.sums[i, l]
            a2 = 0.0
            for i in range(kp, self.k):
                a2 += self.sums[i, l]
            dl = w * a1 - a2 if odd else a1 - a2
            ss += dl * dl
        return math.sqrt(ss)

    def copy(self) -> "BinEnsemble":
        out = BinEnsemble(self.d, self.k)
        out.sums[:] = self.sums
        out.comp[:] = self.comp
        out.n = self.n
        return out
