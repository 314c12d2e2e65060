"""BinEnsemble state, observables, and their structural invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vecbal.core import BinEnsemble

finite = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def vectors(d, n):
    return st.lists(st.lists(finite, min_size=d, max_size=d), min_size=n, max_size=n)


def test_constructor_validation():
    with pytest.raises(ValueError):
        BinEnsemble(0, 2)
    with pytest.raises(ValueError):
        BinEnsemble(2, 1)


def test_apply_checks_shape_and_index():
    ens = BinEnsemble(2, 3)
    with pytest.raises(ValueError):
        ens.apply([1.0], 0)
    with pytest.raises(IndexError):
        ens.apply([1.0, 0.0], 3)


def test_pair_delta_basic():
    ens = BinEnsemble(2, 2)
    ens.apply([1.0, 0.5], 0)
    ens.apply([0.25, -0.5], 1)
    np.testing.assert_allclose(ens.pair_delta(0, 1), [0.75, 1.0])
    with pytest.raises(ValueError):
        ens.pair_delta(1, 1)


def test_step_counter_advances():
    ens = BinEnsemble(1, 2)
    ens.apply([0.5], 0).apply([0.5], 1)
    assert ens.n == 2


def test_empty_ensemble_observables():
    ens = BinEnsemble(3, 4)
    assert ens.observable_s() == 0.0
    assert ens.max_pair_distance() == 0.0
    assert ens.merged_imbalance() == 0.0


def test_merged_imbalance_even_k():
    # k=4: super-bins are (0+1) and (2+3), plain difference
    ens = BinEnsemble(1, 4)
    ens.apply([1.0], 0)
    ens.apply([2.0], 1)
    ens.apply([0.5], 2)
    ens.apply([0.25], 3)
    assert ens.merged_imbalance() == pytest.approx(abs((1.0 + 2.0) - (0.5 + 0.25)))


def test_merged_imbalance_odd_k_weight():
    # k=3: k'=1, first super-bin reweighted by 1 + 1/1 = 2
    ens = BinEnsemble(1, 3)
    ens.apply([1.0], 0)
    ens.apply([0.5], 1)
    ens.apply([0.25], 2)
    assert ens.merged_imbalance() == pytest.approx(abs(2.0 * 1.0 - (0.5 + 0.25)))


def test_merged_imbalance_k2_equals_pair_distance():
    ens = BinEnsemble(2, 2)
    ens.apply([0.3, -0.4], 0)
    ens.apply([-0.1, 0.2], 1)
    d01 = float(np.linalg.norm(ens.pair_delta(0, 1)))
    assert ens.merged_imbalance() == pytest.approx(d01, rel=1e-15)


@given(vectors(2, 12))
@settings(max_examples=50)
def test_pair_delta_antisymmetry(vs):
    ens = BinEnsemble(2, 3)
    for i, v in enumerate(vs):
        ens.apply(v, i % 3)
    np.testing.assert_array_equal(ens.pair_delta(0, 2), -ens.pair_delta(2, 0))


@given(vectors(2, 12), st.permutations([0, 1, 2]))
@settings(max_examples=50)
def test_observables_invariant_under_bin_relabeling(vs, perm):
    a = BinEnsemble(2, 3)
    b = BinEnsemble(2, 3)
    for i, v in enumerate(vs):
        a.apply(v, i % 3)
        b.apply(v, perm[i % 3])
    assert a.observable_s() == pytest.approx(b.observable_s(), rel=1e-12)
    assert a.max_pair_distance() == pytest.approx(b.max_pair_distance(), rel=1e-12)


@given(vectors(3, 15))
@settings(max_examples=50)
def test_triangle_bound(vs):
    # 2S/k >= maxPair^2 in every reachable state
    ens = BinEnsemble(3, 4)
    for i, v in enumerate(vs):
        ens.apply(v, (i * 7) % 4)
        s = ens.observable_s()
        mp = ens.max_pair_distance()
        assert 2.0 * s / ens.k >= mp * mp - 1e-12 * (1.0 + s)


@given(vectors(2, 20))
@settings(max_examples=50)
def test_conservation_of_total_sum(vs):
    ens = BinEnsemble(2, 3)
    total = np.zeros(2)
    for i, v in enumerate(vs):
        ens.apply(v, (i * 5) % 3)
        total += np.asarray(v)
    np.testing.assert_allclose(ens.sums.sum(axis=0), total, atol=1e-12)


def test_compensated_sum_beats_naive_accumulation():
    # one bin fed 10^5 copies of 0.1: compensated total is exact to 1 ulp
    ens = BinEnsemble(1, 2)
    for _ in range(100_000):
        ens.apply([0.1], 0)
    exact = 100_000 * 0.1
    assert abs(ens.sums[0, 0] - exact) <= abs(exact) * 1e-15


def test_pair_observables_consistency():
    ens = BinEnsemble(2, 3)
    for i, v in enumerate([[0.5, 0.1], [-0.2, 0.4], [0.3, -0.3], [0.1, 0.1]]):
        ens.apply(v, i % 3)
    obs = ens.pair_observables(with_deltas=True)
    assert obs.s == pytest.approx(ens.observable_s())
    assert obs.max_pair_dist == pytest.approx(ens.max_pair_distance())
    # deltas holds the strict upper triangle of squared distances
    assert obs.deltas is not None
    assert obs.deltas[1, 0] == 0.0
    per_pair = [obs.deltas[i, j] for i in range(3) for j in range(i + 1, 3)]
    assert sum(per_pair) == pytest.approx(obs.s)
    assert max(per_pair) == pytest.approx(obs.max_pair_dist**2)


def test_copy_is_independent():
    ens = BinEnsemble(1, 2)
    ens.apply([1.0], 0)
    dup = ens.copy()
    dup.apply([1.0], 0)
    assert ens.sums[0, 0] == 1.0
    assert dup.sums[0, 0] == 2.0
    assert dup.n == ens.n + 1


def test_max_pair_is_max_over_all_pairs():
    ens = BinEnsemble(1, 3)
    ens.apply([4.0], 0)
    ens.apply([1.0], 1)
    # distances: |4-1|=3, |4-0|=4, |1-0|=1
    assert ens.max_pair_distance() == pytest.approx(4.0)
