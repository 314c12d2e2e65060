"""Assignment rules: crafted decision cases and structural properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vecbal import _scalar
from vecbal.core import BinEnsemble
from vecbal.rng import Stream
from vecbal.strategies import (
    STRATEGY_NAMES,
    StrategySpec,
    assign,
    assign_best_of_two,
    assign_greedy_1d,
    assign_inner_product,
    assign_uniform_random,
)

unit = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def ensemble(sums):
    sums = np.asarray(sums, dtype=np.float64)
    ens = BinEnsemble(sums.shape[1], sums.shape[0])
    ens.sums[:] = sums
    return ens


# ---------------------------------------------------------------------------
# spec container


def test_strategy_spec_names_and_codes():
    codes = [StrategySpec(n).code for n in STRATEGY_NAMES]
    assert codes == [0, 1, 2, 3]
    with pytest.raises(ValueError, match="unknown strategy"):
        StrategySpec("greedy")


def test_uses_stream_flags():
    assert StrategySpec("uniform-random").uses_stream
    assert StrategySpec("best-of-two").uses_stream
    assert not StrategySpec("greedy-1d").uses_stream
    assert not StrategySpec("inner-product").uses_stream


def test_check_dimensions():
    StrategySpec("greedy-1d").check_dimensions(1, 2)
    with pytest.raises(ValueError, match="d = 1"):
        StrategySpec("greedy-1d").check_dimensions(2, 2)
    with pytest.raises(ValueError, match="k must be >= 2"):
        StrategySpec("inner-product").check_dimensions(2, 1)


# ---------------------------------------------------------------------------
# greedy-1d


def test_greedy_negative_to_largest_positive_to_smallest():
    ens = ensemble([[2.0], [-1.0], [0.5]])
    assert assign_greedy_1d([-0.3], ens).bin == 0  # largest bin takes negatives
    assert assign_greedy_1d([0.3], ens).bin == 1  # smallest takes positives


def test_greedy_zero_counts_as_nonnegative():
    ens = ensemble([[2.0], [-1.0]])
    assert assign_greedy_1d([0.0], ens).bin == 1


def test_greedy_ties_take_lowest_index():
    ens = ensemble([[1.0], [1.0], [0.0]])
    assert assign_greedy_1d([-0.5], ens).bin == 0  # two largest tie
    ens2 = ensemble([[0.0], [0.0]])
    assert assign_greedy_1d([0.7], ens2).bin == 0


def test_greedy_requires_d1():
    with pytest.raises(ValueError):
        assign_greedy_1d([0.5, 0.5], ensemble([[0.0, 0.0], [0.0, 0.0]]))


# ---------------------------------------------------------------------------
# inner product


def test_inner_product_picks_minimal_projection():
    ens = ensemble([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
    assert assign_inner_product([1.0, 0.0], ens).bin == 1
    assert assign_inner_product([-1.0, 0.0], ens).bin == 0
    assert assign_inner_product([0.0, -1.0], ens).bin == 2


def test_inner_product_ties_take_lowest_index():
    ens = ensemble([[1.0, 0.0], [1.0, 0.0]])
    assert assign_inner_product([0.5, 0.5], ens).bin == 0
    # orthogonal vector ties all bins at 0
    ens2 = ensemble([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    assert assign_inner_product([0.0, 1.0], ens2).bin == 0


def test_inner_product_checks_dimension():
    with pytest.raises(ValueError):
        assign_inner_product([1.0], ensemble([[0.0, 0.0], [0.0, 0.0]]))


@given(st.lists(st.lists(unit, min_size=2, max_size=2), min_size=3, max_size=3), st.lists(unit, min_size=2, max_size=2))
@settings(max_examples=100)
def test_inner_product_is_argmin(sums, v):
    ens = ensemble(sums)
    h = assign_inner_product(v, ens).bin
    ips = [left_to_right_ip(v, row) for row in ens.sums]
    assert ips[h] == min(ips)
    assert h == ips.index(min(ips))  # first of equals


# ---------------------------------------------------------------------------
# uniform random


def test_uniform_random_covers_all_bins_deterministically():
    ens = ensemble([[0.0], [0.0], [0.0]])
    stream = Stream(5)
    seen = {assign_uniform_random([0.1], ens, stream).bin for _ in range(100)}
    assert seen == {0, 1, 2}
    # same seed, same sequence
    s1, s2 = Stream(9), Stream(9)
    a = [assign_uniform_random([0.1], ens, s1).bin for _ in range(20)]
    b = [assign_uniform_random([0.1], ens, s2).bin for _ in range(20)]
    assert a == b


def test_uniform_random_ignores_state():
    lopsided = ensemble([[100.0], [0.0]])
    stream = Stream(3)
    bins = [assign_uniform_random([1.0], lopsided, stream).bin for _ in range(200)]
    assert 60 < sum(bins) < 140  # both bins roughly equally often


# ---------------------------------------------------------------------------
# best of two


def test_pair_decode_is_lexicographic():
    # k=4 has 6 unordered pairs in lexicographic order
    expected = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    got = [_scalar.unordered_pair(r, 4) for r in range(6)]
    assert got == expected


def test_best_of_two_prefers_smaller_inner_product():
    ens = ensemble([[1.0, 0.0], [-1.0, 0.0]])
    # k=2: only pair (0,1); v = (1,0) has ip 1 vs -1, bin 1 wins
    dec = assign_best_of_two([1.0, 0.0], ens, Stream(1))
    assert dec.bin == 1
    assert dec.chosen_pair == (0, 1)


def test_best_of_two_tie_takes_lower_index():
    ens = ensemble([[1.0, 0.0], [1.0, 0.0]])
    dec = assign_best_of_two([0.3, 0.4], ens, Stream(2))
    assert dec.bin == 0


def test_best_of_two_consumes_one_draw():
    ens = ensemble([[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
    stream = Stream(11)
    assign_best_of_two([0.5, 0.0], ens, stream)
    assert stream.counter == 1


def left_to_right_ip(v, row):
    # the rules accumulate left to right; np.dot may FMA and break ties
    # differently, so the reference must use the same order of operations
    acc = 0.0
    for a, b in zip(v, row):
        acc += a * b
    return acc


@given(st.integers(min_value=0, max_value=2**40), st.lists(unit, min_size=2, max_size=2))
@settings(max_examples=100)
def test_best_of_two_bin_is_in_chosen_pair(seed, v):
    ens = ensemble([[0.5, 0.1], [-0.2, 0.4], [0.3, -0.3], [0.0, 0.0]])
    dec = assign_best_of_two(v, ens, Stream(seed))
    i, j = dec.chosen_pair
    assert 0 <= i < j < 4
    assert dec.bin in (i, j)
    ip_i = left_to_right_ip(v, ens.sums[i])
    ip_j = left_to_right_ip(v, ens.sums[j])
    assert dec.bin == (i if ip_i <= ip_j else j)


@given(st.integers(min_value=0, max_value=2**40),
       st.lists(st.lists(unit, min_size=3, max_size=3), min_size=2, max_size=2),
       st.lists(unit, min_size=3, max_size=3))
@settings(max_examples=100)
def test_best_of_two_equals_inner_product_at_k2(seed, sums, v):
    # with two bins the only candidate pair is (0,1), so the rules agree
    ens = ensemble(sums)
    b2 = assign_best_of_two(v, ens, Stream(seed)).bin
    ip = assign_inner_product(v, ens).bin
    assert b2 == ip


# ---------------------------------------------------------------------------
# dispatch


def test_assign_dispatch_matches_direct_calls():
    ens = ensemble([[1.0, 0.0], [-1.0, 0.0]])
    v = [0.8, 0.1]
    assert assign(StrategySpec("inner-product"), v, ens, Stream(1)).bin == assign_inner_product(v, ens).bin
    assert assign(StrategySpec("best-of-two"), v, ens, Stream(7)).bin == assign_best_of_two(v, ens, Stream(7)).bin
    assert assign(StrategySpec("uniform-random"), v, ens, Stream(3)).bin == assign_uniform_random(v, ens, Stream(3)).bin
    ens1 = ensemble([[0.5], [-0.5]])
    assert assign(StrategySpec("greedy-1d"), [0.2], ens1, Stream(1)).bin == assign_greedy_1d([0.2], ens1).bin
