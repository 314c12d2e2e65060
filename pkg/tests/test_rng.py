"""Stream determinism, reference vectors, and the vectorized twin."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vecbal.rng import (
    GOLDEN,
    MASK64,
    Stream,
    derive_trial_seed,
    f64_block,
    mix64,
    u64_block,
)

# Published SplitMix64 reference outputs for seed 0 (the widely mirrored
# test vector of the original public-domain implementation).
SEED0_OUTPUTS = [
    0xE220A8397B1DCDAF,
    0x6E789E6AA1B965F4,
    0x06C45D188009454F,
    0xF88BB8A8724C81EC,
    0x1B39896A51A8749B,
]

# Pinned derived seed for (master_seed=1, trial_index=0); the golden
# trajectory and the README quote this value.
GOLDEN_TRIAL_SEED = 16490336266968443936


def test_seed0_reference_vector():
    s = Stream(0)
    assert [s.next_u64() for _ in range(5)] == SEED0_OUTPUTS


def test_counter_advances_by_one_per_output():
    s = Stream(123)
    assert s.counter == 0
    s.next_u64()
    s.next_f64()
    s.next_open()
    assert s.counter == 3


def test_stream_is_a_pure_function_of_seed_and_counter():
    a = Stream(99)
    for _ in range(10):
        a.next_u64()
    b = Stream(99, counter=10)
    assert a.next_u64() == b.next_u64()


def test_derive_trial_seed_pinned_value():
    assert derive_trial_seed(1, 0) == GOLDEN_TRIAL_SEED


def test_derive_trial_seed_rejects_negative_index():
    with pytest.raises(ValueError):
        derive_trial_seed(1, -1)


def test_mix64_matches_direct_formula():
    z = 0x123456789ABCDEF0
    w = z
    w = ((w ^ (w >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    w = ((w ^ (w >> 27)) * 0x94D049BB133111EB) & MASK64
    w ^= w >> 31
    assert mix64(z) == w


@given(st.integers(min_value=0, max_value=MASK64), st.integers(min_value=0, max_value=2**20))
def test_u64_block_matches_sequential_stream(seed, start):
    s = Stream(seed, counter=start)
    seq = [s.next_u64() for _ in range(8)]
    blk = u64_block(seed, start, 8)
    assert [int(x) for x in blk] == seq


@given(st.integers(min_value=0, max_value=MASK64))
def test_f64_block_matches_sequential_stream(seed):
    s = Stream(seed)
    seq = [s.next_f64() for _ in range(8)]
    blk = f64_block(seed, 0, 8)
    assert [float(x) for x in blk] == seq


@given(st.integers(min_value=0, max_value=MASK64))
def test_double_ranges(seed):
    s = Stream(seed)
    for _ in range(32):
        u = s.next_f64()
        assert 0.0 <= u < 1.0
    for _ in range(32):
        u = s.next_open()
        assert 0.0 < u <= 1.0


@given(st.integers(min_value=0, max_value=MASK64), st.integers(min_value=0, max_value=1000))
def test_derived_seeds_distinct_across_trials(master, i):
    assert derive_trial_seed(master, i) != derive_trial_seed(master, i + 1)


def test_seed_wraps_to_64_bits():
    assert Stream(MASK64 + 5).next_u64() == Stream(4).next_u64()


def test_golden_increment_is_odd():
    # an even increment would halve the period of the counter sequence
    assert GOLDEN % 2 == 1


def test_block_uses_numpy_uint64():
    blk = u64_block(7, 0, 4)
    assert blk.dtype == np.uint64
