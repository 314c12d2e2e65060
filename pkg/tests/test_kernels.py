"""Backend twins: byte-identical trajectories, dispatch, debug machinery."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from vecbal import kernels
from vecbal.distributions import (
    Atomic,
    BuiltinOmega,
    Mixture,
    PathologicalOmega,
    UniformBall,
    compile_distribution,
)
from vecbal.rng import Stream, derive_trial_seed

HAVE_CYTHON = kernels.HAVE_CYTHON

pytestmark = pytest.mark.skipif(
    not HAVE_CYTHON, reason="compiled backend unavailable; nothing to compare"
)

ATOMS_CROSS = Atomic(
    ((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)),
    (0.25, 0.25, 0.25, 0.25),
)
MIX = Mixture(((0.5, UniformBall(2)), (0.5, ATOMS_CROSS)))
PATHO = PathologicalOmega(BuiltinOmega("identity"), s_cap=20)


def run_backend(strategy_code, d, k, horizon, spec, backend, debug_flags=None, seed=5):
    if debug_flags is None:
        # step-bound assertion applies to the inner-product rule only
        debug_flags = 15 if strategy_code == 2 else 3
    cd = compile_distribution(spec)
    sums = np.zeros((k, d))
    comp = np.zeros((k, d))
    state = np.array([derive_trial_seed(seed, 3), 0], dtype=np.uint64)
    cpt = np.array(sorted({7, 119, 583, 990, 1684, horizon}), dtype=np.int64)
    rows = np.full((len(cpt), 4), np.nan)
    totals = np.zeros((2, d))
    err = np.zeros(2, dtype=np.int64)
    d_run = kernels.run_trial_kernel(
        sums, comp, cd, strategy_code, state, 0, horizon, cpt, rows, 0.0,
        debug_flags, totals, err, backend=backend,
    )
    assert err[0] == kernels.ERR_OK, f"{backend}: {kernels.ERR_NAMES[int(err[0])]} at {err[1]}"
    return d_run, sums, comp, state, rows


PARITY_CASES = [
    ("ip-ball2", 2, 2, 2, UniformBall(2)),
    ("ip-ball3", 2, 3, 4, UniformBall(3)),
    ("rand-ball2", 0, 2, 3, UniformBall(2)),
    ("b2-ball2", 3, 2, 4, UniformBall(2)),
    ("ip-atoms", 2, 2, 2, ATOMS_CROSS),
    ("b2-mix", 3, 2, 3, MIX),
    ("ip-patho", 2, 2, 2, PATHO),
    ("greedy-1d", 1, 1, 3, UniformBall(1)),
]


@pytest.mark.parametrize("name,code,d,k,spec", PARITY_CASES, ids=[c[0] for c in PARITY_CASES])
def test_trial_kernel_byte_parity(name, code, d, k, spec):
    # the compiled twin must reproduce the pure-Python trajectory bit for
    # bit: sums, compensations, rng state, and every checkpoint row
    a = run_backend(code, d, k, 2000, spec, "python")
    b = run_backend(code, d, k, 2000, spec, "cython")
    assert a[0] == b[0]
    np.testing.assert_array_equal(a[1].view(np.uint64), b[1].view(np.uint64))
    np.testing.assert_array_equal(a[2].view(np.uint64), b[2].view(np.uint64))
    np.testing.assert_array_equal(a[3], b[3])
    np.testing.assert_array_equal(a[4].view(np.uint64), b[4].view(np.uint64))


def test_kernel_resume_equals_one_shot():
    # stopping at n=700 and resuming reproduces the single-pass run exactly
    cd = compile_distribution(UniformBall(2))
    for backend in ("python", "cython"):
        one = run_backend(2, 2, 2, 2000, UniformBall(2), backend)

        sums = np.zeros((2, 2)); comp = np.zeros((2, 2))
        state = np.array([derive_trial_seed(5, 3), 0], dtype=np.uint64)
        cpt = np.array(sorted({7, 119, 583, 990, 1684, 2000}), dtype=np.int64)
        rows = np.full((len(cpt), 4), np.nan)
        totals = np.zeros((2, 2)); err = np.zeros(2, dtype=np.int64)
        d_run = kernels.run_trial_kernel(sums, comp, cd, 2, state, 0, 700, cpt,
                                         rows, 0.0, 15, totals, err, backend=backend)
        d_run = kernels.run_trial_kernel(sums, comp, cd, 2, state, 700, 2000, cpt,
                                         rows, d_run, 15, totals, err, backend=backend)
        assert d_run == one[0]
        np.testing.assert_array_equal(sums.view(np.uint64), one[1].view(np.uint64))
        np.testing.assert_array_equal(rows.view(np.uint64), one[4].view(np.uint64))


def test_sample_once_matches_scalar_sampler():
    from vecbal import _kernels_cy, _scalar

    for spec in (UniformBall(3), ATOMS_CROSS, MIX, PATHO):
        cd = compile_distribution(spec)
        pd = _scalar.py_dist(cd)
        stream = Stream(17)
        state = np.array([17, 0], dtype=np.uint64)
        v_py = [0.0] * cd.d
        v_cy = np.zeros(max(cd.d, 2))
        z = np.zeros(max(cd.gauss_len, 2))
        for _ in range(200):
            _scalar.sample_compiled(pd, stream, v_py)
            _kernels_cy.sample_once(cd.kind, cd.d, cd.atoms, cd.weights,
                                    cd.comp_kind, cd.comp_w, cd.comp_off,
                                    cd.comp_cnt, cd.pw, cd.pinvl, state, v_cy, z)
            assert [float(x) for x in v_cy[: cd.d]] == v_py
            assert int(state[1]) == stream.counter


def test_drift_probe_kernel_parity():
    cd = compile_distribution(UniformBall(2))
    out = {}
    for backend in ("python", "cython"):
        sums = np.zeros((3, 2)); comp = np.zeros((3, 2))
        state = np.array([derive_trial_seed(9, 0), 0], dtype=np.uint64)
        buckets = np.array([[0.0, 1.0], [1.0, 4.0], [4.0, 25.0]])
        counts = np.zeros((3, 4), dtype=np.int64)
        means = np.zeros((3, 4)); m2s = np.zeros((3, 4))
        kernels.drift_probe_kernel(sums, comp, cd, 3, state, 0, 1, buckets,
                                   100, 20_000, False, 0.0, 0.0,
                                   counts, means, m2s, backend=backend)
        out[backend] = (counts.copy(), means.copy(), m2s.copy(), state.copy(), sums.copy())
    for a, b in zip(out["python"], out["cython"]):
        np.testing.assert_array_equal(
            a.view(np.uint64) if a.dtype == np.float64 else a,
            b.view(np.uint64) if b.dtype == np.float64 else b,
        )


def test_step_probe_kernel_parity():
    cd = compile_distribution(Atomic(((1.0,), (-1.0,)), (0.5, 0.5)))
    out = {}
    for backend in ("python", "cython"):
        sums = np.array([[4.0], [-4.0]]); comp = np.zeros((2, 1))
        state = np.array([derive_trial_seed(4, 0), 0], dtype=np.uint64)
        init = np.array([[4.0], [-4.0]])
        counts = np.zeros(3, dtype=np.int64)
        kernels.step_probe_kernel(sums, comp, cd, state, 8.0, 50, 20_000,
                                  True, init, counts, backend=backend)
        out[backend] = (counts.copy(), state.copy(), sums.copy())
    for a, b in zip(out["python"], out["cython"]):
        np.testing.assert_array_equal(
            a.view(np.uint64) if a.dtype == np.float64 else a,
            b.view(np.uint64) if b.dtype == np.float64 else b,
        )


def test_conservation_error_code_fires_on_corrupted_totals():
    cd = compile_distribution(UniformBall(2))
    for backend in ("python", "cython"):
        sums = np.zeros((2, 2)); comp = np.zeros((2, 2))
        state = np.array([derive_trial_seed(1, 0), 0], dtype=np.uint64)
        cpt = np.array([50], dtype=np.int64)
        rows = np.full((1, 4), np.nan)
        totals = np.zeros((2, 2))
        totals[0, 0] = 1e6  # poisoned running total
        err = np.zeros(2, dtype=np.int64)
        kernels.run_trial_kernel(sums, comp, cd, 2, state, 0, 100, cpt, rows,
                                 0.0, kernels.DEBUG_CONSERVATION, totals, err,
                                 backend=backend)
        assert int(err[0]) == kernels.ERR_CONSERVATION
        assert int(err[1]) == 50  # detected at the checkpoint


def test_greedy_error_code_fires_on_corrupted_state():
    # greedy bound D <= 1 cannot hold if the bins start 3 apart
    cd = compile_distribution(UniformBall(1))
    for backend in ("python", "cython"):
        sums = np.array([[3.0], [0.0]]); comp = np.zeros((2, 1))
        state = np.array([derive_trial_seed(1, 0), 0], dtype=np.uint64)
        cpt = np.array([100], dtype=np.int64)
        rows = np.full((1, 4), np.nan)
        totals = np.zeros((2, 1)); err = np.zeros(2, dtype=np.int64)
        kernels.run_trial_kernel(sums, comp, cd, 1, state, 0, 100, cpt, rows,
                                 0.0, kernels.DEBUG_GREEDY, totals, err,
                                 backend=backend)
        assert int(err[0]) == kernels.ERR_GREEDY
        assert int(err[1]) == 1


def test_backend_dispatch():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.BACKEND == "cython"  # this build ships the extension
    with pytest.raises(ValueError, match="unknown kernel backend"):
        kernels._resolve("fortran")


def test_force_python_env_var():
    code = (
        "import vecbal.kernels as k; "
        "print(k.BACKEND)"
    )
    env = dict(os.environ, VECBAL_FORCE_PY_KERNELS="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_error_names_cover_failure_codes():
    for code in (kernels.ERR_TRIANGLE, kernels.ERR_STEP_BOUND,
                 kernels.ERR_GREEDY, kernels.ERR_CONSERVATION):
        assert code in kernels.ERR_NAMES
    assert kernels.ERR_OK not in kernels.ERR_NAMES  # success has no message
