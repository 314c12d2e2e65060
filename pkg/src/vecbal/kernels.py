"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled kernels (_kernels_cy) and the fallback (_kernels_py) are
exact twins; which one runs changes speed only, never trajectories.
Selection happens at import: the extension is used when it built
successfully, unless VECBAL_FORCE_PY_KERNELS=1 forces the fallback.
Each wrapper also takes an explicit backend= override ("cython" or
"python") so tests can compare the two directly.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from ._scalar import py_dist
from .distributions import CompiledDistribution

try:
    from . import _kernels_cy
except ImportError:  # extension not built; fallback only
    _kernels_cy = None

if os.environ.get("VECBAL_FORCE_PY_KERNELS", "") == "1":
    _default = "python"
else:
    _default = "cython" if _kernels_cy is not None else "python"

BACKEND = _default
HAVE_CYTHON = _kernels_cy is not None

ERR_OK = _kernels_py.ERR_OK
ERR_TRIANGLE = _kernels_py.ERR_TRIANGLE
ERR_STEP_BOUND = _kernels_py.ERR_STEP_BOUND
ERR_GREEDY = _kernels_py.ERR_GREEDY
ERR_CONSERVATION = _kernels_py.ERR_CONSERVATION

DEBUG_CONSERVATION = _kernels_py.DEBUG_CONSERVATION
DEBUG_TRIANGLE = _kernels_py.DEBUG_TRIANGLE
DEBUG_STEP_BOUND = _kernels_py.DEBUG_STEP_BOUND
DEBUG_GREEDY = _kernels_py.DEBUG_GREEDY
DEBUG_ALL = DEBUG_CONSERVATION | DEBUG_TRIANGLE | DEBUG_STEP_BOUND | DEBUG_GREEDY

ERR_NAMES = {
    ERR_TRIANGLE: "triangle bound 2S/k >= maxPair^2 violated",
    ERR_STEP_BOUND: "inner-product step bound dS <= (k-1)|v|^2 violated",
    ERR_GREEDY: "greedy-1d bound maxPair <= 1 violated",
    ERR_CONSERVATION: "bin sums do not match the running sample total",
}


def _resolve(backend: str | None) -> str:
    if backend is None:
        return BACKEND
    if backend == "cython":
        if _kernels_cy is None:
            raise RuntimeError("cython kernel backend is not available")
        return "cython"
    if backend == "python":
        return "python"
    raise ValueError(f"unknown kernel backend {backend!r}")


def _flat(cd: CompiledDistribution) -> tuple:
    return (
        int(cd.kind),
        int(cd.d),
        cd.atoms,
        cd.weights,
        cd.comp_kind,
        cd.comp_w,
        cd.comp_off,
        cd.comp_cnt,
        cd.pw,
        cd.pinvl,
    )


def _scratch(cd: CompiledDistribution) -> tuple[np.ndarray, np.ndarray]:
    v = np.zeros(max(cd.d, 2), dtype=np.float64)
    z = np.zeros(max(cd.gauss_len, 2), dtype=np.float64)
    return v, z


def run_trial_kernel(
    sums: np.ndarray,
    comp: np.ndarray,
    cd: CompiledDistribution,
    strategy: int,
    rng_state: np.ndarray,
    n_start: int,
    n_end: int,
    cpt_times: np.ndarray,
    out_rows: np.ndarray,
    d_running: float,
    debug_flags: int,
    totals: np.ndarray,
    err_out: np.ndarray,
    backend: str | None = None,
) -> float:
    if _resolve(backend) == "cython":
        v, z = _scratch(cd)
        return _kernels_cy.run_trial_kernel(
            sums, comp, *_flat(cd), strategy, rng_state,
            n_start, n_end, cpt_times, out_rows,
            d_running, debug_flags, totals, err_out, v, z,
        )
    return _kernels_py.run_trial_kernel(
        sums, comp, py_dist(cd), strategy, rng_state,
        n_start, n_end, cpt_times, out_rows,
        d_running, debug_flags, totals, err_out,
    )


def drift_probe_kernel(
    sums: np.ndarray,
    comp: np.ndarray,
    cd: CompiledDistribution,
    strategy: int,
    rng_state: np.ndarray,
    pair_a: int,
    pair_b: int,
    buckets: np.ndarray,
    burn_in: int,
    n_steps: int,
    reseed: bool,
    reseed_lo: float,
    reseed_hi: float,
    counts: np.ndarray,
    means: np.ndarray,
    m2s: np.ndarray,
    backend: str | None = None,
) -> None:
    if _resolve(backend) == "cython":
        v, z = _scratch(cd)
        _kernels_cy.drift_probe_kernel(
            sums, comp, *_flat(cd), strategy, rng_state,
            pair_a, pair_b, buckets, burn_in, n_steps,
            int(reseed), reseed_lo, reseed_hi,
            counts, means, m2s, v, z,
        )
        return
    _kernels_py.drift_probe_kernel(
        sums, comp, py_dist(cd), strategy, rng_state,
        pair_a, pair_b, buckets, burn_in, n_steps,
        int(reseed), reseed_lo, reseed_hi,
        counts, means, m2s,
    )


def step_probe_kernel(
    sums: np.ndarray,
    comp: np.ndarray,
    cd: CompiledDistribution,
    rng_state: np.ndarray,
    ell_half: float,
    burn_in: int,
    n_steps: int,
    reseed: bool,
    init_sums: np.ndarray,
    counts_out: np.ndarray,
    backend: str | None = None,
) -> None:
    if _resolve(backend) == "cython":
        v, z = _scratch(cd)
        _kernels_cy.step_probe_kernel(
            sums, comp, *_flat(cd), rng_state,
            ell_half, burn_in, n_steps,
            int(reseed), init_sums, counts_out, v, z,
        )
        return
    _kernels_py.step_probe_kernel(
        sums, comp, py_dist(cd), rng_state,
        ell_half, burn_in, n_steps,
        int(reseed), init_sums, counts_out,
    )
