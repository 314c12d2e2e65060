"""Distribution specs, samplers, and measure-theoretic probes.

Four families of input distribution on the unit ball:

  UniformBall(d)        uniform on the solid ball: Gaussian direction,
                        radius U^(1/d) (rejection free in every d)
  Atomic(atoms, w)      finitely supported, inverse CDF on one draw
  Mixture(components)   finite mixture of the two leaf families above
  PathologicalOmega(w)  the adversarial planar mixture: atom (0, 1/2)
                        w.p. 1/3, uniform disk w.p. 1/3, and atoms
                        (1/L_s, -1/2) w.p. (6/pi^2) s^-2 folded past
                        s_cap, with L_s the minimal grid scale from
                        build_length_scales

Two sampling paths exist and are deliberately separate:

  * trial path: scalar, fixed documented draw counts per step, byte
    identical between the compiled and pure-Python kernels (see
    _scalar.py and the kernels);
  * probe path: the block samplers below, numpy-vectorized over the
    same uniform u64 stream but with columnwise transforms.  Used by
    slab/C_mu estimators and distribution-law tests.  Reproducible and
    backend independent, but not stream-compatible with the trial path.

Block draw layout: uniform-ball blocks consume n*(2*ceil(d/2)+1) draws
reshaped row-major, so sample i uses the same draws in the same order
as the scalar path; branching variants (mixture, pathological) consume
a selector block first and then one sub-block per branch, each on a
sub-seed derived with the same mixing function as trial seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import GOLDEN, MASK64, Stream, f64_block, mix64, u64_block

BASEL = 6.0 / (math.pi * math.pi)
NORM_TOL = 1e-12
WEIGHT_TOL = 1e-12

# kernel dispatch codes, shared with both kernel twins
KIND_UNIFORM_BALL = 0
KIND_ATOMIC = 1
KIND_MIXTURE = 2
KIND_PATHOLOGICAL = 3

_EXP_OVERFLOW = 700.0  # exp overflows float64 just above 709


class OmegaDomainError(ValueError):
    """Raised when a breakpoint omega is evaluated outside its table."""


@dataclass(frozen=True)
class BuiltinOmega:
    """Named monotone unbounded map: identity, power, or log-power.

    power(a):     x -> x**a          (a > 0)
    log-power(a): x -> (ln(1+x))**a  (a > 0)
    """

    name: str
    exponent: float | None = None

    def __post_init__(self):
        if self.name not in ("identity", "power", "log-power"):
            raise ValueError(f"unknown omega builtin {self.name!r}")
        if self.name == "identity":
            if self.exponent is not None:
                raise ValueError("identity omega takes no exponent")
        else:
            if self.exponent is None or not self.exponent > 0:
                raise ValueError(f"{self.name} omega needs a positive exponent")

    def __call__(self, x: float) -> float:
        if x <= 0:
            raise ValueError("omega is defined for positive arguments")
        if self.name == "identity":
            return x
        if self.name == "power":
            if math.isinf(x):
                return math.inf
            try:
                return x**self.exponent
            except OverflowError:
                return math.inf
        # log-power
        y = math.log1p(x) if math.isfinite(x) else math.inf
        if math.isinf(y):
            return math.inf
        try:
            return y**self.exponent
        except OverflowError:
            return math.inf


@dataclass(frozen=True)
class TableOmega:
    """Finite monotone breakpoint table, right-constant between points.

    Evaluation below the first breakpoint or beyond the last one raises
    OmegaDomainError: extrapolating would fabricate a different map.
    """

    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.breakpoints)
        if not pts:
            raise ValueError("breakpoint table must be non-empty")
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
        if any(not (a < b) for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoint x values must be strictly increasing")
        if any(not (a <= b) for a, b in zip(ys, ys[1:])):
            raise ValueError("breakpoint y values must be nondecreasing")
        if any(not y > 0 for y in ys) or any(not x > 0 for x in xs):
            raise ValueError("breakpoint coordinates must be positive")
        object.__setattr__(self, "breakpoints", pts)

    def __call__(self, x: float) -> float:
        pts = self.breakpoints
        if x < pts[0][0]:
            raise OmegaDomainError(f"omega argument {x!r} below table domain")
        if x > pts[-1][0]:
            raise OmegaDomainError("omega domain too small")
        lo, hi = 0, len(pts) - 1
        while lo < hi:  # largest index with x_i <= x
            mid = (lo + hi + 1) // 2
            if pts[mid][0] <= x:
                lo = mid
            else:
                hi = mid - 1
        return pts[lo][1]


OmegaSpec = BuiltinOmega | TableOmega


@dataclass(frozen=True)
class LengthScaleEntry:
    s: int
    length_scale: float  # L_s, minimal grid value satisfying the defining inequality
    horizon: float  # T_s = floor(exp(s^2 L_s^2)); +inf when saturated
    saturated: bool


@dataclass(frozen=True)
class LengthScaleTable:
    entries: tuple[LengthScaleEntry, ...]
    tail_mass: float


def _grid_value(j: int) -> float:
    return 2.0 + j / 100.0


def _scale_condition(omega, s: int, j: int) -> bool:
    length = _grid_value(j)
    arg = s * s * length * length
    x = math.inf if arg > _EXP_OVERFLOW else math.expm1(arg)
    return omega(x) >= 10.0 * s


def build_length_scales(omega: OmegaSpec, s_cap: int) -> LengthScaleTable:
    """Minimal grid scales L_s with omega(exp(s^2 L_s^2) - 1) >= 10 s.

    The grid is {2 + j/100 : j >= 0}; the condition is monotone in j, so
    the minimal point is found by doubling then bisection.  A breakpoint
    omega whose table ends before the condition can be met raises
    OmegaDomainError("omega domain too small") instead of extrapolating.
    """
    if s_cap < 1:
        raise ValueError("s_cap must be >= 1")
    entries = []
    for s in range(1, s_cap + 1):
        if _scale_condition(omega, s, 0):
            j_min = 0
        else:
            lo = 0  # condition known false here
            hi = 1
            while not _scale_condition(omega, s, hi):
                lo = hi
                hi *= 2
                if hi > 1 << 40:
                    raise ValueError("length-scale search diverged; omega grows too slowly")
            while hi - lo > 1:  # minimal j in (lo, hi]
                mid = (lo + hi) // 2
                if _scale_condition(omega, s, mid):
                    hi = mid
                else:
                    lo = mid
            j_min = hi
        length = _grid_value(j_min)
        arg = s * s * length * length
        saturated = arg > _EXP_OVERFLOW
        horizon = math.inf if saturated else math.floor(math.exp(arg))
        entries.append(LengthScaleEntry(s, length, horizon, saturated))
    partial = 0.0
    for s in range(1, s_cap + 1):
        partial += BASEL / (s * s)
    return LengthScaleTable(entries=tuple(entries), tail_mass=1.0 - partial)


# --------------------------------------------------------------------------
# distribution specs


@dataclass(frozen=True)
class UniformBall:
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("uniform ball needs d >= 1")


@dataclass(frozen=True)
class Atomic:
    atoms: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        atoms = tuple(tuple(float(c) for c in a) for a in self.atoms)
        weights = tuple(float(w) for w in self.weights)
        if not atoms:
            raise ValueError("atomic distribution needs at least one atom")
        if len(atoms) != len(weights):
            raise ValueError("atoms and weights must have equal length")
        d = len(atoms[0])
        if d < 1 or any(len(a) != d for a in atoms):
            raise ValueError("atoms must share one positive dimension")
        if any(not w > 0 for w in weights):
            raise ValueError("weights must be positive")
        if abs(math.fsum(weights) - 1.0) > WEIGHT_TOL:
            raise ValueError("weights must sum to 1")
        for a in atoms:
            if math.sqrt(math.fsum(c * c for c in a)) > 1.0 + NORM_TOL:
                raise ValueError(f"atom {a} lies outside the unit ball")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def d(self) -> int:
        return len(self.atoms[0])


@dataclass(frozen=True)
class Mixture:
    """Finite mixture whose components are leaves (UniformBall or Atomic)."""

    components: tuple[tuple[float, "UniformBall | Atomic"], ...]

    def __post_init__(self):
        comps = tuple((float(w), spec) for w, spec in self.components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        for w, spec in comps:
            if not isinstance(spec, (UniformBall, Atomic)):
                raise ValueError("mixture components must be uniform-ball or atomic")
            if not w > 0:
                raise ValueError("component weights must be positive")
        if abs(math.fsum(w for w, _ in comps) - 1.0) > WEIGHT_TOL:
            raise ValueError("component weights must sum to 1")
        d = comps[0][1].d
        if any(spec.d != d for _, spec in comps):
            raise ValueError("mixture components must share one dimension")
        object.__setattr__(self, "components", comps)

    @property
    def d(self) -> int:
        return self.components[0][1].d


@dataclass(frozen=True)
class PathologicalOmega:
    """The adversarial planar mixture driven by a monotone map omega."""

    omega: OmegaSpec
    s_cap: int = 50

    def __post_init__(self):
        if self.s_cap < 1:
            raise ValueError("s_cap must be >= 1")
        if not isinstance(self.omega, (BuiltinOmega, TableOmega)):
            raise ValueError("omega must be a BuiltinOmega or TableOmega")

    @property
    def d(self) -> int:
        return 2


DistributionSpec = UniformBall | Atomic | Mixture | PathologicalOmega


def spec_dimension(spec: DistributionSpec) -> int:
    return spec.d


# --------------------------------------------------------------------------
# dict form (config files, digests); strict keys both directions


def _check_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{where} must be an object")
    for key in obj:
        if key not in allowed:
            raise ValueError(f"unknown key {key!r} in {where}")
    for key in required:
        if key not in obj:
            raise ValueError(f"missing key {key!r} in {where}")


def omega_to_dict(omega: OmegaSpec) -> dict:
    if isinstance(omega, BuiltinOmega):
        if omega.name == "identity":
            return {"kind": "identity"}
        return {"kind": omega.name, "exponent": omega.exponent}
    return {"kind": "table", "breakpoints": [[x, y] for x, y in omega.breakpoints]}


def omega_from_dict(obj: dict) -> OmegaSpec:
    _check_keys(obj, {"kind", "exponent", "breakpoints"}, {"kind"}, "omega")
    kind = obj["kind"]
    if kind == "table":
        if "exponent" in obj:
            raise ValueError("omega table takes no 'exponent'")
        if "breakpoints" not in obj:
            raise ValueError("missing key 'breakpoints' in omega")
        return TableOmega(breakpoints=tuple((x, y) for x, y in obj["breakpoints"]))
    if "breakpoints" in obj:
        raise ValueError(f"omega {kind!r} takes no 'breakpoints'")
    exponent = obj.get("exponent")
    return BuiltinOmega(name=kind, exponent=None if exponent is None else float(exponent))


def spec_to_dict(spec: DistributionSpec) -> dict:
    if isinstance(spec, UniformBall):
        return {"variant": "uniform-ball", "d": spec.d}
    if isinstance(spec, Atomic):
        return {
            "variant": "atomic",
            "atoms": [list(a) for a in spec.atoms],
            "weights": list(spec.weights),
        }
    if isinstance(spec, Mixture):
        return {
            "variant": "mixture",
            "components": [
                {"weight": w, "distribution": spec_to_dict(s)} for w, s in spec.components
            ],
        }
    return {
        "variant": "pathological",
        "omega": omega_to_dict(spec.omega),
        "sCap": spec.s_cap,
    }


def spec_from_dict(obj: dict) -> DistributionSpec:
    if not isinstance(obj, dict) or "variant" not in obj:
        raise ValueError("distribution must be an object with a 'variant' key")
    variant = obj["variant"]
    if variant == "uniform-ball":
        _check_keys(obj, {"variant", "d"}, {"variant", "d"}, "distribution")
        return UniformBall(d=int(obj["d"]))
    if variant == "atomic":
        _check_keys(obj, {"variant", "atoms", "weights"}, {"variant", "atoms", "weights"}, "distribution")
        return Atomic(
            atoms=tuple(tuple(a) for a in obj["atoms"]),
            weights=tuple(obj["weights"]),
        )
    if variant == "mixture":
        _check_keys(obj, {"variant", "components"}, {"variant", "components"}, "distribution")
        comps = []
        for c in obj["components"]:
            _check_keys(c, {"weight", "distribution"}, {"weight", "distribution"}, "mixture component")
            sub = spec_from_dict(c["distribution"])
            if not isinstance(sub, (UniformBall, Atomic)):
                raise ValueError("mixture components must be uniform-ball or atomic")
            comps.append((float(c["weight"]), sub))
        return Mixture(components=tuple(comps))
    if variant == "pathological":
        _check_keys(obj, {"variant", "omega", "sCap"}, {"variant", "omega"}, "distribution")
        return PathologicalOmega(
            omega=omega_from_dict(obj["omega"]),
            s_cap=int(obj.get("sCap", 50)),
        )
    raise ValueError(f"unknown distribution variant {variant!r}")


# --------------------------------------------------------------------------
# compiled encoding consumed by both kernel twins

_EMPTY_F = np.zeros(0, dtype=np.float64)
_EMPTY_I = np.zeros(0, dtype=np.int64)
_EMPTY_M = np.zeros((0, 1), dtype=np.float64)


@dataclass
class CompiledDistribution:
    kind: int
    d: int
    atoms: np.ndarray = field(default_factory=lambda: _EMPTY_M)  # (m, d)
    weights: np.ndarray = field(default_factory=lambda: _EMPTY_F)  # (m,)
    comp_kind: np.ndarray = field(default_factory=lambda: _EMPTY_I)  # (c,)
    comp_w: np.ndarray = field(default_factory=lambda: _EMPTY_F)  # (c,)
    comp_off: np.ndarray = field(default_factory=lambda: _EMPTY_I)  # (c,)
    comp_cnt: np.ndarray = field(default_factory=lambda: _EMPTY_I)  # (c,)
    pw: np.ndarray = field(default_factory=lambda: _EMPTY_F)  # (s_cap,)
    pinvl: np.ndarray = field(default_factory=lambda: _EMPTY_F)  # (s_cap,)

    @property
    def draws_hint(self) -> int:
        """Upper bound on uniform draws per sample (scratch sizing)."""
        d = self.d
        return 2 * ((d + 1) // 2) + 2

    @property
    def gauss_len(self) -> int:
        return 2 * ((self.d + 1) // 2)


def compile_distribution(spec: DistributionSpec) -> CompiledDistribution:
    """Flatten a spec into the array form the kernels consume."""
    if isinstance(spec, UniformBall):
        return CompiledDistribution(kind=KIND_UNIFORM_BALL, d=spec.d)
    if isinstance(spec, Atomic):
        return CompiledDistribution(
            kind=KIND_ATOMIC,
            d=spec.d,
            atoms=np.array(spec.atoms, dtype=np.float64),
            weights=np.array(spec.weights, dtype=np.float64),
        )
    if isinstance(spec, Mixture):
        d = spec.d
        kinds, ws, offs, cnts = [], [], [], []
        atom_rows, atom_ws = [], []
        for w, comp in spec.components:
            ws.append(w)
            if isinstance(comp, UniformBall):
                kinds.append(KIND_UNIFORM_BALL)
                offs.append(0)
                cnts.append(0)
            else:
                kinds.append(KIND_ATOMIC)
                offs.append(len(atom_rows))
                cnts.append(len(comp.atoms))
                atom_rows.extend(comp.atoms)
                atom_ws.extend(comp.weights)
        atoms = np.array(atom_rows, dtype=np.float64) if atom_rows else np.zeros((0, d))
        return CompiledDistribution(
            kind=KIND_MIXTURE,
            d=d,
            atoms=atoms,
            weights=np.array(atom_ws, dtype=np.float64),
            comp_kind=np.array(kinds, dtype=np.int64),
            comp_w=np.array(ws, dtype=np.float64),
            comp_off=np.array(offs, dtype=np.int64),
            comp_cnt=np.array(cnts, dtype=np.int64),
        )
    if isinstance(spec, PathologicalOmega):
        table = build_length_scales(spec.omega, spec.s_cap)
        pw = np.array([BASEL / (e.s * e.s) for e in table.entries], dtype=np.float64)
        pinvl = np.array([1.0 / e.length_scale for e in table.entries], dtype=np.float64)
        return CompiledDistribution(kind=KIND_PATHOLOGICAL, d=2, pw=pw, pinvl=pinvl)
    raise TypeError(f"not a distribution spec: {spec!r}")


# --------------------------------------------------------------------------
# vectorized block sampling (probe path)


def _sub_seed(seed: int, tag: int) -> int:
    return mix64((seed & MASK64) ^ ((GOLDEN * (tag + 1)) & MASK64))


def _ball_block_from(seed: int, counter: int, n: int, d: int) -> tuple[np.ndarray, int]:
    """n uniform-ball(d) samples; returns (samples, draws consumed)."""
    npairs = (d + 1) // 2
    cols = 2 * npairs + 1
    raw = u64_block(seed, counter, n * cols).reshape(n, cols)
    hi53 = (raw >> np.uint64(11)).astype(np.float64)
    z = np.empty((n, 2 * npairs))
    for p in range(npairs):
        u1 = (hi53[:, 2 * p] + 1.0) * 2.0**-53  # (0,1], log-safe
        u2 = hi53[:, 2 * p + 1] * 2.0**-53
        r = np.sqrt(-2.0 * np.log(u1))
        a = (2.0 * math.pi) * u2
        z[:, 2 * p] = r * np.cos(a)
        z[:, 2 * p + 1] = r * np.sin(a)
    z = z[:, :d]
    nrm = np.sqrt(np.sum(z * z, axis=1))
    u_rad = hi53[:, 2 * npairs] * 2.0**-53
    rad = u_rad ** (1.0 / d)
    safe = nrm > 0.0
    scale = np.where(safe, rad / np.where(safe, nrm, 1.0), 0.0)
    return z * scale[:, None], n * cols


def _atomic_block_from(
    seed: int, counter: int, n: int, atoms: np.ndarray, weights: np.ndarray
) -> tuple[np.ndarray, int]:
    u = f64_block(seed, counter, n)
    cum = np.cumsum(weights)
    idx = np.searchsorted(cum, u, side="right")
    idx = np.minimum(idx, len(weights) - 1)
    return atoms[idx], n


def sample_block(spec: DistributionSpec, stream: Stream, n: int) -> np.ndarray:
    """n samples as an (n, d) array, advancing the stream.

    Branching specs (mixture, pathological) place branch sub-blocks on
    derived sub-seeds; the parent stream advances by the selector count.

    This is the statistical probe path (slab and projection estimates),
    not the trajectory path: numpy's vectorized transcendentals may
    differ from the scalar sampler by an ulp, so blocks agree with the
    sequential sampler to ~1e-15 relative, not bit for bit.  Atom-only
    specs involve no transcendentals and do match exactly.
    """
    if n < 1:
        raise ValueError("need n >= 1 samples")
    cd = compile_distribution(spec)
    d = cd.d
    if cd.kind == KIND_UNIFORM_BALL:
        out, used = _ball_block_from(stream.seed, stream.counter, n, d)
        stream.counter += used
        return out
    if cd.kind == KIND_ATOMIC:
        out, used = _atomic_block_from(stream.seed, stream.counter, n, cd.atoms, cd.weights)
        stream.counter += used
        return out
    if cd.kind == KIND_MIXTURE:
        u = f64_block(stream.seed, stream.counter, n)
        sub_base = _sub_seed(stream.seed, stream.counter)
        stream.counter += n
        cum = np.cumsum(cd.comp_w)
        which = np.minimum(np.searchsorted(cum, u, side="right"), len(cum) - 1)
        out = np.zeros((n, d))
        for c in range(len(cum)):
            mask = which == c
            cnt = int(mask.sum())
            if cnt == 0:
                continue
            sub = _sub_seed(sub_base, c)
            if cd.comp_kind[c] == KIND_UNIFORM_BALL:
                out[mask], _ = _ball_block_from(sub, 0, cnt, d)
            else:
                off, m = int(cd.comp_off[c]), int(cd.comp_cnt[c])
                out[mask], _ = _atomic_block_from(
                    sub, 0, cnt, cd.atoms[off : off + m], cd.weights[off : off + m]
                )
        return out
    # pathological
    u = f64_block(stream.seed, stream.counter, n)
    sub_base = _sub_seed(stream.seed, stream.counter)
    stream.counter += n
    out = np.zeros((n, 2))
    top = u < 1.0 / 3.0
    mid = (~top) & (u < 2.0 / 3.0)
    low = ~(top | mid)
    out[top] = (0.0, 0.5)
    n_mid = int(mid.sum())
    if n_mid:
        out[mid], _ = _ball_block_from(_sub_seed(sub_base, 0), 0, n_mid, 2)
    n_low = int(low.sum())
    if n_low:
        us = f64_block(_sub_seed(sub_base, 1), 0, n_low)
        cum = np.cumsum(cd.pw)
        s_idx = np.minimum(np.searchsorted(cum, us, side="right"), len(cum) - 1)
        out[low, 0] = cd.pinvl[s_idx]
        out[low, 1] = -0.5
    return out


# --------------------------------------------------------------------------
# measure probes


@dataclass(frozen=True)
class SlabEstimate:
    estimate: float
    std_err: float


def slab_probability_estimate(
    spec: DistributionSpec, e, b: float, n_samples: int, stream: Stream
) -> SlabEstimate:
    """Monte Carlo estimate of mu({x : |<x,e>| <= b}) with binomial s.e."""
    e = np.asarray(e, dtype=np.float64)
    if abs(float(np.sqrt(e @ e)) - 1.0) > 1e-9:
        raise ValueError("direction e must be a unit vector")
    if not 0.0 <= b <= 1.0:
        raise ValueError("slab half-width b must lie in [0, 1]")
    if n_samples < 1:
        raise ValueError("need n_samples >= 1")
    x = sample_block(spec, stream, n_samples)
    hits = int(np.count_nonzero(np.abs(x @ e) <= b))
    p = hits / n_samples
    return SlabEstimate(estimate=p, std_err=math.sqrt(p * (1.0 - p) / n_samples))


@dataclass(frozen=True)
class CmuEstimate:
    c_hat: float
    per_direction: tuple[float, ...]
    std_errs: tuple[float, ...]
    directions: np.ndarray


def estimate_cmu(
    spec: DistributionSpec,
    n_directions: int,
    n_samples: int,
    stream: Stream,
    chunk: int = 1 << 16,
) -> CmuEstimate:
    """Per-direction Monte Carlo estimates of f_mu(e) = E|<X,e>|.

    Directions are uniform on the sphere; one common sample block is
    projected onto all of them (common random numbers: the shared level
    noise cancels out of cross-direction comparisons, which is what the
    rotational-symmetry checks consume).  c_hat = min over directions,
    an upward-biased estimate of the infimum C_mu since only finitely
    many directions are probed.
    """
    if n_directions < 1 or n_samples < 1:
        raise ValueError("need n_directions >= 1 and n_samples >= 1")
    d = spec_dimension(spec)
    npairs = (d + 1) // 2
    raw = u64_block(stream.seed, stream.counter, n_directions * 2 * npairs)
    stream.counter += n_directions * 2 * npairs
    hi53 = (raw >> np.uint64(11)).astype(np.float64).reshape(n_directions, 2 * npairs)
    z = np.empty_like(hi53)
    for p in range(npairs):
        u1 = (hi53[:, 2 * p] + 1.0) * 2.0**-53
        u2 = hi53[:, 2 * p + 1] * 2.0**-53
        r = np.sqrt(-2.0 * np.log(u1))
        a = (2.0 * math.pi) * u2
        z[:, 2 * p] = r * np.cos(a)
        z[:, 2 * p + 1] = r * np.sin(a)
    dirs = z[:, :d]
    nrm = np.sqrt(np.sum(dirs * dirs, axis=1))
    nrm[nrm == 0.0] = 1.0
    dirs = dirs / nrm[:, None]

    sums = np.zeros(n_directions)
    sqs = np.zeros(n_directions)
    left = n_samples
    while left > 0:
        m = min(chunk, left)
        x = sample_block(spec, stream, m)
        proj = np.abs(x @ dirs.T)  # (m, n_directions)
        sums += proj.sum(axis=0)
        sqs += (proj * proj).sum(axis=0)
        left -= m
    means = sums / n_samples
    var = np.maximum(sqs / n_samples - means * means, 0.0)
    ses = np.sqrt(var / n_samples)
    return CmuEstimate(
        c_hat=float(means.min()),
        per_direction=tuple(float(v) for v in means),
        std_errs=tuple(float(v) for v in ses),
        directions=dirs,
    )
