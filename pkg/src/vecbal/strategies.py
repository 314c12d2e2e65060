"""The four online assignment rules behind one interface.

Every rule is assign(v, ens, stream) -> AssignmentDecision; rules that
are deterministic functions of (v, ens) ignore the stream.  Ties could
be broken arbitrarily without changing any distributional property;
they are pinned to the lowest bin index for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _scalar
from .core import BinEnsemble
from .rng import Stream

UNIFORM_RANDOM = "uniform-random"
GREEDY_1D = "greedy-1d"
INNER_PRODUCT = "inner-product"
BEST_OF_TWO = "best-of-two"

STRATEGY_NAMES = (UNIFORM_RANDOM, GREEDY_1D, INNER_PRODUCT, BEST_OF_TWO)

_CODES = {
    UNIFORM_RANDOM: _scalar.STRAT_UNIFORM_RANDOM,
    GREEDY_1D: _scalar.STRAT_GREEDY_1D,
    INNER_PRODUCT: _scalar.STRAT_INNER_PRODUCT,
    BEST_OF_TWO: _scalar.STRAT_BEST_OF_TWO,
}


@dataclass(frozen=True)
class StrategySpec:
    name: str

    def __post_init__(self):
        if self.name not in STRATEGY_NAMES:
            raise ValueError(
                f"unknown strategy {self.name!r}; expected one of {', '.join(STRATEGY_NAMES)}"
            )

    @property
    def code(self) -> int:
        return _CODES[self.name]

    @property
    def uses_stream(self) -> bool:
        return self.name in (UNIFORM_RANDOM, BEST_OF_TWO)

    def check_dimensions(self, d: int, k: int) -> None:
        if self.name == GREEDY_1D and d != 1:
            raise ValueError("greedy-1d is defined only for d = 1")
        if d < 1:
            raise ValueError("d must be >= 1")
        if k < 2:
            raise ValueError("k must be >= 2")


@dataclass(frozen=True)
class AssignmentDecision:
    bin: int
    chosen_pair: tuple[int, int] | None = None  # best-of-two only


def assign_uniform_random(v, ens: BinEnsemble, stream: Stream) -> AssignmentDecision:
    """Uniform bin index, independent of v and the ensemble."""
    return AssignmentDecision(bin=_scalar.decide_uniform_random(ens.k, stream))


def assign_greedy_1d(v, ens: BinEnsemble) -> AssignmentDecision:
    """1-d rule: negative values feed the largest bin, positive the smallest."""
    if ens.d != 1:
        raise ValueError("greedy-1d is defined only for d = 1")
    return AssignmentDecision(bin=_scalar.decide_greedy_1d(float(v[0]), ens.sums, ens.k))


def assign_inner_product(v, ens: BinEnsemble) -> AssignmentDecision:
    """Assign to the bin whose sum has minimal inner product with v."""
    if len(v) != ens.d:
        raise ValueError("vector dimension does not match the ensemble")
    return AssignmentDecision(bin=_scalar.decide_inner_product(v, ens.sums, ens.k, ens.d))


def assign_best_of_two(v, ens: BinEnsemble, stream: Stream) -> AssignmentDecision:
    """Sample an unordered pair of bins, assign to the smaller inner product."""
    h, i, j = _scalar.decide_best_of_two(v, ens.sums, ens.k, ens.d, stream)
    return AssignmentDecision(bin=h, chosen_pair=(i, j))


def assign(spec: StrategySpec, v, ens: BinEnsemble, stream: Stream) -> AssignmentDecision:
    """Uniform dispatch; deterministic rules ignore the stream."""
    name = spec.name
    if name == UNIFORM_RANDOM:
        return assign_uniform_random(v, ens, stream)
    if name == GREEDY_1D:
        return assign_greedy_1d(v, ens)
    if name == INNER_PRODUCT:
        return assign_inner_product(v, ens)
    return assign_best_of_two(v, ens, stream)
