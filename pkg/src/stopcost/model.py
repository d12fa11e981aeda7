"""Problem instances and the pointwise payoff and cost formulas.

Every formula here works in two numeric modes selected by the type of the
cost: a :class:`fractions.Fraction` (or ``int``) cost keeps the arithmetic
exact, a ``float`` cost gives ordinary floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

Number = Union[Fraction, float]

HALF = Fraction(1, 2)


class StopCostError(ValueError):
    """Base class for invalid inputs."""


class HorizonError(StopCostError):
    pass


class CostError(StopCostError):
    pass


class TieError(StopCostError):
    pass


class TimeIndexError(StopCostError, IndexError):
    """A time index lies outside the range an operation is defined on."""


class Variant(str, enum.Enum):
    """What the grader pays when forced to take the last applicant."""

    COST_AT_END = "cost-at-end"
    NO_COST_AT_END = "no-cost-at-end"


def as_cost(c) -> Number:
    """Normalise a cost: rationals and ``"p/q"`` strings become exact, floats stay floats."""
    if isinstance(c, bool):
        raise CostError(f"cost must be a number, got {c!r}")
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    if isinstance(c, str):
        try:
            return Fraction(c.strip())
        except ValueError:
            raise CostError(f"cannot parse cost {c!r}") from None
    return float(c)


@dataclass(frozen=True)
class ProblemSpec:
    """A problem instance: ``horizon`` applicants, cost of choice ``cost``."""

    horizon: int
    cost: Number = Fraction(0)
    variant: Variant = Variant.COST_AT_END

    def __post_init__(self):
        object.__setattr__(self, "cost", as_cost(self.cost))
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def exact(self) -> bool:
        return isinstance(self.cost, Fraction)

    def to_exact(self) -> "ProblemSpec":
        """Same instance with the cost as a fraction (floats read via their decimal repr)."""
        if self.exact:
            return self
        return ProblemSpec(self.horizon, Fraction(repr(self.cost)), self.variant)

    def to_float(self) -> "ProblemSpec":
        return ProblemSpec(self.horizon, float(self.cost), self.variant)


def validate_spec(spec: ProblemSpec) -> ProblemSpec:
    if not isinstance(spec.horizon, int) or spec.horizon < 1:
        raise HorizonError(f"horizon must be a positive integer, got {spec.horizon!r}")
    c = spec.cost
    if c != c or c < 0 or c == float("inf"):
        raise CostError(f"cost must be finite and nonnegative, got {c}")
    if spec.variant is Variant.NO_COST_AT_END and c >= HALF:
        raise CostError(f"cost must be below 1/2 without a terminal cost, got {c}")
    return spec


def relative_rank_sequence(values: Sequence[float]) -> list[int]:
    """Relative ranks ``R_k = #{i <= k : x_i <= x_k}`` (rank 1 is the smallest so far).

    >>> relative_rank_sequence([0.3, 0.7, 0.5])
    [1, 2, 2]
    """
    if len(values) == 0:
        raise ValueError("values must be nonempty")
    if len(set(values)) != len(values):
        raise TieError("values contain ties; relative ranks are undefined")
    ranks = []
    for k, x in enumerate(values):
        ranks.append(sum(1 for v in values[: k + 1] if v <= x))
    return ranks


def _check_time(t: int, lo: int, hi: int, name: str) -> None:
    if not lo <= t <= hi:
        raise TimeIndexError(f"{name}={t} outside [{lo}, {hi}]")


def expected_cost(k: int, t: int, spec: ProblemSpec) -> Number:
    """Cost of accepting at ``t`` as expected from time ``k``: ``c (N-t+1)/(N-k+1)``."""
    n = spec.horizon
    _check_time(t, 1, n, "t")
    _check_time(k, 1, t, "k")
    return spec.cost * Fraction(n - t + 1, n - k + 1)


def immediate_payoff(r: int, spec: ProblemSpec) -> Number:
    """Expected payoff of accepting a candidate at time ``r < N``: ``r/(r+1) - c``."""
    _check_time(r, 1, spec.horizon - 1, "r")
    return Fraction(r, r + 1) - spec.cost


def conditional_payoff(r: int, t: int, spec: ProblemSpec) -> Number:
    """Payoff of accepting a candidate at ``t``, with the cost conditioned at anchor ``r``.

    Equals ``t/(t+1) - c (N-t+1)/(N-r+1)``; reduces to :func:`immediate_payoff`
    when ``r == t``.
    """
    n = spec.horizon
    _check_time(t, 1, n - 1, "t")
    _check_time(r, 1, t, "r")
    return Fraction(t, t + 1) - spec.cost * Fraction(n - t + 1, n - r + 1)


def terminal_value(spec: ProblemSpec) -> Number:
    """Expected payoff of being forced to take applicant ``N``."""
    if spec.variant is Variant.NO_COST_AT_END:
        return HALF if spec.exact else 0.5
    return HALF - spec.cost
