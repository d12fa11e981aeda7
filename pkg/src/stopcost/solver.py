"""Backward induction and the one-step look-ahead threshold."""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .chain import operator_table
from .model import (
    Number,
    ProblemSpec,
    StopCostError,
    TimeIndexError,
    conditional_payoff,
    immediate_payoff,
    terminal_value,
    validate_spec,
)

DEFAULT_EXACT_BOUND = 1000
EXACT_BOUND_ENV = "STOPCOST_EXACT_BOUND"

# Float-mode differences h(s) - Th(s) within this band are treated as exact ties.
TIE_TOL = 1e-12


class ExactModeBoundError(StopCostError):
    pass


class NumericMode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class ThresholdRule:
    """Skip times ``1..k0-1``, accept the first candidate from ``k0`` on, else take applicant ``N``."""

    k0: int

    def __post_init__(self):
        if self.k0 < 1:
            raise TimeIndexError(f"k0 must be >= 1, got {self.k0}")

    def stop_time(self, ranks, horizon: Optional[int] = None) -> int:
        """Stopping time of the rule on a relative-rank sequence (rank 1 = candidate)."""
        n = len(ranks) if horizon is None else horizon
        for t in range(self.k0, n):
            if ranks[t - 1] == 1:
                return t
        return n


@dataclass(frozen=True)
class MonotoneReport:
    monotone: bool
    first_index: Optional[int]
    violations: tuple = ()


@dataclass(frozen=True)
class SolveResult:
    rule: ThresholdRule
    value: Number
    h_values: object  # index i holds h(i + 1)
    T_values: object  # index i holds Th(i + 1)
    monotone_case: bool
    numeric_mode: NumericMode
    pair_table: Optional[dict] = field(default=None, repr=False)
    tie: bool = False

    @property
    def k0(self) -> int:
        return self.rule.k0


def exact_bound() -> int:
    raw = os.environ.get(EXACT_BOUND_ENV)
    return int(raw) if raw else DEFAULT_EXACT_BOUND


def _tables(spec: ProblemSpec):
    n = spec.horizon
    th = operator_table(spec)
    if spec.exact:
        h = [Fraction(r, r + 1) - spec.cost for r in range(1, n)]
        adv = [a - b for a, b in zip(h, th)]
    else:
        r = np.arange(1, n, dtype=np.float64)
        h = r / (r + 1.0) - float(spec.cost)
        adv = h - th
    return h, th, adv


def _stop_mask(adv, exact: bool, stop_on_tie: bool) -> np.ndarray:
    if exact:
        if stop_on_tie:
            return np.array([a >= 0 for a in adv], dtype=bool)
        return np.array([a > 0 for a in adv], dtype=bool)
    adv = np.asarray(adv, dtype=np.float64)
    return adv >= -TIE_TOL if stop_on_tie else adv > TIE_TOL


def _threshold_from_mask(mask: np.ndarray, n: int) -> int:
    # least k such that every s in k..N-1 is a stopping index
    if n == 1:
        return 1
    cont = np.flatnonzero(~mask)
    return 1 if cont.size == 0 else int(cont[-1]) + 2


def _monotone_from_mask(mask: np.ndarray) -> MonotoneReport:
    stops = np.flatnonzero(mask)
    if stops.size == 0:
        return MonotoneReport(True, None)
    first = int(stops[0])
    bad = tuple(int(i) + 1 for i in np.flatnonzero(~mask[first:]) + first)
    return MonotoneReport(not bad, first + 1, bad)


def _is_tie(adv, k0: int, exact: bool) -> bool:
    # the inequality is an equality right below the threshold
    if k0 < 2 or k0 - 2 >= len(adv):
        return False
    a = adv[k0 - 2]
    return a == 0 if exact else abs(float(a)) <= TIE_TOL


def ola_threshold(spec: ProblemSpec, stop_on_tie: bool = False) -> ThresholdRule:
    """Least ``k0`` such that ``h(s) >= Th(s)`` for every ``s`` in ``k0..N-1``.

    Exact indifference ``h(s) == Th(s)`` counts as "continue" unless
    ``stop_on_tie`` is set, so ties select the larger threshold by default.
    """
    validate_spec(spec)
    _, _, adv = _tables(spec)
    mask = _stop_mask(adv, spec.exact, stop_on_tie)
    return ThresholdRule(_threshold_from_mask(mask, spec.horizon))


def verify_monotone_case(spec: ProblemSpec, stop_on_tie: bool = False) -> MonotoneReport:
    """Check that the one-step stopping set ``{s : h(s) >= Th(s)}`` is closed upward."""
    validate_spec(spec)
    _, _, adv = _tables(spec)
    return _monotone_from_mask(_stop_mask(adv, spec.exact, stop_on_tie))


def rule_value(spec: ProblemSpec, k0: int, T_values=None) -> Number:
    """Value the solver assigns to threshold ``k0``: ``Th(k0-1)``, or ``h(1)`` for ``k0 = 1``."""
    n = spec.horizon
    if not 1 <= k0 <= n:
        raise TimeIndexError(f"k0={k0} outside [1, {n}]")
    if n == 1:
        return terminal_value(spec)
    if k0 == 1:
        return immediate_payoff(1, spec)
    if T_values is None:
        T_values = operator_table(spec)
    v = T_values[k0 - 2]
    return v if spec.exact else float(v)


def solve(
    spec: ProblemSpec,
    stop_on_tie: bool = False,
    pair_anchor: Optional[int] = None,
) -> SolveResult:
    """Optimal threshold rule and value.

    The numeric mode follows the cost type: fractions give an exact
    solve, floats the ``O(N)`` vectorised one.
    """
    validate_spec(spec)
    n = spec.horizon
    h, th, adv = _tables(spec)
    mask = _stop_mask(adv, spec.exact, stop_on_tie)
    k0 = _threshold_from_mask(mask, n)
    pair = None
    if pair_anchor is not None:
        pair = {(pair_anchor, s): w for s, w in pair_value_table(spec, pair_anchor).items()}
    return SolveResult(
        rule=ThresholdRule(k0),
        value=rule_value(spec, k0, th),
        h_values=h,
        T_values=th,
        monotone_case=_monotone_from_mask(mask).monotone,
        numeric_mode=NumericMode.EXACT if spec.exact else NumericMode.FLOAT,
        pair_table=pair,
        tie=_is_tie(adv, k0, spec.exact),
    )


def exact_solve(spec: ProblemSpec, bound: Optional[int] = None, **kwargs) -> SolveResult:
    """:func:`solve` in rational arithmetic; the value comes back as a reduced fraction."""
    bound = exact_bound() if bound is None else bound
    if spec.horizon > bound:
        raise ExactModeBoundError(
            f"N={spec.horizon} exceeds the exact-mode bound {bound} "
            f"(set {EXACT_BOUND_ENV} to raise it)"
        )
    return solve(spec.to_exact(), **kwargs)


def pair_value_table(spec: ProblemSpec, r: int) -> dict:
    """``w(r, s)`` for ``s = r..N-1`` by backward recursion with the anchor fixed at ``r``.

    ``w(r, s) = max(g(r, s), sum_{j>s} s/(j(j-1)) w(r, j) + s/(N-1) * terminal)``.
    """
    validate_spec(spec)
    n = spec.horizon
    if not 1 <= r <= n - 1:
        raise TimeIndexError(f"anchor r={r} outside [1, {n - 1}]")
    term = terminal_value(spec)
    zero = Fraction(0) if spec.exact else 0.0
    w = {}
    tail = zero  # sum_{j>s} w(r, j) / (j (j-1))
    for s in range(n - 1, r - 1, -1):
        lump = Fraction(s, n - 1)
        cont = s * tail + (lump if spec.exact else float(lump)) * term
        w[s] = max(conditional_payoff(r, s, spec), cont)
        inv = Fraction(1, s * (s - 1)) if s >= 2 else zero
        tail += inv * w[s] if spec.exact else float(inv) * w[s]
    return dict(sorted(w.items()))


def pair_stopping_set(spec: ProblemSpec, r: int) -> list[int]:
    """Times ``s >= r`` where accepting beats continuing with the anchor at ``r``."""
    w = pair_value_table(spec, r)
    return [s for s, v in w.items() if conditional_payoff(r, s, spec) >= v] + [spec.horizon]
