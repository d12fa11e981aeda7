"""Large-horizon limits of the threshold fraction ``k0/N`` and of the value."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .model import CostError, StopCostError, Variant, as_cost, validate_spec, ProblemSpec
from .solver import solve


class DomainError(StopCostError):
    pass


class ConvergenceError(StopCostError, ArithmeticError):
    pass


@dataclass(frozen=True)
class AsymptoticSolution:
    cost: float
    variant: Variant
    root: float
    limit_value: float
    tolerance_achieved: float


def _slope(c: float, variant: Variant) -> float:
    if not c > 0:
        raise DomainError(f"cost must be positive, got {c}")
    variant = Variant(variant)
    if variant is Variant.COST_AT_END:
        return 1.0 + 1.0 / (2.0 * c)
    if c >= 0.5:
        raise DomainError(f"without a terminal cost the cost must be below 1/2, got {c}")
    return 1.0 / (2.0 * c)


def root_residual(x: float, c: float, variant: Variant = Variant.COST_AT_END) -> float:
    """``log(x) - m (x - 1)`` with ``m = 1 + 1/(2c)`` (cost at end) or ``1/(2c)``."""
    return math.log(x) - _slope(float(c), variant) * (x - 1.0)


def log_threshold_root(
    c: float, variant: Variant = Variant.COST_AT_END, tol: float = 1e-12
) -> float:
    """Logarithm of the root in (0, 1) of ``log(x) = m (x - 1)``, by bisection.

    The residual rises to its maximum at ``x = 1/m`` and falls back to zero
    at ``x = 1``, so the other root lies in ``(0, 1/m)``.  For small costs
    the root is of order ``exp(-m)``, so the bisection runs on ``u = log(x)``:
    ``u - m (e^u - 1)`` is negative at ``u = -m - 1`` and positive at
    ``u = -log(m)``.  The stopping width ``tol`` applies to ``u``, which
    bounds the width in ``x`` by ``tol * x``.
    """
    m = _slope(float(c), variant)

    def g(u):
        return u - m * math.expm1(u)

    lo, hi = -m - 1.0, -math.log(m)
    glo, ghi = g(lo), g(hi)
    if not (glo < 0 < ghi):
        raise ConvergenceError(f"no sign change on [{lo}, {hi}] for c={c}")
    for _ in range(400):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    else:
        raise ConvergenceError("bisection did not reach the requested width")
    return 0.5 * (lo + hi)


def threshold_equation_root(
    c: float, variant: Variant = Variant.COST_AT_END, tol: float = 1e-12
) -> float:
    """Root in (0, 1) of ``log(x) = m (x - 1)``; see :func:`log_threshold_root`."""
    return math.exp(log_threshold_root(c, variant, tol))


def _closed_form_value(log_root: float, c: float, variant: Variant) -> float:
    # continuum limit of Th at threshold fraction `root`; the terminal lump has weight `root`
    root = math.exp(log_root)
    v = 1.0 - c - root / 2.0 - c * root * log_root / (1.0 - root)
    if Variant(variant) is Variant.COST_AT_END:
        v -= c * root
    return v


def limiting_value(c: float, variant: Variant = Variant.COST_AT_END) -> float:
    """Limit of the optimal value as ``N -> oo``.

    Evaluates the closed form at the root; substituting the root equation
    collapses it to ``1 - c`` in both variants, which is checked here.
    """
    c = float(c)
    v = _closed_form_value(log_threshold_root(c, variant), c, variant)
    if abs(v - (1.0 - c)) > 1e-9:
        raise ConvergenceError(f"closed form {v!r} disagrees with 1 - c for c={c}")
    return v


def asymptotic_solution(c, variant: Variant = Variant.COST_AT_END) -> AsymptoticSolution:
    c = float(as_cost(c))
    variant = Variant(variant)
    u = log_threshold_root(c, variant)
    m = _slope(c, variant)
    return AsymptoticSolution(
        cost=c,
        variant=variant,
        root=math.exp(u),
        limit_value=limiting_value(c, variant),
        tolerance_achieved=abs(u - m * math.expm1(u)),
    )


def limit_functions(y: float, x: float, c: float, variant: Variant = Variant.COST_AT_END):
    """Continuum limits ``(stop, continue)`` at anchor fraction ``y`` and time fraction ``x``.

    ``stop = 1 - c (1-x)/(1-y)`` is the limit of the conditional payoff;
    ``continue`` is the limit of the pair operator,
    ``1 - x/2 - c x - c (1-x)/(1-y) - c x log(x)/(1-y)``, without the
    ``- c x`` term when there is no terminal cost.
    """
    if not 0 < y <= x < 1:
        raise DomainError(f"need 0 < y <= x < 1, got y={y}, x={x}")
    c = float(c)
    if c < 0:
        raise CostError(f"cost must be nonnegative, got {c}")
    stop = 1.0 - c * (1.0 - x) / (1.0 - y)
    cont = 1.0 - x / 2.0 - c * (1.0 - x) / (1.0 - y) - c * x * math.log(x) / (1.0 - y)
    if Variant(variant) is Variant.COST_AT_END:
        cont -= c * x
    return stop, cont


@dataclass(frozen=True)
class ConvergenceRow:
    horizon: int
    k0: int
    k0_over_n: float
    value: float
    root: float
    limit_value: float

    @property
    def threshold_gap(self) -> float:
        return abs(self.k0_over_n - self.root)

    @property
    def value_gap(self) -> float:
        return abs(self.value - self.limit_value)


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple
    threshold_converging: bool
    value_converging: bool


def _decreasing(xs) -> bool:
    return all(b < a for a, b in zip(xs, xs[1:]))


def convergence_report(
    c, variant: Variant = Variant.COST_AT_END, horizons: Sequence[int] = ()
) -> ConvergenceReport:
    """Float solves along ``horizons`` set against the limiting root and value.

    The ``*_converging`` flags say whether the gaps shrink strictly from one
    horizon to the next; they are reported, not enforced.
    """
    c = float(as_cost(c))
    horizons = list(horizons)
    if horizons != sorted(horizons):
        raise ValueError("horizons must be sorted ascending")
    variant = Variant(variant)
    if c == 0:
        root, lim = 0.0, 1.0
    else:
        root, lim = threshold_equation_root(c, variant), limiting_value(c, variant)
    rows = []
    for n in horizons:
        res = solve(validate_spec(ProblemSpec(n, c, variant)))
        rows.append(ConvergenceRow(n, res.k0, res.k0 / n, float(res.value), root, lim))
    return ConvergenceReport(
        rows=tuple(rows),
        threshold_converging=_decreasing([r.threshold_gap for r in rows]),
        value_converging=_decreasing([r.value_gap for r in rows]),
    )
