"""Record-time Markov chain and the one-step expectation operators.

Times at which a new best-so-far applicant arrives ("candidates") form a
Markov chain: from a candidate at ``r`` the next one arrives at ``s > r``
with probability ``r / (s (s-1))``, and with probability ``r / N`` none
arrives at all.  The operators below average a payoff over the next
candidate time, lumping "candidate at N" and "no further candidate" into a
single terminal outcome.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Union

import numpy as np

from .model import (
    Number,
    ProblemSpec,
    TimeIndexError,
    conditional_payoff,
    terminal_value,
)

Continuation = Union[Mapping[int, Number], Callable[[int], Number]]


def transition_probability(r: int, s: int, N: int) -> Fraction:
    """P(next candidate after ``r`` arrives at ``s``) = ``r / (s (s-1))``."""
    if not 1 <= r < s <= N:
        raise TimeIndexError(f"need 1 <= r < s <= N, got r={r}, s={s}, N={N}")
    return Fraction(r, s * (s - 1))


def absorb_probability(r: int, N: int) -> Fraction:
    """P(no candidate at any of the times ``r+1..N``) = ``r / N``."""
    if not 1 <= r <= N:
        raise TimeIndexError(f"need 1 <= r <= N, got r={r}, N={N}")
    return Fraction(r, N)


def horizon_lump_probability(r: int, N: int) -> Fraction:
    # candidate exactly at N, or no candidate at all: r/(N(N-1)) + r/N
    if not 1 <= r <= N - 1:
        raise TimeIndexError(f"need 1 <= r <= N-1, got r={r}, N={N}")
    return Fraction(r, N - 1)


def _weight(r: int, j: int, spec: ProblemSpec) -> Number:
    p = Fraction(r, j * (j - 1))
    return p if spec.exact else float(p)


def apply_T(r: int, spec: ProblemSpec) -> Number:
    """Expected payoff of stopping at the next candidate after ``r`` (or at ``N``).

    Costs are conditioned at anchor ``r``.  Direct summation, ``O(N - r)``;
    use :func:`operator_table` for all ``r`` at once.
    """
    n = spec.horizon
    if not 1 <= r <= n - 1:
        raise TimeIndexError(f"need 1 <= r <= N-1, got r={r}, N={n}")
    total = sum(
        (_weight(r, j, spec) * conditional_payoff(r, j, spec) for j in range(r + 1, n)),
        Fraction(0) if spec.exact else 0.0,
    )
    lump = horizon_lump_probability(r, n)
    return total + (lump if spec.exact else float(lump)) * terminal_value(spec)


def apply_T_pair(r: int, s: int, continuation: Continuation, spec: ProblemSpec) -> Number:
    """One-step expectation from a candidate at ``s`` with the cost anchor held at ``r``.

    ``continuation`` gives the payoff at each later candidate time
    ``s+1..N-1`` (a mapping or a callable); the terminal outcome pays
    :func:`terminal_value` with weight ``s / (N-1)``.
    """
    n = spec.horizon
    if not 1 <= r <= s <= n - 1:
        raise TimeIndexError(f"need 1 <= r <= s <= N-1, got r={r}, s={s}, N={n}")
    get = continuation if callable(continuation) else continuation.__getitem__
    total = sum(
        (_weight(s, j, spec) * get(j) for j in range(s + 1, n)),
        Fraction(0) if spec.exact else 0.0,
    )
    lump = horizon_lump_probability(s, n)
    return total + (lump if spec.exact else float(lump)) * terminal_value(spec)


def operator_table(spec: ProblemSpec):
    """``Th(r)`` for every ``r = 1..N-1`` in ``O(N)`` operations.

    The payoff splits as ``j/(j+1) - c (N-j+1)/(N-r+1)``, so with suffix sums

        SA(r) = sum_{j>r} 1/((j-1)(j+1)),   SB(r) = sum_{j>r} (N-j+1)/(j(j-1))

    (``j`` running to ``N-1``) we get
    ``Th(r) = r SA(r) - c r SB(r)/(N-r+1) + r/(N-1) * terminal``.

    Returns a float array in float mode and a list of fractions in exact mode.
    Index ``i`` holds ``Th(i + 1)``.
    """
    n = spec.horizon
    if n < 2:
        return [] if spec.exact else np.empty(0)
    c = spec.cost
    term = terminal_value(spec)
    if spec.exact:
        out = [Fraction(0)] * (n - 1)
        sa = sb = Fraction(0)
        for r in range(n - 1, 0, -1):
            out[r - 1] = (
                r * sa - c * Fraction(r, n - r + 1) * sb + Fraction(r, n - 1) * term
            )
            j = r  # fold in the term for j = r before moving to r - 1
            if j >= 2:
                sa += Fraction(1, (j - 1) * (j + 1))
                sb += Fraction(n - j + 1, j * (j - 1))
        return out

    j = np.arange(2, n, dtype=np.float64)  # j = 2..N-1
    a = 1.0 / ((j - 1.0) * (j + 1.0))
    b = (n - j + 1.0) / (j * (j - 1.0))
    # sa[r-1] = sum_{j=r+1}^{N-1}; accumulate from the small tail terms upward
    sa = np.zeros(n - 1)
    sb = np.zeros(n - 1)
    sa[:-1] = np.cumsum(a[::-1])[::-1]
    sb[:-1] = np.cumsum(b[::-1])[::-1]
    r = np.arange(1, n, dtype=np.float64)
    return r * sa - float(c) * r / (n - r + 1.0) * sb + r / (n - 1.0) * float(term)
