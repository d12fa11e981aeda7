"""Monte Carlo simulation of the selection process and an exhaustive oracle.

Raw values are uniform on [0, 1] and a candidate is an applicant better
(larger) than everyone seen before it.  Relative ranks are therefore taken
best-first: rank 1 marks a candidate.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .chain import absorb_probability, transition_probability
from .model import (
    ProblemSpec,
    StopCostError,
    Variant,
    conditional_payoff,
    relative_rank_sequence,
    terminal_value,
    validate_spec,
)
from .solver import ThresholdRule

ORACLE_MAX_N = 10


class OracleBoundError(StopCostError):
    pass


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox generator for sub-stream ``stream`` of ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(ss))


def draw_fear_times(rng: np.random.Generator, N: int, size=None):
    """Fear time uniform on ``{0, 1, ..., N}``."""
    return rng.integers(0, N + 1, size=size)


def _check_rule(spec: ProblemSpec, rule: ThresholdRule) -> None:
    if rule.k0 > spec.horizon:
        raise StopCostError(f"k0={rule.k0} exceeds the horizon {spec.horizon}")


def cost_weights(spec: ProblemSpec, rule: ThresholdRule) -> np.ndarray:
    """Cost multiplier of stopping at each time ``1..N``, conditioned at anchor ``k0 - 1``.

    Before ``N`` this is ``(N-j+1)/(N-k0+2)``; at ``N`` it is 1 or 0
    depending on the terminal-cost variant.
    """
    n = spec.horizon
    anchor = max(1, rule.k0 - 1)
    j = np.arange(1, n + 1, dtype=np.float64)
    w = (n - j + 1.0) / (n - anchor + 1.0)
    w[-1] = 1.0 if spec.variant is Variant.COST_AT_END else 0.0
    return w


@dataclass(frozen=True)
class TrajectorySample:
    values: np.ndarray
    xi: int
    stop_time: int
    realized_value: float
    cost_indicator: int  # 1 if xi >= stop_time

    def payoff(self, spec: ProblemSpec) -> float:
        """Realised payoff: ``X - c 1{xi >= t}`` before ``N``; at ``N`` the variant decides."""
        c = float(spec.cost)
        if self.stop_time < spec.horizon:
            return self.realized_value - c * self.cost_indicator
        if spec.variant is Variant.COST_AT_END:
            return self.realized_value - c
        return self.realized_value


def simulate_once(spec: ProblemSpec, rule: ThresholdRule, rng: np.random.Generator) -> TrajectorySample:
    validate_spec(spec)
    _check_rule(spec, rule)
    n = spec.horizon
    values = rng.random(n)
    xi = int(draw_fear_times(rng, n))
    ranks = relative_rank_sequence([1.0 - v for v in values])
    t = rule.stop_time(ranks, n)
    return TrajectorySample(values, xi, t, float(values[t - 1]), int(xi >= t))


@dataclass(frozen=True)
class SimulationEstimate:
    mean_value_part: float  # E[X_tau]
    mean_cost_prob: float  # P(xi >= tau)
    recombined_value: float
    std_error: float
    samples: int
    seed: int
    value_std_error: float = 0.0
    unconditional_value: float = 0.0
    unconditional_std_error: float = 0.0
    stop_time_counts: np.ndarray = field(default=None, repr=False)

    def stop_time_distribution(self) -> np.ndarray:
        return self.stop_time_counts / self.samples


@dataclass
class _Sums:
    n: int = 0
    x: float = 0.0
    x2: float = 0.0
    y: float = 0.0
    y2: float = 0.0
    u: float = 0.0
    u2: float = 0.0
    cost: int = 0
    counts: np.ndarray = None

    def merge(self, other: "_Sums") -> "_Sums":
        return _Sums(
            self.n + other.n,
            self.x + other.x,
            self.x2 + other.x2,
            self.y + other.y,
            self.y2 + other.y2,
            self.u + other.u,
            self.u2 + other.u2,
            self.cost + other.cost,
            other.counts if self.counts is None else self.counts + other.counts,
        )


def _block_rows(n: int) -> int:
    # fixed per horizon so the stream layout never depends on the worker count
    return max(1, min(1 << 16, (1 << 21) // n))


def _run_block(spec: ProblemSpec, rule: ThresholdRule, seed: int, block: int, rows: int) -> _Sums:
    n = spec.horizon
    c = float(spec.cost)
    rng = make_rng(seed, block)
    values = rng.random((rows, n))
    xi = draw_fear_times(rng, n, size=rows)

    tau = np.full(rows, n, dtype=np.int64)
    if rule.k0 < n:
        best = np.maximum.accumulate(values, axis=1)
        window = values[:, rule.k0 - 1 : n - 1] == best[:, rule.k0 - 1 : n - 1]
        hit = window.any(axis=1)
        tau[hit] = window[hit].argmax(axis=1) + rule.k0
    x = values[np.arange(rows), tau - 1]

    w = cost_weights(spec, rule)
    y = x - c * w[tau - 1]
    ind = xi >= tau
    u = x - c * np.where(tau < n, ind, w[-1])
    return _Sums(
        rows,
        float(x.sum()),
        float((x * x).sum()),
        float(y.sum()),
        float((y * y).sum()),
        float(u.sum()),
        float((u * u).sum()),
        int(ind.sum()),
        np.bincount(tau - 1, minlength=n).astype(np.int64),
    )


def _se(s: float, s2: float, n: int) -> float:
    if n < 2:
        return 0.0
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0) * n / (n - 1)
    return math.sqrt(var / n)


def estimate_value(
    spec: ProblemSpec,
    rule: ThresholdRule,
    samples: int,
    seed: int = 0,
    workers: int = 1,
) -> SimulationEstimate:
    """Monte Carlo estimate of the value of ``rule``.

    Reports ``E[X_tau]`` and ``P(xi >= tau)`` separately, the value with the
    cost conditioned at anchor ``k0 - 1`` as the solver evaluates it
    (``recombined_value``), and the plain realised-payoff mean
    (``unconditional_value``).  Samples are split into fixed blocks, each on
    its own Philox sub-stream, and merged in block order, so the result is
    bit-identical for any ``workers``.
    """
    validate_spec(spec)
    _check_rule(spec, rule)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rows = _block_rows(spec.horizon)
    sizes = [rows] * (samples // rows)
    if samples % rows:
        sizes.append(samples % rows)

    def job(i):
        return _run_block(spec, rule, seed, i, sizes[i])

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(i) for i in range(len(sizes))]
    tot = _Sums()
    for p in parts:
        tot = tot.merge(p)

    n = tot.n
    return SimulationEstimate(
        mean_value_part=tot.x / n,
        mean_cost_prob=tot.cost / n,
        recombined_value=tot.y / n,
        std_error=_se(tot.y, tot.y2, n),
        samples=n,
        seed=seed,
        value_std_error=_se(tot.x, tot.x2, n),
        unconditional_value=tot.u / n,
        unconditional_std_error=_se(tot.u, tot.u2, n),
        stop_time_counts=tot.counts,
    )


def rank_sequences(N: int):
    """All ``N!`` equally likely relative-rank sequences, ``R_k`` ranging over ``1..k``."""
    return itertools.product(*(range(1, k + 1) for k in range(1, N + 1)))


@lru_cache(maxsize=64)
def _stop_counts(N: int, k0: int) -> tuple:
    rule = ThresholdRule(k0)
    counts = [0] * N
    for ranks in rank_sequences(N):
        counts[rule.stop_time(ranks, N) - 1] += 1
    return tuple(counts)


@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    stop_distribution: dict  # time -> exact probability


def exhaustive_oracle(spec: ProblemSpec, rule: ThresholdRule) -> OracleResult:
    """Exact value of ``rule`` by enumerating every rank order.

    The payoff at a stop before ``N`` is conditioned at anchor ``k0 - 1``
    (anchor 1 when ``k0 = 1``); stopping at ``N`` pays the terminal value.
    """
    validate_spec(spec)
    _check_rule(spec, rule)
    n = spec.horizon
    if n > ORACLE_MAX_N:
        raise OracleBoundError(f"N={n} is too large for enumeration (max {ORACLE_MAX_N})")
    spec = spec.to_exact()
    counts = _stop_counts(n, rule.k0)
    total = math.factorial(n)
    dist = {j: Fraction(k, total) for j, k in enumerate(counts, 1) if k}
    anchor = max(1, rule.k0 - 1)
    value = Fraction(0)
    for j, p in dist.items():
        value += p * (terminal_value(spec) if j == n else conditional_payoff(anchor, j, spec))
    return OracleResult(value, dist)


@dataclass(frozen=True)
class ChainReport:
    horizon: int
    mismatches: tuple  # (r, s or "absorbed", oracle probability, formula probability)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def chain_consistency_check(N: int) -> ChainReport:
    """Compare the enumerated law of the next candidate time with the chain's transition law.

    For each ``r < N`` the next candidate after a candidate at ``r`` is counted
    over all rank orders with ``R_r = 1``; equality must be exact.
    """
    if not 1 <= N <= 8:
        raise OracleBoundError(f"chain check runs for 1 <= N <= 8, got {N}")
    hits = {r: [0] * (N + 2) for r in range(1, N)}  # slot N + 1 = absorbed
    given = dict.fromkeys(range(1, N), 0)
    for ranks in rank_sequences(N):
        for r in range(1, N):
            if ranks[r - 1] != 1:
                continue
            given[r] += 1
            nxt = next((s for s in range(r + 1, N + 1) if ranks[s - 1] == 1), N + 1)
            hits[r][nxt] += 1
    bad = []
    for r in range(1, N):
        for s in range(r + 1, N + 1):
            got = Fraction(hits[r][s], given[r])
            want = transition_probability(r, s, N)
            if got != want:
                bad.append((r, s, got, want))
        got = Fraction(hits[r][N + 1], given[r])
        if got != absorb_probability(r, N):
            bad.append((r, "absorbed", got, absorb_probability(r, N)))
    return ChainReport(N, tuple(bad))
