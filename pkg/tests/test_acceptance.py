"""Exit criteria; each test prints a one-line verdict (also collected in the summary)."""

import io
import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from stopcost.asymptotics import convergence_report, limiting_value, threshold_equation_root
from stopcost.chain import absorb_probability, transition_probability
from stopcost.cli import main
from stopcost.formats import read_csv
from stopcost.model import ProblemSpec, Variant, conditional_payoff
from stopcost.simulator import chain_consistency_check, estimate_value, exhaustive_oracle
from stopcost.solver import ThresholdRule, exact_solve, rule_value, solve, verify_monotone_case

END, NO_END = Variant.COST_AT_END, Variant.NO_COST_AT_END

# (N, c) -> (k0, value) as printed in the two reference tables
TABLE_1 = {
    (5, 0.0): (2, 0.65), (5, 0.1): (2, 0.571667), (5, 0.2): (2, 0.466667),
    (10, 0.0): (3, 0.733333), (10, 0.1): (3, 0.654224), (10, 0.2): (4, 0.566339),
    (15, 0.0): (4, 0.775), (15, 0.1): (4, 0.69564), (15, 0.2): (5, 0.608834),
    (50, 0.0): (7, 0.868571), (50, 0.1): (8, 0.785822), (50, 0.2): (9, 0.70274),
    (100, 0.0): (10, 0.905446), (100, 0.1): (12, 0.819826), (100, 0.2): (14, 0.734604),
}
TABLE_2 = {
    (5, 0.0): (2, 0.65), (5, 0.1): (3, 0.6), (5, 0.2): (3, 0.566667),
    (10, 0.0): (3, 0.73333), (10, 0.1): (4, 0.679003), (10, 0.2): (5, 0.626485),
    (15, 0.0): (4, 0.775), (15, 0.1): (5, 0.716322), (15, 0.2): (6, 0.662696),
    (50, 0.0): (7, 0.868571), (50, 0.1): (9, 0.799919), (50, 0.2): (14, 0.729829),
    (100, 0.0): (10, 0.905446), (100, 0.1): (14, 0.830076), (100, 0.2): (22, 0.755734),
}
# indifference cell: h(2) = Th(2) = 7/15, so the table's k0 = 2 cannot carry 7/15
TIE_CELL = (5, 0.2)


def _run_table(preset):
    out = io.StringIO()
    t0 = time.perf_counter()
    code = main(["table", "--preset", preset], out=out)
    elapsed = time.perf_counter() - t0
    assert code == 0
    return {(r["n"], float(r["c"])): r for r in read_csv(out.getvalue())}, elapsed


def _compare(rows, table, exempt=None):
    bad = []
    for cell, (k0, value) in table.items():
        row = rows[cell]
        if cell == exempt:
            continue
        # values are printed to 6 significant figures; 1e-5 allows for that rounding
        if row["k0"] != k0 or abs(row["value"] - value) > 1e-5:
            bad.append(f"{cell}: got k0={row['k0']} value={row['value']:.6f}, table k0={k0} value={value}")
    return bad


def test_c1_table_cost_at_end(record_criterion):
    rows, elapsed = _run_table("paper-table-1")
    bad = _compare(rows, TABLE_1, exempt=TIE_CELL)
    tie = rows[TIE_CELL]
    if not (tie["k0"] == 3 and abs(tie["value"] - 7 / 15) <= 1e-12 and tie["tie"] is True):
        bad.append(f"{TIE_CELL}: expected k0=3 value=7/15 flagged tie, got {tie}")
    if elapsed >= 1.0:
        bad.append(f"runtime {elapsed:.2f}s")
    record_criterion("C1 table reproduction, cost at end", not bad, "; ".join(bad) or f"{elapsed:.3f}s")
    assert not bad


def test_c2_table_no_terminal_cost(record_criterion):
    rows, elapsed = _run_table("paper-table-2")
    bad = _compare(rows, TABLE_2)
    if elapsed >= 1.0:
        bad.append(f"runtime {elapsed:.2f}s")
    record_criterion("C2 table reproduction, no terminal cost", not bad, "; ".join(bad) or f"{elapsed:.3f}s")
    assert not bad


def test_c3_exact_fractions(record_criterion):
    cases = [(5, F(0), F(13, 20)), (10, F(0), F(11, 15)), (15, F(0), F(31, 40)), (5, F(1, 10), F(343, 600))]
    got = [exact_solve(ProblemSpec(n, c)).value for n, c, _ in cases]
    ok = all(isinstance(g, F) and g == want for g, (_, _, want) in zip(got, cases))
    record_criterion("C3 exact fractions", ok, ", ".join(map(str, got)))
    assert ok


def test_c4_asymptotic_roots(record_criterion):
    cases = [(0.1, END, "0.00251646"), (0.2, END, "0.0340152"), (0.1, NO_END, "0.00697715"), (0.2, NO_END, "0.107355")]
    got = [f"{threshold_equation_root(c, v):.6g}" for c, v, _ in cases]
    ok = got == [p for _, _, p in cases]
    record_criterion("C4 asymptotic roots", ok, ", ".join(got))
    assert ok


def test_c5_asymptotic_values(record_criterion):
    worst = 0.0
    for c in (0.1, 0.2):
        for v in (END, NO_END):
            lim = limiting_value(c, v)
            a = threshold_equation_root(c, v)
            long_form = 1 - c - a / 2 - c * a * math.log(a) / (1 - a) - (c * a if v is END else 0.0)
            worst = max(worst, abs(lim - (1 - c)), abs(long_form - (1 - c)))
    ok = worst <= 1e-9
    record_criterion("C5 asymptotic values", ok, f"max deviation {worst:.2e}")
    assert ok


def test_c6_sqrt_law(record_criterion):
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 10_001):
        k0 = solve(ProblemSpec(n, 0.0)).k0
        lo = math.isqrt(n)
        hi = lo if lo * lo == n else lo + 1
        if k0 not in (lo, hi):
            bad.append((n, k0))
    elapsed = time.perf_counter() - t0
    spots = (solve(ProblemSpec(50, 0.0)).k0, solve(ProblemSpec(100, 0.0)).k0)
    ok = not bad and spots == (7, 10) and elapsed < 10
    record_criterion("C6 sqrt(N) law", ok, f"violations={bad[:5]} spots={spots} {elapsed:.2f}s")
    assert ok


def test_c7_oracle_equivalence(record_criterion):
    bad = []
    for n in range(1, 9):
        for c in (F(0), F(1, 10), F(2, 10)):
            for v in (END, NO_END):
                spec = ProblemSpec(n, c, v)
                res = exact_solve(spec)
                if exhaustive_oracle(spec, res.rule).value != res.value:
                    bad.append((n, c, v.value))
    spec = ProblemSpec(5, F(2, 10))
    at3 = exhaustive_oracle(spec, ThresholdRule(3)).value
    at2 = exhaustive_oracle(spec, ThresholdRule(2)).value
    if at3 != F(7, 15) or at2 != rule_value(spec, 2):
        bad.append(("tie cell", at2, at3))
    chains = [chain_consistency_check(n) for n in range(1, 9)]
    bad += [r.mismatches for r in chains if not r.ok]
    record_criterion("C7 oracle equivalence", not bad, str(bad[:3]) if bad else "N<=8 exact")
    assert not bad


def test_c8_monte_carlo(record_criterion):
    lines, ok = [], True
    for n, k0, table_value in ((5, 2, 0.65), (100, 10, 0.905446)):
        spec = ProblemSpec(n, 0.0)
        est = estimate_value(spec, ThresholdRule(k0), 1_000_000, seed=7)
        again = estimate_value(spec, ThresholdRule(k0), 1_000_000, seed=7, workers=4)
        dev = abs(est.recombined_value - table_value)
        ok &= dev <= 3 * est.std_error
        ok &= again.recombined_value == est.recombined_value
        lines.append(f"N={n}: est={est.recombined_value:.6f} |dev|={dev:.2e} 3se={3 * est.std_error:.2e}")
    record_criterion("C8 Monte Carlo agreement", ok, "; ".join(lines))
    assert ok


def test_c9_property_suites(record_criterion):
    # row sums: accumulate each row over growing horizons, one exact term per (r, N)
    rows_ok = True
    partial = {}
    for n in range(2, 501):
        for r in range(1, n):
            partial[r] = partial.get(r, F(0)) + transition_probability(r, n, n)
            if partial[r] + absorb_probability(r, n) != 1:
                rows_ok = False

    rng = np.random.default_rng(20261016)
    mono_ok = True
    for _ in range(10_000):
        n = int(rng.integers(3, 2000))
        t = int(rng.integers(1, n - 1))
        r = int(rng.integers(1, t + 1))
        spec = ProblemSpec(n, float(rng.uniform(0, 2)))
        if not conditional_payoff(r, t + 1, spec) > conditional_payoff(r, t, spec):
            mono_ok = False

    grid_ok = all(
        verify_monotone_case(ProblemSpec(n, c / 100, v)).monotone
        for n in range(5, 201)
        for c in range(0, 31, 5)
        for v in (END, NO_END)
    )
    ok = rows_ok and mono_ok and grid_ok
    record_criterion("C9 property suites", ok, f"rows={rows_ok} monotone_payoff={mono_ok} monotone_case={grid_ok}")
    assert ok


def test_c10_performance(record_criterion):
    spec = ProblemSpec(10**6, 0.2)
    solve(ProblemSpec(1000, 0.2))  # warm-up
    t0 = time.perf_counter()
    res = solve(spec)
    elapsed = time.perf_counter() - t0
    reports = [
        convergence_report(c, v, [10**k for k in range(2, 7)]) for c in (0.1, 0.2) for v in (END, NO_END)
    ]
    converging = all(r.value_converging for r in reports)
    ok = elapsed < 2.0 and converging
    detail = f"N=1e6 solve {elapsed:.3f}s k0={res.k0} v={res.value:.6f}; value gaps shrink: {converging}"
    record_criterion("C10 performance and convergence", ok, detail)
    assert ok
