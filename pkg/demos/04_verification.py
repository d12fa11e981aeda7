"""
Checking the solver against brute force and simulation
======================================================

Enumerate every rank order for small N, and simulate the process with
uniform values and a uniform fear time for larger N.
"""

from fractions import Fraction

from stopcost import (
    ProblemSpec,
    ThresholdRule,
    chain_consistency_check,
    estimate_value,
    exact_solve,
    exhaustive_oracle,
    solve,
)

spec = ProblemSpec(7, Fraction(1, 10))
res = exact_solve(spec)
orc = exhaustive_oracle(spec, res.rule)
print(f"N=7 c=1/10: solver {res.value}  oracle {orc.value}")
print("stop-time law:", {j: str(p) for j, p in orc.stop_distribution.items()})
print("chain law exact for N=8:", chain_consistency_check(8).ok)

for n, c in ((100, 0.0), (100, 0.1)):
    spec = ProblemSpec(n, c)
    res = solve(spec)
    est = estimate_value(spec, res.rule, 1_000_000, seed=7, workers=4)
    z = (est.recombined_value - res.value) / est.std_error
    print(
        f"N={n} c={c}: solver {res.value:.6f}  simulated {est.recombined_value:.6f}"
        f" +- {est.std_error:.1e} (z={z:+.2f}); E[X]={est.mean_value_part:.4f}"
        f" P(xi>=tau)={est.mean_cost_prob:.4f} raw-cost value={est.unconditional_value:.4f}"
    )
