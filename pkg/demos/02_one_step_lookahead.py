"""
Where stopping beats continuing
===============================

The threshold is where the immediate payoff h(s) = s/(s+1) - c first
overtakes Th(s), the expected payoff of waiting for the next candidate.
"""

import numpy as np

from stopcost import ProblemSpec, pair_value_table, solve, verify_monotone_case

spec = ProblemSpec(30, 0.15)
res = solve(spec)
print(f"N={spec.horizon} c={spec.cost}: k0={res.k0}, value={res.value:.6f}")
for s, (h, t) in enumerate(zip(res.h_values, res.T_values), start=1):
    mark = "stop" if h > t else "go on"
    print(f"s={s:>2}  h={h:.4f}  Th={t:.4f}  {mark}")

# the stopping set is an up-set, which is what makes the one-step rule optimal
print(verify_monotone_case(spec))

# with the cost anchor frozen at k0 - 1 the full backward recursion agrees
w = pair_value_table(spec, res.k0 - 1)
print("w(k0-1, k0-1) =", w[res.k0 - 1], " value =", res.value)
assert np.isclose(w[res.k0 - 1], res.value)
