"""
Large-horizon behaviour
=======================

k0/N tends to the root of log(x) = m (x - 1) and the value tends to 1 - c.
The solver is O(N), so horizons of a million are cheap.
"""

import time

from stopcost import Variant, asymptotic_solution, convergence_report

for variant in Variant:
    for c in (0.1, 0.2):
        sol = asymptotic_solution(c, variant)
        t0 = time.perf_counter()
        rep = convergence_report(c, variant, [10**k for k in range(2, 7)])
        took = time.perf_counter() - t0
        print(f"\n{variant.value} c={c}: root={sol.root:.6g} limit={sol.limit_value:.6f} ({took:.2f}s)")
        for row in rep.rows:
            print(f"  N={row.horizon:>8} k0={row.k0:>6} k0/N={row.k0_over_n:.6f} value={row.value:.6f}")
