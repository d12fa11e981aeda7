"""
Optimal thresholds and values for small horizons
=================================================

Solve the grid N in {5, 10, 15, 50, 100} x c in {0, 1/10, 2/10} for both
terminal-cost variants, exactly and in floating point.
"""

from fractions import Fraction

from stopcost import ProblemSpec, Variant, exact_solve, solve

horizons = [5, 10, 15, 50, 100]
costs = [Fraction(0), Fraction(1, 10), Fraction(1, 5)]

for variant in Variant:
    print(f"\n{variant.value}")
    print(f"{'N':>5} " + " ".join(f"{'c=' + str(c):>18}" for c in costs))
    for n in horizons:
        cells = []
        for c in costs:
            res = solve(ProblemSpec(n, float(c), variant))
            flag = "*" if res.tie else " "
            cells.append(f"{res.k0:>4} {res.value:.6f}{flag}    ")
        print(f"{n:>5} " + " ".join(cells))
print("\n* the one-step comparison is an exact tie just below k0")

# small horizons come out as exact fractions
for n in (5, 10, 15):
    print(n, exact_solve(ProblemSpec(n, 0)).value)
print(5, exact_solve(ProblemSpec(5, "1/10")).value)
