"""
Finding a good alpha experimentally
===================================

A sweep runs the same problem over a grid of alpha values and keeps the one
with the fewest GMRES steps.
"""

from bltsolve.bench import best_row, emit_table, sweep

rows = sweep("ex3", 32, "blt", 0.05, 2.0, 12, log_scale=True)
for r in rows:
    print(f"alpha={r.alpha:7.4f}  IT={r.total_inner:4d}  converged={r.converged}")
best = best_row(rows)
print("best:", best.alpha, "with", best.total_inner, "steps")

# The rows serialise to CSV (or JSON) for plotting elsewhere.
emit_table(rows, "sweep_ex3.csv")
