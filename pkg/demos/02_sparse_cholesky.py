"""
Orderings and sparse Cholesky
=============================

The preconditioners only ever solve with W (or a shifted W or T), so one
sparse Cholesky factor per matrix does all the work.
"""

import time

import numpy as np

from bltsolve.core import spmv
from bltsolve.factor import cg_solve, cholesky, fill_reducing_order, solve_spd, symbolic_counts
from bltsolve.problems import ProblemSpec, build_problem

W = build_problem(ProblemSpec("ex1", 64)).W

# Fill depends strongly on the ordering.
for method in ("natural", "rcm", "amd"):
    o = fill_reducing_order(W, method)
    print(f"{method:8s} nnz(L) = {symbolic_counts(W, o).sum():8d}")

t0 = time.perf_counter()
F = cholesky(W, fill_reducing_order(W, "rcm"))
print(f"factorised n={W.n} in {time.perf_counter() - t0:.3f}s")

rng = np.random.default_rng(0)
x = rng.standard_normal(W.n)
z = solve_spd(F, spmv(W, x))
print("solve(W x) recovers x to", f"{np.linalg.norm(z - x) / np.linalg.norm(x):.1e}")

# CG is the iterative alternative for the inner solves.
res = cg_solve(W, spmv(W, x), tol=1e-12)
print("CG:", res.iterations, "iterations, error", f"{np.linalg.norm(res.z - x) / np.linalg.norm(x):.1e}")
