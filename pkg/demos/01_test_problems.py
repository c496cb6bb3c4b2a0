"""
Assembling the four model problems
==================================

Each problem is a complex symmetric system (W + iT) u = b on an m x m grid,
with W symmetric positive definite and T symmetric positive semidefinite.
"""

import numpy as np

from bltsolve.problems import ProblemSpec, build_problem, laplacian_k

# The 2D five-point Laplacian is a Kronecker sum of 1D second differences.
K = laplacian_k(3)
print("K for m=3 has", K.nnz, "nonzeros, diagonal", K.diagonal()[:3])

# Example 1 (a time-discretised parabolic problem) is scaled by h^2.
ex1 = build_problem(ProblemSpec("ex1", 3))
print("ex1: W diag", ex1.W.diagonal()[0], " T diag", ex1.T.diagonal()[0], " b[0]", ex1.b.to_numpy()[0])

# Examples 2-4 use b = (1+i) A 1, so the exact solution is all (1+i).
for name in ("ex2", "ex3", "ex4"):
    p = build_problem(ProblemSpec(name, 6), check=True)
    u = np.linalg.solve(p.dense_complex(), p.b.to_numpy())
    print(name, "n =", p.n, " max |u - (1+i)| =", f"{np.abs(u - (1 + 1j)).max():.1e}")

# Parameters can be overridden; a strongly negative shift breaks positivity of W
# and the self-check says so.
try:
    build_problem(ProblemSpec("ex4", 8, {"sigma1": -1e4}), check=True)
except ValueError as err:
    print("ex4 with sigma1=-1e4:", err)
