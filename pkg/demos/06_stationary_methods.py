"""
GSOR and MHSS as stand-alone iterations
=======================================

Both preconditioners come from stationary splittings; run on their own they
converge when the iteration matrix has spectral radius below one.
"""

import numpy as np

from bltsolve.core import ComplexVec, from_dense
from bltsolve.precond import gsor_iterate, iteration_matrix, mhss_iterate
from bltsolve.problems import AssembledProblem, ProblemSpec, build_problem
from bltsolve.spectral import nonsym_eigenvalues

prob = build_problem(ProblemSpec("ex1", 8))
_, rep = gsor_iterate(prob, 0.5)
rho = np.abs(nonsym_eigenvalues(iteration_matrix("gsor", prob.W, prob.T, 0.5))).max()
print(f"GSOR alpha=0.5: {rep.iterations} sweeps, spectral radius {rho:.4f}")

for alpha in (1.0, 10.0):
    _, rep = mhss_iterate(prob, alpha, maxit=1000)
    print(f"MHSS alpha={alpha}: converged={rep.converged} after {rep.iterations} sweeps")

# For W = T = 1 and alpha = 1 the error halves every sweep.
one = from_dense([[1.0]])
scalar = AssembledProblem(one, one, ComplexVec(np.array([1.0]), np.array([0.0])))
errs = [abs(mhss_iterate(scalar, 1.0, tol=1e-300, maxit=k)[0].to_numpy()[0] - 1 / (1 + 1j)) for k in range(1, 6)]
print("error ratios:", np.round(np.array(errs[1:]) / errs[:-1], 12))
