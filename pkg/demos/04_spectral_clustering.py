"""
Where the preconditioned eigenvalues live
=========================================

Every eigenvalue of G^-1 A is either 1 or a root of a quadratic built from the
quotients (a, b, c) of its eigenvector. Both kinds sit in disks around 1 whose
radii shrink as alpha grows toward alpha*.
"""

import numpy as np

from bltsolve.core import from_dense
from bltsolve.problems import ProblemSpec, build_problem
from bltsolve.spectral import EigenpairStats, lemma2_roots, select_alpha, verify_clustering

# Scalar case W = T = 1: two conjugate eigenvalues 1.2 +- 0.748i for alpha = 0.4.
one = from_dense([[1.0]])
print("roots:", lemma2_roots(EigenpairStats(1, 1, 1), 0.4)[:2])
print("dense:", verify_clustering(one, one, alpha=0.4).eigenvalues)

# A grid problem: choose alpha from the extreme eigenvalues of W and T.
prob = build_problem(ProblemSpec("ex1", 4))
bounds = select_alpha(prob.W, prob.T)
print(f"alpha* = {bounds.alpha_star:.3e}, alpha~ = {bounds.alpha_tilde:.3e}, chosen {bounds.alpha_chosen:.3e}")
# The disk bounds are only guaranteed for 0 < alpha <= alpha*; the tabulated
# alpha = 1.4 is far outside that range and its spectrum escapes r1.
for alpha in (bounds.alpha_chosen, 1.4):
    rep = verify_clustering(prob, alpha=alpha)
    print(f"alpha={alpha:.3g}: max|lam-1| = {rep.max_dist:.3f}, r1 = {rep.theorem1_radius:.3f}, "
          f"r2 = {rep.theorem2_radius:.3f}, inside = {rep.all_within}")

# Real parts of the spectrum at the tabulated alpha, for a quick look.
lam = verify_clustering(prob, alpha=1.4).eigenvalues
print("real parts range", np.round([lam.real.min(), lam.real.max()], 3))
