"""
GMRES(5) with BLT, GSOR and MHSS
================================

BLT and GSOR precondition the real 2n x 2n block form; MHSS preconditions the
complex system directly. The counts are total inner (Arnoldi) steps.
"""

from bltsolve.bench import TABLE_ALPHA, TABLE_IT
from bltsolve.krylov import GmresConfig, solve_problem
from bltsolve.precond import prepare
from bltsolve.problems import ProblemSpec, build_problem

cfg = GmresConfig(restart=5, tol=1e-10, maxit=500)
m = 32

for example in ("ex1", "ex3"):
    prob = build_problem(ProblemSpec(example, m))
    for method in ("none", "gsor", "mhss", "blt"):
        alpha = TABLE_ALPHA.get((example, method), {}).get(m, 1.0)
        P = prepare(method, prob.W, prob.T, alpha)
        _, rep = solve_problem(prob, P, cfg)
        reported = TABLE_IT[(example, method)][m]
        print(f"{example} {method:5s} alpha={alpha:<6g} IT={rep.total_inner:4d} "
              f"relres={rep.final_relres:.1e}  (tabulated: {reported})")

# The same unpreconditioned problem can run in either field; the solutions agree.
prob = build_problem(ProblemSpec("ex4", 8))
xc, rc = solve_problem(prob, None, cfg, space="complex")
xr, rr = solve_problem(prob, None, cfg)
print("complex field:", rc.total_inner, "steps; real block form:", rr.total_inner, "steps")
