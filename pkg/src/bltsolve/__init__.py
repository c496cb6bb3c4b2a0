"""Block lower triangular preconditioning for complex symmetric systems.

Solves ``(W + iT) u = b`` with ``W`` SPD and ``T`` SPSD via GMRES on the real
block form, preconditioned by ``[[W, 0], [alpha I, W]]``, with GSOR and MHSS
baselines, sparse Cholesky kernels and spectral verification tools.
"""

from .core import BlockVec, ComplexVec, SparseSym, apply_complex, apply_realified, spmv
from .factor import CholFactor, NotPositiveDefiniteError, cg_solve, cholesky, fill_reducing_order, solve_spd
from .krylov import GmresConfig, SolveReport, gmres, solve_problem
from .precond import Kind, PrecondOperator, gsor_iterate, mhss_iterate, prepare
from .problems import AssembledProblem, Example, ProblemSpec, build_problem
from .spectral import (
    AlphaBounds,
    SpectrumReport,
    lemma2_roots,
    nonsym_eigenvalues,
    select_alpha,
    sym_eigenvalues,
    verify_clustering,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaBounds",
    "AssembledProblem",
    "BlockVec",
    "CholFactor",
    "ComplexVec",
    "Example",
    "GmresConfig",
    "Kind",
    "NotPositiveDefiniteError",
    "PrecondOperator",
    "ProblemSpec",
    "SolveReport",
    "SparseSym",
    "SpectrumReport",
    "apply_complex",
    "apply_realified",
    "build_problem",
    "cg_solve",
    "cholesky",
    "fill_reducing_order",
    "gmres",
    "gsor_iterate",
    "lemma2_roots",
    "mhss_iterate",
    "nonsym_eigenvalues",
    "prepare",
    "select_alpha",
    "solve_problem",
    "solve_spd",
    "spmv",
    "sym_eigenvalues",
    "verify_clustering",
]
