"""Restarted GMRES with right preconditioning.

The same kernel runs on real vectors (the 2n-dimensional block system) and on
complex vectors (the n-dimensional complex system); only ``np.vdot`` and the
rotation formulas see the field.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import ComplexVec, SparseSym, apply_complex, spmv

__all__ = [
    "GmresConfig",
    "SolveReport",
    "gmres",
    "realified_operator",
    "complex_operator",
    "solve_problem",
]


@dataclass(frozen=True)
class GmresConfig:
    restart: int = 5
    tol: float = 1e-10
    maxit: int = 500
    record_history: bool = False

    def __post_init__(self):
        if self.restart < 1:
            raise ValueError("restart must be >= 1")
        if not 0 < self.tol < 1:
            raise ValueError("tol must lie in (0, 1)")
        if self.maxit < self.restart:
            raise ValueError("maxit must be >= restart")


@dataclass
class SolveReport:
    """Convergence record of one GMRES run.

    ``total_inner`` counts Arnoldi steps (one operator and one preconditioner
    application each); ``final_relres`` is the true unpreconditioned residual.
    When ``record_history`` is set, ``relres_history`` holds the least-squares
    residual estimate after every inner step, ``restart_gaps`` the gap
    between that estimate and the recomputed true relative residual at each
    restart, and ``orthogonality`` the loss ``max|V^H V - I|`` per cycle.
    """

    converged: bool
    outer_cycles: int
    total_inner: int
    final_relres: float
    wall_seconds: float = 0.0
    relres_history: list | None = None
    restart_gaps: list = field(default_factory=list)
    orthogonality: list = field(default_factory=list)


def _rotation(h, g):
    # Returns (c, s, r) with [[c, s], [-conj(s), c]] @ [h, g] = [r, 0], c real.
    ah = abs(h)
    if ah == 0.0:
        return 0.0, 1.0, g
    rho = np.hypot(ah, abs(g))
    c = ah / rho
    s = (h / ah) * np.conj(g) / rho
    return c, s, (h / ah) * rho


def gmres(op, b, precond=None, cfg: GmresConfig = GmresConfig()):
    """Solve ``op(x) = b`` by GMRES(restart) from ``x = 0``.

    Parameters
    ----------
    op : callable
        Matrix-vector action on 1-D arrays of the same dtype as ``b``.
    b : ndarray
        Right-hand side, real or complex.
    precond : callable, optional
        Applies the inverse preconditioner (right preconditioning).
    cfg : GmresConfig

    Returns
    -------
    x : ndarray
    report : SolveReport
    """
    b = np.asarray(b)
    dtype = np.complex128 if np.iscomplexobj(b) else np.float64
    b = b.astype(dtype)
    nb = float(np.linalg.norm(b))
    if nb == 0.0:
        raise ValueError("right-hand side is zero")
    M = precond if precond is not None else (lambda v: v.copy())
    m = cfg.restart
    n = b.shape[0]

    t0 = time.perf_counter()
    x = np.zeros(n, dtype=dtype)
    r = b.copy()
    beta = nb
    history = [] if cfg.record_history else None
    report = SolveReport(False, 0, 0, 1.0, relres_history=history)
    breakdown_tol = 1e-14 * nb

    while True:
        if beta / nb <= cfg.tol:
            report.converged = True
            break
        if report.total_inner >= cfg.maxit:
            break
        report.outer_cycles += 1
        V = np.zeros((m + 1, n), dtype=dtype)
        H = np.zeros((m + 1, m), dtype=dtype)
        cs = np.zeros(m)
        sn = np.zeros(m, dtype=dtype)
        g = np.zeros(m + 1, dtype=dtype)
        g[0] = beta
        V[0] = r / beta
        k = 0
        for j in range(m):
            w = op(M(V[j]))
            report.total_inner += 1
            for i in range(j + 1):
                H[i, j] = np.vdot(V[i], w)
                w = w - H[i, j] * V[i]
            hnext = float(np.linalg.norm(w))
            H[j + 1, j] = hnext
            for i in range(j):
                hi, hi1 = H[i, j], H[i + 1, j]
                H[i, j] = cs[i] * hi + sn[i] * hi1
                H[i + 1, j] = -np.conj(sn[i]) * hi + cs[i] * hi1
            cs[j], sn[j], H[j, j] = _rotation(H[j, j], H[j + 1, j])
            H[j + 1, j] = 0.0
            g[j + 1] = -np.conj(sn[j]) * g[j]
            g[j] = cs[j] * g[j]
            est = abs(g[j + 1]) / nb
            if history is not None:
                history.append(est)
            k = j + 1
            happy = hnext < breakdown_tol
            if not happy:
                V[j + 1] = w / hnext
            if happy or est <= cfg.tol or report.total_inner >= cfg.maxit:
                break
        y = np.zeros(k, dtype=dtype)
        for i in range(k - 1, -1, -1):
            y[i] = (g[i] - H[i, i + 1:k] @ y[i + 1:k]) / H[i, i]
        x = x + M(V[:k].T @ y)
        r = b - op(x)
        beta = float(np.linalg.norm(r))
        if cfg.record_history:
            report.restart_gaps.append(abs(abs(g[k]) / nb - beta / nb))
            Vk = V[: k + 1] if not happy else V[:k]
            G = Vk.conj() @ Vk.T
            report.orthogonality.append(float(np.abs(G - np.eye(G.shape[0])).max()))

    report.final_relres = beta / nb
    report.wall_seconds = time.perf_counter() - t0
    return x, report


def realified_operator(W: SparseSym, T: SparseSym):
    """Action of ``[[W, -T], [T, W]]`` on flat length-2n arrays."""
    n = W.n

    def op(v):
        x, y = v[:n], v[n:]
        return np.concatenate([spmv(W, x) - spmv(T, y), spmv(T, x) + spmv(W, y)])

    return op


def complex_operator(W: SparseSym, T: SparseSym):
    """Action of ``W + iT`` on complex length-n arrays."""

    def op(u):
        v = apply_complex(W, T, ComplexVec(np.ascontiguousarray(u.real), np.ascontiguousarray(u.imag)))
        return v.to_numpy()

    return op


def solve_problem(prob, precond, cfg: GmresConfig = GmresConfig(), space: str | None = None):
    """Run GMRES on an assembled problem with a prepared preconditioner.

    MHSS runs on the complex system; the other kinds on the real block system
    unless ``space="complex"`` is requested for the unpreconditioned case.
    Returns the solution as a :class:`ComplexVec` and the report.
    """
    from .precond import Kind

    kind = precond.kind if precond is not None else Kind.NONE
    use_complex = kind is Kind.MHSS or space == "complex"
    if use_complex and kind not in (Kind.MHSS, Kind.NONE):
        raise ValueError(f"{kind.value} preconditioner acts on the real block system")
    M = None if kind is Kind.NONE else precond
    if use_complex:
        x, rep = gmres(complex_operator(prob.W, prob.T), prob.b.to_numpy(), M, cfg)
        return ComplexVec.from_numpy(x), rep
    x, rep = gmres(realified_operator(prob.W, prob.T), prob.rhs_block(), M, cfg)
    return ComplexVec(x[: prob.n].copy(), x[prob.n:].copy()), rep
