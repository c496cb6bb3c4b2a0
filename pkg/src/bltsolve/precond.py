"""Preconditioners (BLT, GSOR, MHSS) and the GSOR / MHSS stationary iterations.

All three preconditioners reduce to real SPD solves with Cholesky factors
computed once in :func:`prepare` and reused on every application:

* BLT  ``[[W, 0], [alpha I, W]]`` on the real block system,
* GSOR ``[[W, 0], [alpha T, W]]`` on the real block system (the ``1/alpha``
  factor of the splitting is dropped),
* MHSS ``(alpha I + W)(alpha I + T)`` on the complex system (the
  ``(1+i)/(2 alpha)`` factor is dropped).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import BlockVec, ComplexVec, SparseSym, apply_complex, spmv
from .factor import CholFactor, cholesky, fill_reducing_order, solve_spd

__all__ = [
    "Kind",
    "PrecondOperator",
    "StationaryReport",
    "prepare",
    "blt_apply",
    "gsor_apply",
    "mhss_apply",
    "gsor_iterate",
    "mhss_iterate",
    "dense_preconditioner",
    "iteration_matrix",
]


class Kind(str, Enum):
    NONE = "none"
    BLT = "blt"
    GSOR = "gsor"
    MHSS = "mhss"


@dataclass(frozen=True, eq=False)
class PrecondOperator:
    """A prepared preconditioner; calling it applies its inverse.

    The call works on flat arrays: length ``2n`` real for BLT, GSOR and
    NONE, length ``n`` complex for MHSS.
    """

    kind: Kind
    alpha: float
    factors: tuple = ()
    T: SparseSym | None = None
    factor_seconds: float = 0.0

    @property
    def is_complex(self) -> bool:
        return self.kind is Kind.MHSS

    def __call__(self, r: np.ndarray) -> np.ndarray:
        if self.kind is Kind.NONE:
            return r.copy()
        if self.kind is Kind.MHSS:
            z = mhss_apply(self, ComplexVec(np.ascontiguousarray(r.real), np.ascontiguousarray(r.imag)))
            return z.to_numpy()
        v = BlockVec.from_flat(r)
        z = blt_apply(self, v) if self.kind is Kind.BLT else gsor_apply(self, v)
        return z.flat()


def prepare(kind, W: SparseSym, T: SparseSym, alpha: float = 1.0, ordering: str = "rcm") -> PrecondOperator:
    """Factor the SPD blocks needed by ``kind`` and return the operator."""
    kind = Kind(kind)
    if kind is not Kind.NONE and not alpha > 0:
        raise ValueError(f"alpha must be positive for {kind.value}, got {alpha}")
    if W.n != T.n:
        raise ValueError(f"dimension mismatch: W is {W.n}, T is {T.n}")
    t0 = time.perf_counter()
    if kind is Kind.NONE:
        factors = ()
    elif kind is Kind.MHSS:
        Wa, Ta = W.shifted(alpha), T.shifted(alpha)
        factors = (
            cholesky(Wa, fill_reducing_order(Wa, ordering)),
            cholesky(Ta, fill_reducing_order(Ta, ordering)),
        )
    else:
        factors = (cholesky(W, fill_reducing_order(W, ordering)),)
    return PrecondOperator(kind, float(alpha), factors, T, time.perf_counter() - t0)


def _need(P: PrecondOperator, kind: Kind) -> CholFactor:
    if P.kind is not kind:
        raise ValueError(f"expected a {kind.value} preconditioner, got {P.kind.value}")
    return P.factors[0]


def blt_apply(P: PrecondOperator, r: BlockVec) -> BlockVec:
    """Solve ``[[W, 0], [alpha I, W]] z = r``: two solves with one factor."""
    F = _need(P, Kind.BLT)
    z1 = solve_spd(F, r.x)
    z2 = solve_spd(F, r.y - P.alpha * z1)
    return BlockVec(z1, z2)


def gsor_apply(P: PrecondOperator, r: BlockVec) -> BlockVec:
    """Solve ``[[W, 0], [alpha T, W]] z = r``."""
    F = _need(P, Kind.GSOR)
    z1 = solve_spd(F, r.x)
    z2 = solve_spd(F, r.y - P.alpha * spmv(P.T, z1))
    return BlockVec(z1, z2)


def mhss_apply(P: PrecondOperator, r: ComplexVec) -> ComplexVec:
    """Return ``(alpha I + T)^-1 (alpha I + W)^-1 r``; both factors are real so
    the real and imaginary parts are solved separately."""
    if P.kind is not Kind.MHSS:
        raise ValueError(f"expected a mhss preconditioner, got {P.kind.value}")
    FW, FT = P.factors
    return ComplexVec(solve_spd(FT, solve_spd(FW, r.re)), solve_spd(FT, solve_spd(FW, r.im)))


def dense_preconditioner(kind, W, T, alpha: float) -> np.ndarray:
    """Dense matrix of the preconditioner (real 2n x 2n, or complex n x n for MHSS)."""
    kind = Kind(kind)
    W = W.to_dense() if isinstance(W, SparseSym) else np.asarray(W, dtype=float)
    T = T.to_dense() if isinstance(T, SparseSym) else np.asarray(T, dtype=float)
    n = W.shape[0]
    I, Z = np.eye(n), np.zeros((n, n))
    if kind is Kind.NONE:
        return np.eye(2 * n)
    if kind is Kind.BLT:
        return np.block([[W, Z], [alpha * I, W]])
    if kind is Kind.GSOR:
        return np.block([[W, Z], [alpha * T, W]])
    return (alpha * I + W) @ (alpha * I + T)


def iteration_matrix(kind, W, T, alpha: float) -> np.ndarray:
    """Dense iteration matrix of the GSOR (real, 2n) or MHSS (complex, n)
    stationary method; its spectral radius decides convergence."""
    kind = Kind(kind)
    W = W.to_dense() if isinstance(W, SparseSym) else np.asarray(W, dtype=float)
    T = T.to_dense() if isinstance(T, SparseSym) else np.asarray(T, dtype=float)
    n = W.shape[0]
    I, Z = np.eye(n), np.zeros((n, n))
    if kind is Kind.GSOR:
        M = np.block([[W, Z], [alpha * T, W]])
        N = np.block([[(1 - alpha) * W, alpha * T], [Z, (1 - alpha) * W]])
        return np.linalg.solve(M, N)
    if kind is Kind.MHSS:
        first = np.linalg.solve(alpha * I + W, alpha * I - 1j * T)
        return np.linalg.solve(alpha * I + T, (alpha * I + 1j * W) @ first)
    raise ValueError(f"{kind.value} has no stationary iteration")


# -- stationary iterations --------------------------------------------------


@dataclass
class StationaryReport:
    converged: bool
    iterations: int
    final_relres: float
    history: list = field(default_factory=list)


def _relres(W, T, u: ComplexVec, b: ComplexVec, nb: float) -> float:
    Au = apply_complex(W, T, u)
    return ComplexVec(b.re - Au.re, b.im - Au.im).norm() / nb


def gsor_iterate(prob, alpha: float, tol: float = 1e-10, maxit: int = 1000, ordering: str = "rcm"):
    """GSOR stationary iteration on the real block system from a zero start.

    Each sweep solves
    ``W x+ = (1 - alpha) W x + alpha T y + alpha p`` and
    ``W y+ = -alpha T x+ + (1 - alpha) W y + alpha q``; the stopping test is
    the true relative residual of the complex system.

    Returns
    -------
    BlockVec, StationaryReport
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    W, T, b = prob.W, prob.T, prob.b
    F = cholesky(W, fill_reducing_order(W, ordering))
    p, q = b.re, b.im
    nb = b.norm()
    if nb == 0.0:
        raise ValueError("right-hand side is zero")
    x = np.zeros(W.n)
    y = np.zeros(W.n)
    history = []
    for k in range(1, maxit + 1):
        x = solve_spd(F, (1.0 - alpha) * spmv(W, x) + alpha * spmv(T, y) + alpha * p)
        y = solve_spd(F, -alpha * spmv(T, x) + (1.0 - alpha) * spmv(W, y) + alpha * q)
        rel = _relres(W, T, ComplexVec(x, y), b, nb)
        history.append(rel)
        if rel <= tol:
            return BlockVec(x, y), StationaryReport(True, k, rel, history)
    return BlockVec(x, y), StationaryReport(False, maxit, history[-1] if history else 1.0, history)


def mhss_iterate(prob, alpha: float, tol: float = 1e-10, maxit: int = 1000, ordering: str = "rcm"):
    """MHSS stationary iteration on the complex system from a zero start.

    Half steps:
    ``(alpha I + W) u' = (alpha I - iT) u + b`` and
    ``(alpha I + T) u+ = (alpha I + iW) u' - i b``.

    Returns
    -------
    ComplexVec, StationaryReport
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    W, T, b = prob.W, prob.T, prob.b
    Wa, Ta = W.shifted(alpha), T.shifted(alpha)
    FW = cholesky(Wa, fill_reducing_order(Wa, ordering))
    FT = cholesky(Ta, fill_reducing_order(Ta, ordering))
    nb = b.norm()
    if nb == 0.0:
        raise ValueError("right-hand side is zero")
    ur = np.zeros(W.n)
    ui = np.zeros(W.n)
    history = []
    for k in range(1, maxit + 1):
        # (alpha - iT)(ur + i ui) = (alpha ur + T ui) + i(alpha ui - T ur)
        hr = solve_spd(FW, alpha * ur + spmv(T, ui) + b.re)
        hi = solve_spd(FW, alpha * ui - spmv(T, ur) + b.im)
        # (alpha + iW)(hr + i hi) - i b = (alpha hr - W hi + b.im) + i(alpha hi + W hr - b.re)
        ur = solve_spd(FT, alpha * hr - spmv(W, hi) + b.im)
        ui = solve_spd(FT, alpha * hi + spmv(W, hr) - b.re)
        rel = _relres(W, T, ComplexVec(ur, ui), b, nb)
        history.append(rel)
        if not np.isfinite(rel):
            break
        if rel <= tol:
            return ComplexVec(ur, ui), StationaryReport(True, k, rel, history)
    return ComplexVec(ur, ui), StationaryReport(False, len(history), history[-1] if history else 1.0, history)

