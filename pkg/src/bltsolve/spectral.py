"""Dense eigensolvers and eigenvalue-clustering diagnostics for BLT.

For ``G = [[W, 0], [alpha I, W]]`` and ``A = [[W, -T], [T, W]]`` every
eigenpair ``(lam, (x; y))`` of ``G^-1 A`` with ``y != 0`` and ``lam != 1``
satisfies ``a (1 - lam)^2 = alpha lam b - c`` with the Rayleigh-type
quotients

    a = y*Ty / y*y,   b = y*T W^-2 T y / y*y,   c = y*T W^-1 T W^-1 T y / y*y.

When ``alpha`` is at most ``alpha*`` (a bound built from the extreme
eigenvalues of ``W`` and ``T``) the roots are complex and
``|lam - 1| = sqrt((c - alpha b) / a)``, which yields the two disk radii
reported here.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from .core import SparseSym, from_dense, spmv
from .factor import NotPositiveDefiniteError, cholesky, fill_reducing_order, solve_spd

__all__ = [
    "DegenerateError",
    "ConvergenceError",
    "EigenpairStats",
    "AlphaBounds",
    "SpectrumReport",
    "sym_eigenvalues",
    "hessenberg",
    "nonsym_eigenvalues",
    "eigenpair_stats",
    "lemma2_roots",
    "alpha_star",
    "alpha_tilde",
    "select_alpha",
    "disk_radii",
    "courant_fischer_violation",
    "preconditioned_matrix",
    "verify_clustering",
    "write_spectrum_csv",
    "extremal_eigenvalues",
]


class DegenerateError(ValueError):
    """A quantity is undefined because of a degenerate input (e.g. ``T = 0``)."""


class ConvergenceError(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def _dense(S) -> np.ndarray:
    if isinstance(S, SparseSym):
        return S.to_dense()
    return np.array(S, dtype=float)


# -- symmetric: cyclic Jacobi ----------------------------------------------


@njit(cache=True)
def _jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if math.sqrt(2.0 * off) <= tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    return -1


def sym_eigenvalues(S, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi, ascending.

    Sweeps stop once the off-diagonal Frobenius norm is below
    ``tol * ||S||_F``.
    """
    A = _dense(S)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("sym_eigenvalues needs a square matrix")
    scale = max(float(np.abs(A).max()) if A.size else 0.0, 1.0)
    if np.abs(A - A.T).max(initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    A = np.ascontiguousarray((A + A.T) / 2)
    fro = float(np.linalg.norm(A))
    if fro == 0.0:
        return np.zeros(A.shape[0])
    if _jacobi(A, tol * fro, max_sweeps) < 0:
        raise ConvergenceError("Jacobi did not converge", np.sort(np.diag(A)))
    return np.sort(np.diag(A))


# -- nonsymmetric: Hessenberg + Francis double-shift QR --------------------


def hessenberg(D) -> np.ndarray:
    """Upper Hessenberg form by Householder similarity transforms."""
    H = np.array(D, dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0])
        v /= np.linalg.norm(v)
        H[k + 1:, k:] -= 2.0 * np.outer(v, v @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v)
        H[k + 2:, k] = 0.0
    return H


@njit(cache=True)
def _hqr(h, max_its):
    # Francis double-shift QR on an upper Hessenberg matrix (1-based internally).
    n = h.shape[0]
    a = np.zeros((n + 1, n + 1))
    a[1:, 1:] = h
    wr = np.zeros(n + 1)
    wi = np.zeros(n + 1)
    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(a[i, j])
    nn = n
    t = 0.0
    total = 0
    status = 0
    while nn >= 1:
        its = 0
        while True:
            l = 1
            for ll in range(nn, 1, -1):
                s = abs(a[ll - 1, ll - 1]) + abs(a[ll, ll])
                if s == 0.0:
                    s = anorm
                if abs(a[ll, ll - 1]) + s == s:
                    a[ll, ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
            else:
                y = a[nn - 1, nn - 1]
                w = a[nn, nn - 1] * a[nn - 1, nn]
                if l == nn - 1:
                    p = 0.5 * (y - x)
                    q = p * p + w
                    z = math.sqrt(abs(q))
                    tr = x + y
                    det = x * y - w
                    x += t
                    if q >= 0.0:
                        z = p + (z if p >= 0.0 else -z)
                        wr[nn - 1] = x + z
                        wr[nn] = x + z
                        if z != 0.0:
                            wr[nn] = x - w / z
                        wi[nn - 1] = 0.0
                        wi[nn] = 0.0
                    else:
                        wr[nn - 1] = x + p
                        wr[nn] = x + p
                        wi[nn - 1] = -z
                        wi[nn] = z
                    # characteristic-polynomial residual of the deflated block
                    for e in range(nn - 1, nn + 1):
                        mr = wr[e] - t
                        mi = wi[e]
                        rr = mr * mr - mi * mi - tr * mr + det
                        ri = 2.0 * mr * mi - tr * mi
                        mag = mr * mr + mi * mi + abs(tr) * math.sqrt(mr * mr + mi * mi) + abs(det)
                        if math.sqrt(rr * rr + ri * ri) > 1e-8 * mag + 1e-300:
                            status = 2
                    nn -= 2
                else:
                    if total >= max_its:
                        return wr[1:], wi[1:], nn, 1
                    if its == 10 or its == 20:
                        t += x
                        for i in range(1, nn + 1):
                            a[i, i] -= x
                        s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                        x = 0.75 * s
                        y = x
                        w = -0.4375 * s * s
                    its += 1
                    total += 1
                    m = nn - 2
                    while m >= l:
                        z = a[m, m]
                        r = x - z
                        s = y - z
                        p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                        q = a[m + 1, m + 1] - z - r - s
                        r = a[m + 2, m + 1]
                        s = abs(p) + abs(q) + abs(r)
                        p /= s
                        q /= s
                        r /= s
                        if m == l:
                            break
                        u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                        v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                        if u + v == v:
                            break
                        m -= 1
                    for i in range(m + 2, nn + 1):
                        a[i, i - 2] = 0.0
                        if i != m + 2:
                            a[i, i - 3] = 0.0
                    for k in range(m, nn):
                        if k != m:
                            p = a[k, k - 1]
                            q = a[k + 1, k - 1]
                            r = 0.0
                            if k != nn - 1:
                                r = a[k + 2, k - 1]
                            x = abs(p) + abs(q) + abs(r)
                            if x != 0.0:
                                p /= x
                                q /= x
                                r /= x
                        s = math.sqrt(p * p + q * q + r * r)
                        if p < 0.0:
                            s = -s
                        if s != 0.0:
                            if k == m:
                                if l != m:
                                    a[k, k - 1] = -a[k, k - 1]
                            else:
                                a[k, k - 1] = -s * x
                            p += s
                            x = p / s
                            y = q / s
                            z = r / s
                            q /= p
                            r /= p
                            for j in range(k, nn + 1):
                                p = a[k, j] + q * a[k + 1, j]
                                if k != nn - 1:
                                    p += r * a[k + 2, j]
                                    a[k + 2, j] -= p * z
                                a[k + 1, j] -= p * y
                                a[k, j] -= p * x
                            mmin = nn if nn < k + 3 else k + 3
                            for i in range(l, mmin + 1):
                                p = x * a[i, k] + y * a[i, k + 1]
                                if k != nn - 1:
                                    p += z * a[i, k + 2]
                                    a[i, k + 2] -= p * r
                                a[i, k + 1] -= p * q
                                a[i, k] -= p
            if not (nn >= 1 and l < nn - 1):
                break
    return wr[1:], wi[1:], 0, status


def nonsym_eigenvalues(D) -> np.ndarray:
    """Eigenvalues of a real square matrix (complex array, conjugate pairs adjacent).

    Raises
    ------
    ConvergenceError
        If QR needs more than ``30 n`` iterations; ``partial`` holds the
        eigenvalues deflated so far.
    """
    A = _dense(D)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("nonsym_eigenvalues needs a square matrix")
    n = A.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    H = np.ascontiguousarray(hessenberg(A))
    wr, wi, left, status = _hqr(H, 30 * n)
    lam = wr + 1j * wi
    if status == 1:
        raise ConvergenceError("QR did not converge", lam[left:])
    if status == 2:
        raise ConvergenceError("eigenvalue of a 2x2 block failed its residual check", lam)
    return lam


# -- eigenpair quotients and the quadratic ---------------------------------


@dataclass(frozen=True)
class EigenpairStats:
    a: float
    b: float
    c: float


def _factor_of(W):
    if hasattr(W, "ordering") and hasattr(W, "col_ptr"):
        return W
    S = W if isinstance(W, SparseSym) else from_dense(np.asarray(W, dtype=float), symmetric=True)
    return cholesky(S, fill_reducing_order(S))


def _matvec(T, v):
    if isinstance(T, SparseSym):
        return spmv(T, v)
    return np.asarray(T, dtype=float) @ v


def eigenpair_stats(W, T, y) -> EigenpairStats:
    """Quotients ``(a, b, c)`` of a (possibly complex) vector ``y``.

    ``W`` may be a dense array, a :class:`SparseSym` or a ready Cholesky
    factor; ``W^-1 T y`` is obtained from two real SPD solves.
    """
    y = np.asarray(y)
    yy = float(np.vdot(y, y).real)
    if yy == 0.0:
        raise ValueError("y must be nonzero")
    F = _factor_of(W)
    Ty = _matvec(T, y.real) + 1j * _matvec(T, y.imag)
    z = solve_spd(F, Ty.real) + 1j * solve_spd(F, Ty.imag)
    Tz = _matvec(T, z.real) + 1j * _matvec(T, z.imag)
    a = float(np.vdot(y, Ty).real) / yy
    b = float(np.vdot(z, z).real) / yy
    c = float(np.vdot(z, Tz).real) / yy
    return EigenpairStats(max(a, 0.0), max(b, 0.0), max(c, 0.0))


def lemma2_roots(stats: EigenpairStats, alpha: float):
    """Roots ``lam = 1 + (alpha b +- sqrt(Delta)) / (2a)`` of
    ``a (1 - lam)^2 = alpha lam b - c``.

    Returns ``(lam_plus, lam_minus, delta)`` with
    ``delta = alpha^2 b^2 + 4 a (alpha b - c)``.
    """
    a, b, c = stats.a, stats.b, stats.c
    if a == 0.0:
        raise DegenerateError("degenerate: lambda equals one (a = 0)")
    delta = alpha * alpha * b * b + 4.0 * a * (alpha * b - c)
    root = math.sqrt(delta) if delta >= 0.0 else 1j * math.sqrt(-delta)
    lp = 1.0 + (alpha * b + root) / (2.0 * a)
    lm = 1.0 + (alpha * b - root) / (2.0 * a)
    return complex(lp), complex(lm), delta


def alpha_star(nu_min: float, nu_max: float, mu_min: float, mu_max: float) -> float:
    """``2 nu1^3 mu1^4 / (nun^2 mun^3 (sqrt(nu1^2 + mun^2) + nu1))``, the largest
    alpha that keeps every root pair complex."""
    if not nu_min > 0:
        raise ValueError("nu_min must be positive")
    if mu_max == 0.0:
        raise DegenerateError("T is zero: every eigenvalue equals one")
    return 2.0 * nu_min ** 3 * mu_min ** 4 / (
        nu_max ** 2 * mu_max ** 3 * (math.sqrt(nu_min ** 2 + mu_max ** 2) + nu_min)
    )


def alpha_tilde(nu_min: float, nu_max: float, mu_min: float, mu_max: float) -> float:
    """Value of alpha that zeroes the second disk radius r2: ``mun^3 nun^2 / (nu1^2 mu1^2)``."""
    if mu_min == 0.0:
        raise DegenerateError("T is singular: alpha_tilde is undefined")
    return mu_max ** 3 * nu_max ** 2 / (nu_min ** 2 * mu_min ** 2)


@dataclass(frozen=True)
class AlphaBounds:
    alpha_star: float
    alpha_tilde: float | None
    alpha_chosen: float
    nu_min: float
    nu_max: float
    mu_min: float
    mu_max: float
    degenerate: str | None = None


def extremal_eigenvalues(S, dense_limit: int = 300, tol: float = 1e-12, maxit: int = 5000, seed: int = 0):
    """Smallest and largest eigenvalue of a symmetric positive semidefinite matrix.

    Jacobi for ``n <= dense_limit``; otherwise power iteration for the top
    and Cholesky-based inverse iteration for the bottom (0 when the
    factorization finds the matrix singular).
    """
    n = S.n if isinstance(S, SparseSym) else np.asarray(S).shape[0]
    if n <= dense_limit:
        ev = sym_eigenvalues(S)
        return float(ev[0]), float(ev[-1])
    if not isinstance(S, SparseSym):
        S = from_dense(S, symmetric=True)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    top = 0.0
    for _ in range(maxit):
        w = spmv(S, v)
        new = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, 0.0
        v = w / nw
        if abs(new - top) <= tol * abs(new):
            top = new
            break
        top = new
    try:
        F = cholesky(S, fill_reducing_order(S))
    except NotPositiveDefiniteError:
        return 0.0, top
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    low = 0.0
    for _ in range(maxit):
        w = solve_spd(F, v)
        v = w / np.linalg.norm(w)
        new = float(v @ spmv(S, v))
        if abs(new - low) <= tol * abs(new):
            low = new
            break
        low = new
    return low, top


def select_alpha(W, T, **kw) -> AlphaBounds:
    """Pick alpha closest to ``alpha_tilde`` inside ``(0, alpha*]``.

    Degenerate inputs are flagged in ``degenerate``: ``T = 0`` gives
    ``alpha_chosen = 1``; singular ``T`` gives ``alpha* / 2`` (or 1 when
    ``alpha*`` vanishes) since ``alpha_tilde`` is undefined.
    """
    nu_min, nu_max = extremal_eigenvalues(W, **kw)
    mu_min, mu_max = extremal_eigenvalues(T, **kw)
    if not nu_min > 0:
        raise NotPositiveDefiniteError(0, nu_min)
    if mu_max <= 0.0:
        return AlphaBounds(0.0, None, 1.0, nu_min, nu_max, 0.0, 0.0, "T is zero")
    if mu_min <= 1e-12 * mu_max:
        mu_min = 0.0
    a_star = alpha_star(nu_min, nu_max, mu_min, mu_max)
    if mu_min == 0.0:
        chosen = a_star / 2 if a_star > 0 else 1.0
        return AlphaBounds(a_star, None, chosen, nu_min, nu_max, mu_min, mu_max, "T is singular")
    a_tilde = alpha_tilde(nu_min, nu_max, mu_min, mu_max)
    return AlphaBounds(a_star, a_tilde, min(a_tilde, a_star), nu_min, nu_max, mu_min, mu_max)


def disk_radii(stats_list, bounds: AlphaBounds, alpha: float):
    """Radii of the two disks centred at 1.

    ``r1`` is the largest per-eigenpair radius ``sqrt((c - alpha b)/a)`` over
    pairs with ``a > 0`` (negative radicands clamp to 0). ``r2`` is the bound
    from the extreme eigenvalues of ``W`` and ``T``; it is ``None`` when
    ``mu_min = 0``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    r1 = 0.0
    for st in stats_list:
        if st.a > 0:
            r1 = max(r1, math.sqrt(max((st.c - alpha * st.b) / st.a, 0.0)))
    nu1, nun, mu1, mun = bounds.nu_min, bounds.nu_max, bounds.mu_min, bounds.mu_max
    if mu1 <= 0.0:
        return r1, None
    num = mun ** 3 * nun ** 2 - alpha * mu1 ** 2 * nu1 ** 2
    r2 = math.sqrt(max(num, 0.0) / (nu1 ** 2 * nun ** 2 * mu1))
    return r1, r2


def courant_fischer_violation(st: EigenpairStats, bounds: AlphaBounds) -> float:
    """Largest relative amount by which ``a, b, c`` leave their eigenvalue sandwiches."""
    nu1, nun, mu1, mun = bounds.nu_min, bounds.nu_max, bounds.mu_min, bounds.mu_max
    worst = 0.0
    for val, lo, hi in (
        (st.a, mu1, mun),
        (st.b, (mu1 / nun) ** 2, (mun / nu1) ** 2),
        (st.c, mu1 ** 3 / nun ** 2, mun ** 3 / nu1 ** 2),
    ):
        scale = max(1.0, abs(hi))
        worst = max(worst, (lo - val) / scale, (val - hi) / scale)
    return worst


# -- full check on a small problem -----------------------------------------


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    unit_count: int
    max_dist: float
    theorem1_radius: float
    theorem2_radius: float | None
    all_within: bool
    alpha: float
    bounds: AlphaBounds | None = None
    stats: list = field(default_factory=list)
    eq12_max_residual: float = 0.0
    lemma1_ok: bool = True
    courant_fischer_max: float = 0.0


def preconditioned_matrix(W, T, alpha: float) -> np.ndarray:
    """Dense ``G^-1 A`` from two block solves per column."""
    Wd, Td = _dense(W), _dense(T)
    n = Wd.shape[0]
    F = _factor_of(W if isinstance(W, SparseSym) else Wd)
    top = np.hstack([Wd, -Td])
    bot = np.hstack([Td, Wd])
    X1 = solve_spd(F, top)
    X2 = solve_spd(F, bot - alpha * X1)
    return np.vstack([X1, X2]).reshape(2 * n, 2 * n)


def _eigvec(M, lam, rng, iters=2):
    n = M.shape[0]
    start = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    # a shift that lands exactly on the eigenvalue makes the solve singular;
    # back off until LU succeeds
    for eps in (1e-12, 1e-10, 1e-8):
        B = M - (lam + eps * (1.0 + abs(lam))) * np.eye(n)
        v = start.copy()
        try:
            for _ in range(iters):
                v = np.linalg.solve(B, v)
                v /= np.linalg.norm(v)
        except np.linalg.LinAlgError:
            continue
        if np.all(np.isfinite(v)):
            return v
    raise ConvergenceError(f"inverse iteration failed for eigenvalue {lam}", np.array([lam]))


def verify_clustering(W, T=None, alpha: float = 1.0, tol: float = 1e-8, seed: int = 0) -> SpectrumReport:
    """Check the eigenvalues of ``G^-1 A`` against both disks.

    ``W`` may be an assembled problem (then ``T`` is taken from it). A
    non-unit eigenvalue passes when ``|lam - 1| <= r + tol`` for ``r1`` and,
    if available, ``r2``. The quadratic residual
    ``|a (1-lam)^2 - alpha lam b + c| / (1 + |lam|^2)``, the check that
    ``y ~ 0`` forces ``lam = 1`` and the Courant-Fischer sandwiches are
    recorded alongside.
    """
    if T is None:
        W, T = W.W, W.T
    Wd, Td = _dense(W), _dense(T)
    n = Wd.shape[0]
    if 2 * n > 2000:
        raise ValueError(f"2n = {2 * n} exceeds the dense limit 2000; use a smaller problem")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    F = _factor_of(Wd)
    M = preconditioned_matrix(Wd, Td, alpha)
    if not M[:n, n:].any():
        # block lower triangular (T = 0): the spectrum is that of the
        # diagonal blocks, which avoids the sqrt(eps) spread QR shows on the
        # defective eigenvalue 1
        lam = np.concatenate([nonsym_eigenvalues(M[:n, :n]), nonsym_eigenvalues(M[n:, n:])])
    else:
        lam = nonsym_eigenvalues(M)
    nu_min, nu_max = extremal_eigenvalues(Wd, dense_limit=n)
    mu_min, mu_max = extremal_eigenvalues(Td, dense_limit=n)
    mu_min = max(mu_min, 0.0)
    if mu_max > 0 and mu_min <= 1e-12 * mu_max:
        mu_min = 0.0
    bounds = AlphaBounds(math.nan, None, alpha, nu_min, nu_max, mu_min, mu_max)
    if mu_max > 0:
        bounds = AlphaBounds(
            alpha_star(nu_min, nu_max, mu_min, mu_max),
            alpha_tilde(nu_min, nu_max, mu_min, mu_max) if mu_min > 0 else None,
            alpha, nu_min, nu_max, mu_min, mu_max,
        )
    a_max = max(np.abs(Wd).max(), np.abs(Td).max())
    unit_tol = 1e-8 * (1.0 + a_max)
    rng = np.random.default_rng(seed)
    stats: list = []
    eq12 = 0.0
    lemma1 = True
    cf = 0.0
    for lk in lam:
        if abs(lk - 1.0) <= unit_tol:
            stats.append(None)
            continue
        u = _eigvec(M, lk, rng)
        y = u[n:]
        if np.linalg.norm(y) <= tol * np.linalg.norm(u):
            lemma1 = False
            stats.append(None)
            continue
        st = eigenpair_stats(F, Td, y)
        stats.append(st)
        res = abs(st.a * (1 - lk) ** 2 - alpha * lk * st.b + st.c) / (1.0 + abs(lk) ** 2)
        eq12 = max(eq12, res)
        if mu_max > 0:
            cf = max(cf, courant_fischer_violation(st, bounds))
    r1, r2 = disk_radii([s for s in stats if s is not None], bounds, alpha)
    dist = np.abs(lam - 1.0)
    nonunit = dist > unit_tol
    limit = r1 if r2 is None else min(r1, r2)
    all_within = bool(np.all(dist[nonunit] <= limit + tol))
    return SpectrumReport(
        eigenvalues=lam,
        unit_count=int(np.count_nonzero(~nonunit)),
        max_dist=float(dist.max(initial=0.0)),
        theorem1_radius=r1,
        theorem2_radius=r2,
        all_within=all_within,
        alpha=alpha,
        bounds=bounds,
        stats=stats,
        eq12_max_residual=eq12,
        lemma1_ok=lemma1,
        courant_fischer_max=cf,
    )


SPECTRUM_COLUMNS = ["re", "im", "dist", "a", "b", "c", "r1", "r2"]


def write_spectrum_csv(report: SpectrumReport, path) -> Path:
    """One row per eigenvalue plus a trailing ``# summary`` comment line."""
    path = Path(path)

    def fmt(v):
        return "" if v is None else f"{v:.17g}"

    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(SPECTRUM_COLUMNS)
            for lk, st in zip(report.eigenvalues, report.stats):
                a, b, c = (None, None, None) if st is None else (st.a, st.b, st.c)
                w.writerow([fmt(lk.real), fmt(lk.imag), fmt(abs(lk - 1.0)), fmt(a), fmt(b), fmt(c),
                            fmt(report.theorem1_radius), fmt(report.theorem2_radius)])
            fh.write(
                f"# all_within={str(report.all_within).lower()} alpha={report.alpha:.17g} "
                f"unit_count={report.unit_count} max_dist={report.max_dist:.17g}\n"
            )
    except OSError as exc:
        raise OSError(f"cannot write spectrum file {path}: {exc}") from exc
    return path
