"""Fill-reducing orderings, sparse Cholesky, and conjugate gradients.

The factorization is the up-looking row algorithm: a symbolic pass builds the
elimination tree and the column counts of ``L`` from the row subtrees, then
the numeric pass computes row ``k`` of ``L`` by a sparse triangular solve
over the reach of row ``k`` in the tree. Kernels are compiled with numba.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .core import SparseSym, from_coo, spmv

__all__ = [
    "NotPositiveDefiniteError",
    "Ordering",
    "CholFactor",
    "CGResult",
    "natural_order",
    "fill_reducing_order",
    "rcm_order",
    "amd_order",
    "permute",
    "etree",
    "symbolic_counts",
    "cholesky",
    "solve_spd",
    "cg_solve",
]


class NotPositiveDefiniteError(ValueError):
    """Raised when a nonpositive pivot (or CG curvature) is met."""

    def __init__(self, pivot: int, value: float, row: int | None = None):
        self.pivot = pivot
        self.value = value
        self.row = pivot if row is None else row
        super().__init__(f"matrix is not positive definite: pivot {pivot} (row {self.row}) is {value:.6g}")


@dataclass(frozen=True)
class Ordering:
    """Symmetric permutation; position ``i`` of the reordered matrix holds
    original index ``perm[i]``."""

    perm: np.ndarray
    inv_perm: np.ndarray

    @classmethod
    def from_perm(cls, perm) -> "Ordering":
        perm = np.asarray(perm, dtype=np.int64)
        n = perm.shape[0]
        inv = np.full(n, -1, dtype=np.int64)
        inv[perm] = np.arange(n)
        if np.any(inv < 0):
            raise ValueError("perm is not a permutation")
        return cls(perm, inv)

    @property
    def n(self) -> int:
        return self.perm.shape[0]


def natural_order(n: int) -> Ordering:
    return Ordering.from_perm(np.arange(n))


# -- orderings --------------------------------------------------------------


def _adjacency(S: SparseSym) -> list[np.ndarray]:
    rp, ci = S.row_ptr, S.col_idx
    out = []
    for i in range(S.n):
        row = ci[rp[i]:rp[i + 1]]
        out.append(row[row != i])
    return out


def _bfs_levels(adj, start, mask):
    """Level structure rooted at ``start`` restricted to ``mask``."""
    depth = {start: 0}
    queue = deque([start])
    last = start
    while queue:
        v = queue.popleft()
        last = v
        for w in adj[v]:
            w = int(w)
            if mask[w] and w not in depth:
                depth[w] = depth[v] + 1
                queue.append(w)
    return depth, last


def _pseudo_peripheral(adj, start, mask, degree):
    # George-Liu: move to a minimum-degree node of the last level until the
    # eccentricity stops growing.
    depth, _ = _bfs_levels(adj, start, mask)
    ecc = max(depth.values())
    while True:
        far = [v for v, d in depth.items() if d == ecc]
        cand = min(far, key=lambda v: (degree[v], v))
        d2, _ = _bfs_levels(adj, cand, mask)
        e2 = max(d2.values())
        if e2 <= ecc:
            return start
        start, depth, ecc = cand, d2, e2


def rcm_order(S: SparseSym) -> Ordering:
    """Reverse Cuthill-McKee ordering, ties broken by lowest index.

    Each connected component is reversed in place, so components keep their
    original relative order (a diagonal matrix keeps the identity).
    """
    n = S.n
    adj = _adjacency(S)
    degree = np.array([a.size for a in adj])
    unvisited = np.ones(n, dtype=bool)
    order = []
    for seed in range(n):
        if not unvisited[seed]:
            continue
        start = _pseudo_peripheral(adj, seed, unvisited, degree)
        unvisited[start] = False
        queue = deque([start])
        component = []
        while queue:
            v = queue.popleft()
            component.append(v)
            nbrs = [int(w) for w in adj[v] if unvisited[w]]
            nbrs.sort(key=lambda w: (degree[w], w))
            for w in nbrs:
                unvisited[w] = False
                queue.append(w)
        order.extend(reversed(component))
    return Ordering.from_perm(np.array(order, dtype=np.int64))


def amd_order(S: SparseSym) -> Ordering:
    """Minimum degree on the quotient graph with approximate external degrees.

    Eliminated variables become elements; the degree of a variable is bounded
    by its variable neighbours plus the sizes of its adjacent elements outside
    the newest element. There is no supervariable detection, so this is meant
    for matrices up to a few thousand rows.
    """
    n = S.n
    A = [set(map(int, a)) for a in _adjacency(S)]
    E: list[set[int]] = [set() for _ in range(n)]
    Le: dict[int, set[int]] = {}
    deg = [len(a) for a in A]
    heap = [(deg[i], i) for i in range(n)]
    heapq.heapify(heap)
    done = np.zeros(n, dtype=bool)
    order = []
    while heap:
        d, p = heapq.heappop(heap)
        if done[p] or d != deg[p]:
            continue
        done[p] = True
        order.append(p)
        Lp = set(A[p])
        for e in E[p]:
            Lp |= Le.pop(e)
        Lp.discard(p)
        Le[p] = Lp
        absorbed = E[p]
        remaining = n - len(order)
        for i in Lp:
            A[i] -= Lp
            A[i].discard(p)
            E[i] -= absorbed
            E[i].add(p)
            ext = len(A[i]) + len(Lp) - 1
            for e in E[i]:
                if e != p:
                    ext += len(Le[e] - Lp)
            deg[i] = min(ext, remaining - 1)
            heapq.heappush(heap, (deg[i], i))
        A[p] = set()
        E[p] = set()
    return Ordering.from_perm(np.array(order, dtype=np.int64))


def fill_reducing_order(S: SparseSym, method: str = "rcm") -> Ordering:
    """Ordering used before factorization (``"rcm"``, ``"amd"`` or ``"natural"``)."""
    if method == "rcm":
        return rcm_order(S)
    if method == "amd":
        return amd_order(S)
    if method == "natural":
        return natural_order(S.n)
    raise ValueError(f"unknown ordering method {method!r}")


def permute(S: SparseSym, ordering: Ordering) -> SparseSym:
    """Return ``P S P^T`` for the given ordering."""
    rows = np.repeat(np.arange(S.n), np.diff(S.row_ptr))
    inv = ordering.inv_perm
    return from_coo(S.n, inv[rows], inv[S.col_idx], S.values, symmetric=S.symmetric)


# -- symbolic analysis ------------------------------------------------------


@njit(cache=True)
def _etree(n, row_ptr, col_idx):
    parent = np.full(n, -1, dtype=np.int64)
    ancestor = np.full(n, -1, dtype=np.int64)
    for k in range(n):
        for p in range(row_ptr[k], row_ptr[k + 1]):
            i = col_idx[p]
            while i != -1 and i < k:
                nxt = ancestor[i]
                ancestor[i] = k
                if nxt == -1:
                    parent[i] = k
                i = nxt
    return parent


@njit(cache=True)
def _ereach(k, row_ptr, col_idx, parent, flag, stack):
    # Pattern of row k of L, written to stack[top:n] in topological order.
    n = parent.shape[0]
    top = n
    flag[k] = k
    for p in range(row_ptr[k], row_ptr[k + 1]):
        i = col_idx[p]
        if i > k:
            continue
        length = 0
        while flag[i] != k:
            stack[length] = i
            length += 1
            flag[i] = k
            i = parent[i]
        while length > 0:
            top -= 1
            length -= 1
            stack[top] = stack[length]
    return top


@njit(cache=True)
def _colcounts(n, row_ptr, col_idx, parent):
    counts = np.ones(n, dtype=np.int64)
    flag = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    for k in range(n):
        top = _ereach(k, row_ptr, col_idx, parent, flag, stack)
        for t in range(top, n):
            counts[stack[t]] += 1
    return counts


@njit(cache=True)
def _chol_numeric(n, row_ptr, col_idx, values, parent, col_ptr):
    nnz = col_ptr[n]
    Li = np.empty(nnz, dtype=np.int64)
    Lx = np.empty(nnz)
    nxt = col_ptr[:n].copy()
    x = np.zeros(n)
    flag = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    for k in range(n):
        top = _ereach(k, row_ptr, col_idx, parent, flag, stack)
        x[k] = 0.0
        for p in range(row_ptr[k], row_ptr[k + 1]):
            if col_idx[p] <= k:
                x[col_idx[p]] = values[p]
        d = x[k]
        x[k] = 0.0
        for t in range(top, n):
            j = stack[t]
            lkj = x[j] / Lx[col_ptr[j]]
            x[j] = 0.0
            for p in range(col_ptr[j] + 1, nxt[j]):
                x[Li[p]] -= Lx[p] * lkj
            d -= lkj * lkj
            p = nxt[j]
            nxt[j] += 1
            Li[p] = k
            Lx[p] = lkj
        if not d > 0.0:
            return Li, Lx, k, d
        p = nxt[k]
        nxt[k] += 1
        Li[p] = k
        Lx[p] = math.sqrt(d)
    return Li, Lx, -1, 0.0


def etree(S: SparseSym) -> np.ndarray:
    """Elimination tree of a symmetric pattern (``-1`` marks roots)."""
    return _etree(S.n, S.row_ptr, S.col_idx)


def symbolic_counts(S: SparseSym, ordering: Ordering | None = None) -> np.ndarray:
    """Column counts of the Cholesky factor (diagonal included)."""
    C = S if ordering is None else permute(S, ordering)
    parent = _etree(C.n, C.row_ptr, C.col_idx)
    return _colcounts(C.n, C.row_ptr, C.col_idx, parent)


# -- numeric factorization and solves --------------------------------------


@dataclass(frozen=True, eq=False)
class CholFactor:
    """``P S P^T = L L^T`` with ``L`` stored column-wise, diagonal first."""

    n: int
    col_ptr: np.ndarray
    row_idx: np.ndarray
    values: np.ndarray
    ordering: Ordering

    @property
    def nnz(self) -> int:
        return int(self.col_ptr[-1])

    def lower(self) -> SparseSym:
        """``L`` as a (non-symmetric) CSR matrix."""
        cols = np.repeat(np.arange(self.n), np.diff(self.col_ptr))
        return from_coo(self.n, self.row_idx, cols, self.values, symmetric=False)

    def to_dense(self) -> np.ndarray:
        L = np.zeros((self.n, self.n))
        cols = np.repeat(np.arange(self.n), np.diff(self.col_ptr))
        L[self.row_idx, cols] = self.values
        return L

    def solve(self, r) -> np.ndarray:
        return solve_spd(self, r)


def cholesky(S: SparseSym, ordering: Ordering | None = None) -> CholFactor:
    """Sparse Cholesky factor of an SPD matrix under ``ordering``.

    Raises
    ------
    NotPositiveDefiniteError
        If a pivot is not strictly positive. ``pivot`` is the elimination
        step, ``row`` the corresponding index of ``S``.
    """
    if ordering is None:
        ordering = natural_order(S.n)
    if ordering.n != S.n:
        raise ValueError(f"ordering has size {ordering.n}, matrix is {S.n}")
    C = permute(S, ordering)
    parent = _etree(C.n, C.row_ptr, C.col_idx)
    counts = _colcounts(C.n, C.row_ptr, C.col_idx, parent)
    col_ptr = np.zeros(S.n + 1, dtype=np.int64)
    np.cumsum(counts, out=col_ptr[1:])
    Li, Lx, bad, d = _chol_numeric(C.n, C.row_ptr, C.col_idx, C.values, parent, col_ptr)
    if bad >= 0:
        raise NotPositiveDefiniteError(int(bad), float(d), int(ordering.perm[bad]))
    for arr in (col_ptr, Li, Lx):
        arr.setflags(write=False)
    return CholFactor(S.n, col_ptr, Li, Lx, ordering)


@njit(cache=True)
def _lsolve_inplace(n, col_ptr, row_idx, values, y):
    for j in range(n):
        yj = y[j] / values[col_ptr[j]]
        y[j] = yj
        for p in range(col_ptr[j] + 1, col_ptr[j + 1]):
            y[row_idx[p]] -= values[p] * yj


@njit(cache=True)
def _ltsolve_inplace(n, col_ptr, row_idx, values, y):
    for j in range(n - 1, -1, -1):
        acc = y[j]
        for p in range(col_ptr[j] + 1, col_ptr[j + 1]):
            acc -= values[p] * y[row_idx[p]]
        y[j] = acc / values[col_ptr[j]]


def solve_spd(F: CholFactor, r) -> np.ndarray:
    """Solve ``S z = r`` with a factor of ``S``; ``r`` may hold several columns."""
    r = np.asarray(r, dtype=float)
    if r.shape[0] != F.n or r.ndim not in (1, 2):
        raise ValueError(f"dimension mismatch: factor is {F.n}, right-hand side has shape {r.shape}")
    perm, inv = F.ordering.perm, F.ordering.inv_perm
    if r.ndim == 2:
        return np.column_stack([solve_spd(F, r[:, j]) for j in range(r.shape[1])]) if r.shape[1] else r.copy()
    y = np.ascontiguousarray(r[perm])
    _lsolve_inplace(F.n, F.col_ptr, F.row_idx, F.values, y)
    _ltsolve_inplace(F.n, F.col_ptr, F.row_idx, F.values, y)
    return y[inv]


class CGResult(NamedTuple):
    z: np.ndarray
    iterations: int
    converged: bool
    relres: float


def cg_solve(S: SparseSym, r, tol: float = 1e-10, maxit: int | None = None, true_residual_every: int = 50) -> CGResult:
    """Unpreconditioned conjugate gradients from a zero start.

    The recursive residual is replaced by ``r - S z`` every
    ``true_residual_every`` iterations and before declaring convergence.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    r = np.asarray(r, dtype=float)
    if r.shape != (S.n,):
        raise ValueError(f"dimension mismatch: matrix is {S.n}, right-hand side has shape {r.shape}")
    maxit = 10 * S.n if maxit is None else maxit
    z = np.zeros(S.n)
    nr = float(np.linalg.norm(r))
    if nr == 0.0:
        return CGResult(z, 0, True, 0.0)
    res = r.copy()
    p = res.copy()
    rho = res @ res
    it = 0
    while it < maxit:
        q = spmv(S, p)
        curv = p @ q
        if not curv > 0.0:
            raise NotPositiveDefiniteError(it, float(curv))
        step = rho / curv
        z += step * p
        res -= step * q
        it += 1
        if it % true_residual_every == 0:
            res = r - spmv(S, z)
        rho_new = res @ res
        if math.sqrt(rho_new) <= tol * nr:
            true = r - spmv(S, z)
            if np.linalg.norm(true) <= tol * nr:
                return CGResult(z, it, True, float(np.linalg.norm(true) / nr))
            res = true
            rho_new = res @ res
        p = res + (rho_new / rho) * p
        rho = rho_new
    return CGResult(z, it, False, float(np.linalg.norm(r - spmv(S, z)) / nr))
