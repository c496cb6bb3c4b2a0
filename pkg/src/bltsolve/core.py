"""Sparse symmetric storage and the complex / realified operator actions.

A complex symmetric system ``(W + iT) u = b`` with real ``W`` and ``T`` is
handled in two equivalent ways:

* as a complex system on pairs ``(re, im)`` of real arrays, and
* as the real 2n x 2n block system ``[[W, -T], [T, W]] (x; y) = (p; q)``.

Both actions are built on a single CSR matrix-vector kernel whose summation
order is fixed (row-major, ascending column) so residual histories are
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "SparseSym",
    "BlockVec",
    "ComplexVec",
    "spmv",
    "apply_realified",
    "apply_complex",
    "identity",
    "diagonal",
    "from_dense",
    "from_coo",
    "kron",
    "add",
]


@njit(cache=True)
def _csr_matvec(n, row_ptr, col_idx, values, x, out):
    for i in range(n):
        acc = 0.0
        for p in range(row_ptr[i], row_ptr[i + 1]):
            acc += values[p] * x[col_idx[p]]
        out[i] = acc


@dataclass(frozen=True, eq=False)
class SparseSym:
    """Square real matrix in compressed sparse row form.

    Both triangles are stored when ``symmetric`` is set, so a row slice is the
    full row of the matrix.

    Attributes
    ----------
    n : int
        Dimension.
    row_ptr, col_idx, values : ndarray
        CSR arrays. Column indices are strictly increasing within a row.
    symmetric : bool
        Whether every stored ``(i, j, v)`` has a bit-identical ``(j, i, v)``.
    """

    n: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray
    symmetric: bool = True

    def __post_init__(self):
        for arr in (self.row_ptr, self.col_idx, self.values):
            arr.setflags(write=False)

    @property
    def nnz(self) -> int:
        return int(self.row_ptr[-1])

    def check(self) -> None:
        """Raise ``ValueError`` if a structural invariant is violated."""
        n = self.n
        rp, ci = self.row_ptr, self.col_idx
        if rp.shape != (n + 1,) or rp[0] != 0:
            raise ValueError("row_ptr must have length n+1 and start at 0")
        if np.any(np.diff(rp) < 0):
            raise ValueError("row_ptr must be nondecreasing")
        if ci.shape != (rp[-1],) or self.values.shape != ci.shape:
            raise ValueError("col_idx/values length must equal row_ptr[-1]")
        if ci.size and (ci.min() < 0 or ci.max() >= n):
            raise ValueError("column index out of range")
        rows = np.repeat(np.arange(n), np.diff(rp))
        same_row = rows[1:] == rows[:-1]
        if np.any(ci[1:][same_row] <= ci[:-1][same_row]):
            raise ValueError("column indices must be strictly increasing within rows")
        if self.symmetric:
            t = self.transpose()
            if not (
                np.array_equal(t.row_ptr, rp)
                and np.array_equal(t.col_idx, ci)
                and np.array_equal(t.values, self.values)
            ):
                raise ValueError("matrix flagged symmetric is not bit-identically symmetric")

    def transpose(self) -> "SparseSym":
        rows = np.repeat(np.arange(self.n), np.diff(self.row_ptr))
        return from_coo(self.n, self.col_idx, rows, self.values, symmetric=False)

    def diagonal(self) -> np.ndarray:
        d = np.zeros(self.n)
        rows = np.repeat(np.arange(self.n), np.diff(self.row_ptr))
        on = rows == self.col_idx
        d[rows[on]] = self.values[on]
        return d

    def max_abs(self) -> float:
        return float(np.abs(self.values).max()) if self.nnz else 0.0

    def scaled(self, s: float) -> "SparseSym":
        return SparseSym(self.n, self.row_ptr, self.col_idx, self.values * s, self.symmetric)

    def shifted(self, s: float) -> "SparseSym":
        """Return ``self + s I``."""
        return add(self, identity(self.n), 1.0, s)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        rows = np.repeat(np.arange(self.n), np.diff(self.row_ptr))
        out[rows, self.col_idx] = self.values
        return out

    def __matmul__(self, x):
        return spmv(self, x)


@dataclass(frozen=True)
class BlockVec:
    """Real vector of length 2n split as ``(x; y)``."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("BlockVec halves must be 1-D arrays of equal length")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.y])

    @classmethod
    def from_flat(cls, v: np.ndarray) -> "BlockVec":
        n = v.shape[0] // 2
        if v.shape != (2 * n,):
            raise ValueError("flat block vector must have even length")
        return cls(v[:n].copy(), v[n:].copy())


@dataclass(frozen=True)
class ComplexVec:
    """Complex vector held as two real arrays."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        if self.re.shape != self.im.shape or self.re.ndim != 1:
            raise ValueError("ComplexVec parts must be 1-D arrays of equal length")

    @property
    def n(self) -> int:
        return self.re.shape[0]

    def to_numpy(self) -> np.ndarray:
        return self.re + 1j * self.im

    @classmethod
    def from_numpy(cls, z) -> "ComplexVec":
        z = np.asarray(z)
        return cls(np.ascontiguousarray(z.real, dtype=float), np.ascontiguousarray(z.imag, dtype=float))

    def norm(self) -> float:
        return float(np.sqrt(self.re @ self.re + self.im @ self.im))


def spmv(S: SparseSym, x) -> np.ndarray:
    """Return ``S @ x`` summed row by row in ascending column order."""
    x = np.ascontiguousarray(x, dtype=float)
    if x.shape != (S.n,):
        raise ValueError(f"dimension mismatch: matrix is {S.n}x{S.n}, vector has shape {x.shape}")
    out = np.empty(S.n)
    _csr_matvec(S.n, S.row_ptr, S.col_idx, S.values, x, out)
    return out


def _check_pair(W: SparseSym, T: SparseSym, n: int) -> None:
    if W.n != T.n or W.n != n:
        raise ValueError(f"dimension mismatch: W is {W.n}, T is {T.n}, vector is {n}")


def apply_realified(W: SparseSym, T: SparseSym, v: BlockVec) -> BlockVec:
    """Apply ``[[W, -T], [T, W]]`` to ``(v.x; v.y)``."""
    _check_pair(W, T, v.n)
    Wx, Wy = spmv(W, v.x), spmv(W, v.y)
    Tx, Ty = spmv(T, v.x), spmv(T, v.y)
    return BlockVec(Wx - Ty, Tx + Wy)


def apply_complex(W: SparseSym, T: SparseSym, u: ComplexVec) -> ComplexVec:
    """Apply ``W + iT`` to ``u`` using explicit real/imaginary arithmetic."""
    _check_pair(W, T, u.n)
    Wr, Wi = spmv(W, u.re), spmv(W, u.im)
    Tr, Ti = spmv(T, u.re), spmv(T, u.im)
    return ComplexVec(Wr - Ti, Tr + Wi)


# -- construction helpers ---------------------------------------------------


def from_coo(n, rows, cols, vals, symmetric=True, drop_zeros=False) -> SparseSym:
    """Assemble CSR from triplets, summing duplicates."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=float)
    if rows.size and (min(rows.min(), cols.min()) < 0 or max(rows.max(), cols.max()) >= n):
        raise ValueError("triplet index out of range")
    key = rows * n + cols
    order = np.argsort(key, kind="stable")
    key, vals = key[order], vals[order]
    uniq, start = np.unique(key, return_index=True)
    summed = np.add.reduceat(vals, start) if vals.size else vals
    if drop_zeros:
        keep = summed != 0.0
        uniq, summed = uniq[keep], summed[keep]
    r, c = np.divmod(uniq, n)
    row_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(row_ptr, r + 1, 1)
    np.cumsum(row_ptr, out=row_ptr)
    return SparseSym(int(n), row_ptr, c.astype(np.int64), summed.astype(float), symmetric)


def from_dense(A, symmetric=None, tol=0.0) -> SparseSym:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("from_dense needs a square matrix")
    if symmetric is None:
        symmetric = bool(np.array_equal(A, A.T))
    r, c = np.nonzero(np.abs(A) > tol)
    return from_coo(A.shape[0], r, c, A[r, c], symmetric=symmetric)


def identity(n: int) -> SparseSym:
    return diagonal(np.ones(n))


def diagonal(d) -> SparseSym:
    d = np.asarray(d, dtype=float)
    n = d.shape[0]
    return SparseSym(n, np.arange(n + 1, dtype=np.int64), np.arange(n, dtype=np.int64), d.copy(), True)


def add(A: SparseSym, B: SparseSym, a: float = 1.0, b: float = 1.0) -> SparseSym:
    """Return ``a A + b B`` on the union pattern."""
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    ra = np.repeat(np.arange(A.n), np.diff(A.row_ptr))
    rb = np.repeat(np.arange(B.n), np.diff(B.row_ptr))
    return from_coo(
        A.n,
        np.concatenate([ra, rb]),
        np.concatenate([A.col_idx, B.col_idx]),
        np.concatenate([a * A.values, b * B.values]),
        symmetric=A.symmetric and B.symmetric,
    )


def kron(A: SparseSym, B: SparseSym) -> SparseSym:
    """Kronecker product ``A (x) B``."""
    ra = np.repeat(np.arange(A.n), np.diff(A.row_ptr))
    rb = np.repeat(np.arange(B.n), np.diff(B.row_ptr))
    rows = (ra[:, None] * B.n + rb[None, :]).ravel()
    cols = (A.col_idx[:, None] * B.n + B.col_idx[None, :]).ravel()
    vals = (A.values[:, None] * B.values[None, :]).ravel()
    return from_coo(A.n * B.n, rows, cols, vals, symmetric=A.symmetric and B.symmetric)
