"""Matrix Market coordinate I/O for :class:`SparseSym`."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import SparseSym, from_coo

__all__ = ["write_mm", "read_mm"]

_HEADER = "%%MatrixMarket matrix coordinate real"


def write_mm(path, S: SparseSym, comment: str | None = None) -> None:
    """Write ``S`` in coordinate format.

    Symmetric matrices are written with the ``symmetric`` qualifier and only
    their lower triangle, as the format requires.
    """
    path = Path(path)
    rows = np.repeat(np.arange(S.n), np.diff(S.row_ptr))
    cols = S.col_idx
    vals = S.values
    kind = "symmetric" if S.symmetric else "general"
    if S.symmetric:
        keep = rows >= cols
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
    try:
        with path.open("w") as fh:
            fh.write(f"{_HEADER} {kind}\n")
            if comment:
                for line in comment.splitlines():
                    fh.write(f"% {line}\n")
            fh.write(f"{S.n} {S.n} {rows.size}\n")
            for i, j, v in zip(rows, cols, vals):
                fh.write(f"{i + 1} {j + 1} {v:.17g}\n")
    except OSError as exc:
        raise OSError(f"cannot write Matrix Market file {path}: {exc}") from exc


def read_mm(path) -> SparseSym:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().split()
        if len(header) < 5 or header[0] != "%%MatrixMarket" or header[1:3] != ["matrix", "coordinate"]:
            raise ValueError(f"{path}: not a Matrix Market coordinate file")
        field, kind = header[3].lower(), header[4].lower()
        if field not in ("real", "integer", "double"):
            raise ValueError(f"{path}: unsupported field {field!r}")
        if kind not in ("symmetric", "general"):
            raise ValueError(f"{path}: unsupported symmetry {kind!r}")
        line = fh.readline()
        while line.startswith("%"):
            line = fh.readline()
        nr, nc, nnz = (int(t) for t in line.split())
        if nr != nc:
            raise ValueError(f"{path}: matrix is not square ({nr}x{nc})")
        data = np.loadtxt(fh, ndmin=2) if nnz else np.zeros((0, 3))
    if data.shape[0] != nnz:
        raise ValueError(f"{path}: expected {nnz} entries, found {data.shape[0]}")
    i = data[:, 0].astype(np.int64) - 1
    j = data[:, 1].astype(np.int64) - 1
    v = data[:, 2]
    if kind == "symmetric":
        off = i != j
        i, j, v = np.concatenate([i, j[off]]), np.concatenate([j, i[off]]), np.concatenate([v, v[off]])
    S = from_coo(nr, i, j, v, symmetric=kind == "symmetric")
    if kind == "general":
        t = S.transpose()
        if np.array_equal(t.col_idx, S.col_idx) and np.array_equal(t.values, S.values):
            S = SparseSym(S.n, S.row_ptr, S.col_idx, S.values, True)
    return S
