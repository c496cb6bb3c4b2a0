"""The four finite-difference test problems.

Grid unknowns are ordered lexicographically with ``x`` fastest, so the 2-D
operators are Kronecker sums ``I (x) V + V (x) I``. Examples 1, 2 and 4 are
normalized by ``h**2`` (matrices and right-hand side together); Example 3 is
used as is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import core
from .core import ComplexVec, SparseSym, apply_complex

__all__ = [
    "Example",
    "ProblemSpec",
    "AssembledProblem",
    "tridiag",
    "laplacian_k",
    "build_problem",
    "check_problem",
]


class Example(str, Enum):
    EX1 = "ex1"
    EX2 = "ex2"
    EX3 = "ex3"
    EX4 = "ex4"

    @classmethod
    def parse(cls, value) -> "Example":
        if isinstance(value, cls):
            return value
        s = str(value).strip().lower()
        if s in ("1", "2", "3", "4"):
            s = "ex" + s
        return cls(s)


_DEFAULTS = {
    Example.EX1: {},  # tau defaults to h, which depends on m
    Example.EX2: {"omega": math.pi, "mu": 8.0},
    Example.EX3: {},
    Example.EX4: {"sigma1": -10.0, "sigma2": 500.0},
}


@dataclass(frozen=True)
class ProblemSpec:
    example: Example
    m: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "example", Example.parse(self.example))
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        merged = dict(_DEFAULTS[self.example])
        if self.example is Example.EX1:
            merged["tau"] = self.h
        unknown = set(self.params) - set(merged)
        if unknown:
            raise ValueError(f"unknown parameters for {self.example.value}: {sorted(unknown)}")
        merged.update(self.params)
        if self.example is Example.EX1 and not merged["tau"] > 0:
            raise ValueError("Example 1 requires tau > 0")
        object.__setattr__(self, "params", merged)

    @property
    def h(self) -> float:
        return 1.0 / (self.m + 1)


@dataclass(frozen=True, eq=False)
class AssembledProblem:
    W: SparseSym
    T: SparseSym
    b: ComplexVec
    normalized: bool = False
    spec: ProblemSpec | None = None

    @property
    def n(self) -> int:
        return self.W.n

    def dense_complex(self) -> np.ndarray:
        return self.W.to_dense() + 1j * self.T.to_dense()

    def dense_realified(self) -> np.ndarray:
        W, T = self.W.to_dense(), self.T.to_dense()
        return np.block([[W, -T], [T, W]])

    def rhs_block(self) -> np.ndarray:
        return np.concatenate([self.b.re, self.b.im])


def tridiag(m: int, lower: float = -1.0, diag: float = 2.0, upper: float = -1.0) -> SparseSym:
    i = np.arange(m)
    rows = np.concatenate([i, i[1:], i[:-1]])
    cols = np.concatenate([i, i[:-1], i[1:]])
    vals = np.concatenate([np.full(m, diag), np.full(m - 1, lower), np.full(m - 1, upper)])
    return core.from_coo(m, rows, cols, vals, symmetric=lower == upper)


def _kron_sum(V: SparseSym) -> SparseSym:
    I = core.identity(V.n)
    return core.add(core.kron(I, V), core.kron(V, I))


def laplacian_k(m: int) -> SparseSym:
    """Five-point negative Laplacian ``I (x) V_m + V_m (x) I`` on the unit square,
    ``V_m = h^-2 tridiag(-1, 2, -1)``, ``h = 1/(m+1)``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    h = 1.0 / (m + 1)
    return _kron_sum(tridiag(m).scaled(h ** -2))


def _periodic_v(m: int) -> SparseSym:
    # V_c = V - e1 e_m^T - e_m e1^T
    V = tridiag(m)
    if m == 1:
        corner = core.from_coo(1, [0], [0], [2.0])
    else:
        corner = core.from_coo(m, [0, m - 1], [m - 1, 0], [1.0, 1.0])
    return core.add(V, corner, 1.0, -1.0)


def _ones_rhs(W: SparseSym, T: SparseSym) -> ComplexVec:
    # b = (1 + i) A 1
    Au = apply_complex(W, T, ComplexVec(np.ones(W.n), np.zeros(W.n)))
    return ComplexVec(Au.re - Au.im, Au.re + Au.im)


def build_problem(spec: ProblemSpec, check: bool = False) -> AssembledProblem:
    """Assemble ``W``, ``T`` and ``b`` for one of the four examples.

    With ``check=True`` the matrices are verified by :func:`check_problem`,
    which raises :class:`~bltsolve.factor.NotPositiveDefiniteError` when
    ``W`` is not positive definite (e.g. Example 4 with a very negative
    ``sigma1``).
    """
    ex, m, p = spec.example, spec.m, spec.params
    n = m * m
    h = spec.h
    I = core.identity(n)
    if ex is Example.EX1:
        K = laplacian_k(m)
        tau = p["tau"]
        W = core.add(K, I, 1.0, (3.0 - math.sqrt(3.0)) / tau)
        T = core.add(K, I, 1.0, (3.0 + math.sqrt(3.0)) / tau)
        j = np.arange(1, n + 1, dtype=float)
        s = j / (tau * (j + 1.0) ** 2)
        b = ComplexVec(s, -s)
        scale = h * h
    elif ex is Example.EX2:
        K = laplacian_k(m)
        omega, mu = p["omega"], p["mu"]
        W = core.add(I, K, -omega ** 2, 1.0)
        T = core.add(I, K, 10.0 * omega, mu)
        b = _ones_rhs(W, T)
        scale = h * h
    elif ex is Example.EX3:
        T = _kron_sum(tridiag(m))
        Vc = _periodic_v(m)
        if m == 1:
            E = core.from_coo(1, [0], [0], [2.0])
        else:
            E = core.from_coo(m, [0, m - 1], [m - 1, 0], [1.0, 1.0])
        W = core.add(_kron_sum(Vc), core.kron(E, core.identity(m)), 10.0, 9.0)
        b = _ones_rhs(W, T)
        scale = None
    else:
        K = laplacian_k(m)
        W = core.add(K, I, 1.0, p["sigma1"])
        T = I.scaled(p["sigma2"])
        b = _ones_rhs(W, T)
        scale = h * h
    if scale is not None:
        W, T = W.scaled(scale), T.scaled(scale)
        b = ComplexVec(b.re * scale, b.im * scale)
    prob = AssembledProblem(W, T, b, normalized=scale is not None, spec=spec)
    if check:
        check_problem(prob)
    return prob


def check_problem(prob: AssembledProblem) -> None:
    """Verify structure, ``W`` SPD and ``T`` SPSD by Cholesky attempts."""
    from .factor import cholesky, fill_reducing_order

    for S in (prob.W, prob.T):
        S.check()
    cholesky(prob.W, fill_reducing_order(prob.W))
    shift = 1e-12 * max(prob.T.max_abs(), 1.0)
    Ts = prob.T.shifted(shift)
    cholesky(Ts, fill_reducing_order(Ts))
