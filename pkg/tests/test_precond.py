import numpy as np
import pytest

from bltsolve.core import BlockVec, ComplexVec, from_coo, from_dense, identity
from bltsolve.precond import (
    Kind,
    blt_apply,
    dense_preconditioner,
    gsor_apply,
    gsor_iterate,
    iteration_matrix,
    mhss_apply,
    mhss_iterate,
    prepare,
)
from bltsolve.problems import AssembledProblem, ProblemSpec, build_problem
from bltsolve.spectral import nonsym_eigenvalues

from conftest import sparse_spd


def scalar(v):
    return from_dense(np.array([[float(v)]]))


def raw_problem(W, T, b):
    return AssembledProblem(W, T, b, normalized=False, spec=None)


def test_blt_scalar_by_hand():
    P = prepare("blt", scalar(2), scalar(1), alpha=1.4)
    z = blt_apply(P, BlockVec(np.array([2.0]), np.array([2.0])))
    assert z.x[0] == pytest.approx(1.0, rel=1e-15) and z.y[0] == pytest.approx(0.3, rel=1e-14)


def test_gsor_scalar_by_hand():
    P = prepare("gsor", scalar(2), scalar(3), alpha=0.5)
    z = gsor_apply(P, BlockVec(np.array([4.0]), np.array([7.0])))
    assert (z.x[0], z.y[0]) == pytest.approx((2.0, 2.0), rel=1e-15)


def test_mhss_keeps_real_vectors_real(rng):
    W, T = sparse_spd(rng, 15), sparse_spd(rng, 15)
    P = prepare("mhss", W, T, alpha=2.0)
    z = mhss_apply(P, ComplexVec(rng.standard_normal(15), np.zeros(15)))
    assert np.all(z.im == 0.0)


@pytest.mark.parametrize("kind", ["blt", "gsor", "mhss"])
def test_apply_inverts_dense_preconditioner(kind, rng):
    n = 25
    W, T = sparse_spd(rng, n), sparse_spd(rng, n, density=0.1)
    alpha = 0.7
    P = prepare(kind, W, T, alpha)
    M = dense_preconditioner(kind, W, T, alpha)
    if kind == "mhss":
        r = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        r = rng.standard_normal(2 * n)
    z = P(r)
    assert np.linalg.norm(M @ z - r) <= 1e-11 * np.linalg.norm(r)


def test_blt_equals_gsor_when_t_is_identity(rng):
    W = sparse_spd(rng, 20)
    I = identity(20)
    r = BlockVec(rng.standard_normal(20), rng.standard_normal(20))
    a = blt_apply(prepare("blt", W, I, 1.3), r)
    b = gsor_apply(prepare("gsor", W, I, 1.3), r)
    np.testing.assert_allclose(a.flat(), b.flat(), rtol=1e-14, atol=0)


def test_none_is_identity(rng):
    P = prepare("none", identity(3), identity(3))
    r = rng.standard_normal(6)
    assert np.array_equal(P(r), r) and P(r) is not r


def test_prepare_validation():
    with pytest.raises(ValueError):
        prepare("blt", identity(3), identity(3), alpha=0.0)
    with pytest.raises(ValueError):
        prepare("blt", identity(3), identity(4))
    with pytest.raises(ValueError):
        prepare("ilu", identity(3), identity(3))
    P = prepare("gsor", identity(2), identity(2))
    with pytest.raises(ValueError):
        blt_apply(P, BlockVec(np.ones(2), np.ones(2)))


def test_factor_time_recorded():
    P = prepare("mhss", identity(4), identity(4), 1.0)
    assert P.factor_seconds >= 0.0 and len(P.factors) == 2 and P.is_complex


# -- stationary iterations --------------------------------------------------


def test_gsor_scalar_one_step():
    prob = raw_problem(scalar(1), from_coo(1, [], [], []), ComplexVec(np.array([1.0]), np.array([0.0])))
    u, rep = gsor_iterate(prob, 1.0)
    assert rep.converged and rep.iterations == 1
    assert (u.x[0], u.y[0]) == (1.0, 0.0)


def test_gsor_ex1_converges_with_contracting_iteration_matrix():
    prob = build_problem(ProblemSpec("ex1", 8))
    u, rep = gsor_iterate(prob, 0.5, tol=1e-10)
    assert rep.converged and rep.final_relres <= 1e-10
    assert len(rep.history) == rep.iterations
    rho = np.abs(nonsym_eigenvalues(iteration_matrix("gsor", prob.W, prob.T, 0.5))).max()
    assert rho < 1
    # the fixed point solves the block system
    A = prob.dense_realified()
    x = u.flat()
    assert np.linalg.norm(A @ x - prob.rhs_block()) <= 1e-10 * np.linalg.norm(prob.rhs_block())


def test_mhss_scalar_halves_error_each_step():
    one = scalar(1)
    prob = raw_problem(one, one, ComplexVec(np.array([1.0]), np.array([0.0])))
    exact = 1 / (1 + 1j)
    errs = []
    for k in range(1, 8):
        u, _ = mhss_iterate(prob, 1.0, tol=1e-300, maxit=k)
        errs.append(abs(u.to_numpy()[0] - exact))
    ratios = np.array(errs[1:]) / np.array(errs[:-1])
    np.testing.assert_allclose(ratios, 0.5, rtol=1e-12)
    assert iteration_matrix("mhss", np.eye(1), np.eye(1), 1.0)[0, 0] == pytest.approx(0.5, abs=1e-15)


def test_mhss_with_zero_t_fixed_point_solves_real_system(rng):
    W = sparse_spd(rng, 10)
    b = ComplexVec(rng.standard_normal(10), rng.standard_normal(10))
    prob = raw_problem(W, from_coo(10, [], [], []), b)
    u, rep = mhss_iterate(prob, 1.0, tol=1e-12, maxit=2000)
    assert rep.converged
    Wd = W.to_dense()
    np.testing.assert_allclose(Wd @ u.to_numpy(), b.to_numpy(), atol=1e-10)


@pytest.mark.parametrize("alpha", [1.0, 10.0])
def test_mhss_ex1_history_stays_bounded(alpha):
    prob = build_problem(ProblemSpec("ex1", 8))
    _, rep = mhss_iterate(prob, alpha, tol=1e-10, maxit=400)
    h = np.array(rep.history)
    assert np.all(np.isfinite(h)) and np.all(h >= 0)
    assert h.max() <= 1.0
    assert rep.converged


def test_stationary_validation():
    prob = build_problem(ProblemSpec("ex1", 2))
    with pytest.raises(ValueError):
        gsor_iterate(prob, -1.0)
    with pytest.raises(ValueError):
        mhss_iterate(prob, 0.0)
    with pytest.raises(ValueError):
        iteration_matrix(Kind.BLT, np.eye(2), np.eye(2), 1.0)
