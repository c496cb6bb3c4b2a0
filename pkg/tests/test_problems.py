import math

import numpy as np
import pytest

from bltsolve.factor import NotPositiveDefiniteError
from bltsolve.problems import Example, ProblemSpec, build_problem, check_problem, laplacian_k, tridiag
from bltsolve.spectral import sym_eigenvalues


def test_laplacian_single_point():
    assert np.array_equal(laplacian_k(1).to_dense(), [[16.0]])


def test_laplacian_two_by_two_grid():
    K = laplacian_k(2).to_dense()
    np.testing.assert_allclose(np.diag(K), 36.0, rtol=1e-15)
    expected = -9.0 * np.array([[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]])
    np.testing.assert_allclose(K - np.diag(np.diag(K)), expected, rtol=1e-15)


@pytest.mark.parametrize("m", [3, 5])
def test_laplacian_closed_form_spectrum(m):
    h = 1 / (m + 1)
    lam = 2 - 2 * np.cos(np.arange(1, m + 1) * np.pi / (m + 1))
    expected = np.sort((lam[:, None] + lam[None, :]).ravel())
    got = np.sort(np.linalg.eigvalsh(h * h * laplacian_k(m).to_dense()))
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_grid_order_is_x_fastest():
    # neighbours in x are adjacent indices, neighbours in y are m apart
    K = laplacian_k(4).to_dense()
    assert K[0, 1] < 0 and K[0, 4] < 0 and K[3, 4] == 0


def test_defaults():
    assert ProblemSpec("ex1", 7).params["tau"] == pytest.approx(1 / 8)
    assert ProblemSpec("ex2", 7).params == {"omega": math.pi, "mu": 8.0}
    assert ProblemSpec("ex4", 7).params == {"sigma1": -10.0, "sigma2": 500.0}
    assert ProblemSpec("EX3", 2).example is Example.EX3


@pytest.mark.parametrize(
    "args",
    [("ex1", 0), ("ex1", 3, {"tau": 0.0}), ("ex2", 3, {"tau": 1.0}), ("ex5", 3)],
)
def test_invalid_specs(args):
    with pytest.raises(ValueError):
        ProblemSpec(*args)


def test_ex1_small_by_hand():
    p = build_problem(ProblemSpec("ex1", 3))
    assert p.normalized and p.n == 9
    np.testing.assert_allclose(p.W.diagonal(), 4 + (3 - math.sqrt(3)) / 4, rtol=1e-15)
    np.testing.assert_allclose(p.T.diagonal(), 4 + (3 + math.sqrt(3)) / 4, rtol=1e-15)
    assert p.b.to_numpy()[0] == pytest.approx((1 - 1j) / 16, rel=1e-15)
    # b_j = h^2 (1 - i) j / (tau (j+1)^2), 1-based j
    j = np.arange(1, 10)
    np.testing.assert_allclose(p.b.re, (1 / 16) * j / (0.25 * (j + 1) ** 2), rtol=1e-14)


def test_ex2_small_by_hand():
    p = build_problem(ProblemSpec("ex2", 3))
    np.testing.assert_allclose(p.W.diagonal(), 4 - math.pi ** 2 / 16, rtol=1e-14)
    np.testing.assert_allclose(p.T.diagonal(), (10 * math.pi + 8 * 4 * 16) / 16, rtol=1e-14)


def test_ex3_small_by_hand():
    p = build_problem(ProblemSpec("ex3", 3))
    assert not p.normalized
    assert np.all(p.T.diagonal() == 4.0) and np.all(p.W.diagonal() == 40.0)
    W = p.W.to_dense()
    # periodic wrap in x: V_c[0, 2] = -1, scaled by 10
    assert W[0, 2] == -10.0 and W[0, 1] == -10.0
    # coupling of first and last grid line: 10 * (-1) + 9
    assert W[0, 6] == -1.0


def test_ex4_small_by_hand():
    p = build_problem(ProblemSpec("ex4", 3))
    np.testing.assert_allclose(p.W.diagonal(), 3.375, rtol=1e-15)
    assert np.allclose(p.T.to_dense(), 31.25 * np.eye(9), rtol=0, atol=1e-13)


@pytest.mark.parametrize("example", ["ex2", "ex3", "ex4"])
def test_rhs_makes_solution_all_one_plus_i(example):
    p = build_problem(ProblemSpec(example, 6))
    u = np.linalg.solve(p.dense_complex(), p.b.to_numpy())
    assert np.linalg.norm(u - (1 + 1j)) <= 1e-8 * np.linalg.norm(np.full(p.n, 1 + 1j))


@pytest.mark.parametrize("example", ["ex1", "ex2", "ex3", "ex4"])
@pytest.mark.parametrize("m", [3, 8, 16])
def test_self_check_passes(example, m):
    p = build_problem(ProblemSpec(example, m), check=True)
    p.W.check()
    p.T.check()
    if example != "ex3":
        assert np.diff(p.W.row_ptr).max() <= 5 and np.diff(p.T.row_ptr).max() <= 5


@pytest.mark.parametrize("example", ["ex1", "ex2"])
def test_ex1_ex2_both_blocks_spd(example):
    p = build_problem(ProblemSpec(example, 5))
    assert sym_eigenvalues(p.W.to_dense())[0] > 0
    assert sym_eigenvalues(p.T.to_dense())[0] > 0


def test_ex4_too_negative_shift_is_reported():
    with pytest.raises(NotPositiveDefiniteError):
        build_problem(ProblemSpec("ex4", 8, {"sigma1": -1e4}), check=True)


def test_check_problem_on_tridiag_pieces():
    p = build_problem(ProblemSpec("ex1", 4))
    check_problem(p)
    assert tridiag(4).to_dense()[0, 1] == -1.0
