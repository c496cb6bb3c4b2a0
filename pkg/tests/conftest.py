import numpy as np
import pytest

from bltsolve.core import from_dense


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_spd(rng, n, lo=0.5, hi=3.0):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = Q @ np.diag(rng.uniform(lo, hi, n)) @ Q.T
    return (A + A.T) / 2


def sparse_spd(rng, n, density=0.2, shift=1.0):
    """Random symmetric sparse matrix made SPD by diagonal dominance."""
    A = rng.standard_normal((n, n)) * (rng.random((n, n)) < density)
    A = np.triu(A, 1)
    A = A + A.T
    A += np.diag(np.abs(A).sum(axis=1) + shift)
    return from_dense(A, symmetric=True)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
