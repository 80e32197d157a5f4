import numpy as np
import pytest

from gind import kernels
from gind.norms import flatten


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    # numba compiles lazily; pay for it once instead of inside the first test
    kernels.warmup()


def _row_norms(spec, X):
    M, p = flatten(spec, X.shape[1])
    return kernels.lp_norm_rows(np.ascontiguousarray(X @ M.T), p)


def _sweep(A, d, c, X):
    X = np.ascontiguousarray(X, dtype=np.complex128)
    return float((_row_norms(c, X @ np.asarray(A, dtype=np.complex128).T) / _row_norms(d, X)).max())


def grid_oracle_real(A, d, c, points=10_000):
    """max ||Ax||_c / ||x||_d over x = (cos t, sin t), t in [0, pi)."""
    t = np.linspace(0.0, np.pi, points, endpoint=False)
    return _sweep(A, d, c, np.stack([np.cos(t), np.sin(t)], axis=1))


def grid_oracle_complex(A, d, c, points=400):
    """Same over C^2: x = (cos t, sin t e^{i phi}) reaches every direction up to a phase."""
    t, phi = np.meshgrid(np.linspace(0.0, np.pi / 2, points),
                         np.linspace(0.0, 2 * np.pi, 2 * points, endpoint=False))
    t, phi = t.ravel(), phi.ravel()
    return _sweep(A, d, c, np.stack([np.cos(t), np.sin(t) * np.exp(1j * phi)], axis=1))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
