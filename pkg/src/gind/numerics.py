"""Small dense complex linear algebra: validation, inversion, sigma_max, unitaries."""

import numpy as np

from . import kernels
from .errors import ConvergenceFailure, DimensionMismatch, SingularMatrix

MAX_DIM = 64
PIVOT_RTOL = 1e-14
POWER_MAXITER = 100_000
POWER_TOL = 1e-11
RESTARTS = 10
SQUARINGS = 60


def as_matrix(A, square=True):
    """Coerce ``A`` to a finite complex128 2-D array."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2 or 0 in M.shape:
        raise DimensionMismatch(f"expected a nonempty 2-D matrix, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise ValueError("matrix has non-finite entries")
    return M


def as_vector(x):
    v = np.array(x, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch(f"expected a nonempty 1-D vector, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("vector has non-finite entries")
    return v


def is_real(*arrays):
    return all(not np.iscomplexobj(a) or not np.any(np.imag(a)) for a in arrays)


def rng(seed, *key):
    """Independent generator for ``seed`` and an optional integer stream key."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(key)))


def gaussian_matrix(gen, n, m=None, complex_=True):
    shape = (n, n if m is None else m)
    if complex_:
        return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / np.sqrt(2)
    return gen.standard_normal(shape).astype(np.complex128)


def invert(M):
    """Inverse by Gauss-Jordan elimination with partial pivoting.

    Raises :class:`SingularMatrix` when a pivot falls below ``1e-14`` times the
    largest entry modulus of ``M``.
    """
    A = as_matrix(M)
    n = A.shape[0]
    thresh = PIVOT_RTOL * np.abs(A).max()
    work = np.hstack([A, np.eye(n, dtype=np.complex128)])
    for k in range(n):
        r = k + int(np.argmax(np.abs(work[k:, k])))
        if abs(work[r, k]) < thresh or work[r, k] == 0:
            raise SingularMatrix(k)
        if r != k:
            work[[k, r]] = work[[r, k]]
        work[k] /= work[k, k]
        col = work[:, k].copy()
        col[k] = 0.0
        work -= np.outer(col, work[k])
    return work[:, n:]


def cond_estimate(M):
    """1-norm condition number; ``inf`` for singular input."""
    A = as_matrix(M)
    try:
        Ainv = invert(A)
    except SingularMatrix:
        return np.inf
    return np.abs(A).sum(axis=0).max() * np.abs(Ainv).sum(axis=0).max()


def _gram_power(A):
    """``(A^H A)^(2^k)``, rescaled to unit max entry after every squaring;
    stops once the rescaled power no longer moves."""
    P = A.conj().T @ A
    top = np.abs(P).max()
    if top == 0.0:
        return P
    P = P / top
    for _ in range(SQUARINGS):
        Q = P @ P
        Q = Q / np.abs(Q).max()
        if np.abs(Q - P).max() <= 1e-15:
            return Q
        P = Q
    return P


def top_singular_pair(A, seed=0):
    """Return ``(sigma_max, v)`` with ``v`` a unit top right singular vector.

    Power iteration on ``A^H A`` from the normalized all-ones vector. The
    first ``2^k`` steps are taken at once by repeated squaring, so nearly
    equal top singular values do not stall it; the plain iteration then
    certifies the residual.
    """
    A = np.ascontiguousarray(as_matrix(A, square=False))
    n = A.shape[1]
    if max(A.shape) > MAX_DIM:
        raise DimensionMismatch(f"dimension above {MAX_DIM} is not supported")
    P = _gram_power(A)
    start = P @ (np.ones(n, dtype=np.complex128) / np.sqrt(n))
    if np.linalg.norm(start) <= 1e-8:
        start = np.ones(n, dtype=np.complex128)
    mu, v, _, rel, ok = kernels.power_gram(A, start, POWER_MAXITER, POWER_TOL)
    frob2 = float(np.vdot(A, A).real)
    if ok and frob2 - mu < mu:
        # the remaining eigenvalues of A^H A sum to frob2 - mu < mu
        return float(np.sqrt(mu)), v
    best = (mu, v, rel, ok)
    gen = rng(seed, 0x5EED)
    for _ in range(RESTARTS):
        v0 = P @ (gen.standard_normal(n) + 1j * gen.standard_normal(n))
        if not np.any(v0):
            v0 = gen.standard_normal(n) + 1j * gen.standard_normal(n)
        cand = kernels.power_gram(A, v0, POWER_MAXITER, POWER_TOL)
        # Rayleigh quotients never exceed lambda_max, so the largest one wins
        if cand[0] > best[0] * (1 + 1e-13):
            best = (cand[0], cand[1], cand[3], cand[4])
    mu, v, rel, ok = best
    if not ok and rel > 1e-10:
        raise ConvergenceFailure(float(np.sqrt(mu)))
    return float(np.sqrt(mu)), v


def max_singular_value(A, seed=0):
    """Largest singular value of a square matrix (n <= 64)."""
    return top_singular_pair(as_matrix(A), seed)[0]


def random_unitary(n, seed):
    """Haar-distributed unitary from QR of a seeded complex Gaussian matrix."""
    if n < 1:
        raise DimensionMismatch("n must be positive")
    Z = gaussian_matrix(rng(seed), n)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))[None, :]
