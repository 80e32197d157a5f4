"""Generalized induced norms ``||A||_{d,c} = max{||Ax||_c : ||x||_d = 1}``.

Both norms are reduced to lp form, ``||x||_d = lp_p(Md x)`` and
``||y||_c = lp_q(Mc y)``, so that ``||A||_{d,c} = ||B||_{p->q}`` with
``B = Mc A Md^-1``. Exact formulas cover ``p = 1`` (largest column),
``p = q = 2`` (largest singular value), real data with ``p = inf`` (sign
enumeration) and monomial ``B`` (Hoelder). Everything else gets a lower
bound from multistart ascent and an upper bound from norm-equivalence
sandwiches around exactly computable operator norms, tightened by a phase
branch-and-bound when ``p = inf`` or ``q = 1``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceFailure, DimensionMismatch, IndexOutOfRange
from .norms import Lp, dual_norm_eval, flatten, norm_eval
from .numerics import as_matrix, as_vector, gaussian_matrix, invert, is_real, rng, top_singular_pair
from .torus import RTOL as TORUS_RTOL, torus_max

EXACT_COLUMN = "ExactColumn"
EXACT_SPECTRAL = "ExactSpectral"
EXACT_SIGN_ENUM = "ExactSignEnum"
EXACT_MONOMIAL = "ExactMonomial"
ASCENT_SANDWICH = "Ascent+Sandwich"

N_RANDOM_STARTS = 8
PHASES_PER_COORD = 16
PHASE_GRID_MAX_N = 4
PHASE_GRID_STARTS = 4
SIGN_ENUM_MAX_N = 20
ASCENT_MAXITER = 500
ASCENT_TOL = 1e-10
UPPER_SLACK = 1e-13
RANK_ONE_RTOL = 1e-6

_SIGNS = np.array([1.0, -1.0], dtype=np.complex128)


@dataclass(frozen=True)
class GindResult:
    lower: float
    upper: float
    witness: np.ndarray
    method: str

    @property
    def gap(self):
        return self.upper - self.lower

    @property
    def exact(self):
        return self.method != ASCENT_SANDWICH


def _inv_exp(p):
    return 0.0 if math.isinf(p) else 1.0 / p


def _lp_ratio_const(a, b, n):
    """``max ||x||_a / ||x||_b`` over C^n for lp norms."""
    return float(n) ** max(0.0, _inv_exp(a) - _inv_exp(b))


def _col_bound(B, s):
    """``||B||_{1->s}``: largest column in lp_s."""
    return float(kernels.lp_norm_rows(np.ascontiguousarray(B.T), s).max())


def _row_bound(B, t):
    """``||B||_{t->inf}``: largest row in the dual exponent of ``t``."""
    return float(kernels.lp_norm_rows(np.ascontiguousarray(B), kernels.dual_exponent(t)).max())


def _interp_bounds(B, a, b):
    # Riesz-Thorin between exactly computable corners of the (1/p, 1/q) square:
    # the edge 1/p = 1 (columns), the edge 1/q = 0 (rows), and (1/2, 1/2).
    out = []
    for s_inv in np.linspace(b, 1.0, 33):
        if s_inv <= 0.0:
            continue
        theta = 1.0 - b / s_inv
        if not 0.0 < theta < 1.0:
            continue
        t_inv = (a - (1.0 - theta)) / theta
        if -1e-12 <= t_inv <= 1.0 + 1e-12:
            t_inv = min(max(t_inv, 0.0), 1.0)
            t = math.inf if t_inv == 0.0 else 1.0 / t_inv
            out.append(_col_bound(B, 1.0 / s_inv) ** (1 - theta) * _row_bound(B, t) ** theta)
    return out


def _spectral_interp(B, a, b, sigma):
    out = []
    if a > 0.5:
        theta = 2 * a - 1
        s_inv = (b - (1 - theta) / 2) / theta
        if -1e-12 <= s_inv <= 1 + 1e-12:
            s_inv = min(max(s_inv, 0.0), 1.0)
            s = math.inf if s_inv == 0.0 else 1.0 / s_inv
            out.append(sigma ** (1 - theta) * _col_bound(B, s) ** theta)
    if b < 0.5:
        theta = 1 - 2 * b
        t_inv = (a - (1 - theta) / 2) / theta
        if -1e-12 <= t_inv <= 1 + 1e-12:
            t_inv = min(max(t_inv, 0.0), 1.0)
            t = math.inf if t_inv == 0.0 else 1.0 / t_inv
            out.append(sigma ** (1 - theta) * _row_bound(B, t) ** theta)
    return out


def sandwich_upper(B, p, q, real=False, extra=(), _split=True):
    """Upper bound on ``||B||_{p->q}`` over C^n (hence also over R^n).

    Each candidate routes through an exactly computable pair ``(p', q')``
    via ``||Bx||_q <= R(q,q') ||B||_{p'->q'} R(p',p) ||x||_p``; the l2 pivot
    uses ``sigma_max(B)``. Numerically rank-one ``B = b v^H + E`` also gets
    the bound ``||b||_q ||v||_{p*} + ||E||_{p->q}``, which is tight as
    ``E -> 0``. ``extra`` holds further certified candidates.
    """
    n = B.shape[0]
    cands = [
        _col_bound(B, q) * _lp_ratio_const(1.0, p, n),
        _lp_ratio_const(q, math.inf, n) * _row_bound(B, p),
    ]
    cands += _interp_bounds(B, _inv_exp(p), _inv_exp(q))
    try:
        sigma, v = top_singular_pair(B)
    except ConvergenceFailure:
        sigma = None
    if sigma is not None:
        cands.append(_lp_ratio_const(q, 2.0, n) * sigma * _lp_ratio_const(2.0, p, n))
        cands += _spectral_interp(B, _inv_exp(p), _inv_exp(q), sigma)
        b = B @ v
        E = np.ascontiguousarray(B - np.outer(b, v.conj()))
        if _split and np.linalg.norm(E) <= RANK_ONE_RTOL * np.linalg.norm(B):
            head = kernels.lp_norm(b, q) * kernels.lp_norm(v, kernels.dual_exponent(p))
            cands.append(head + sandwich_upper(E, p, q, real, _split=False))
    if real and q == 1.0 and n <= SIGN_ENUM_MAX_N:
        # over R^n, ||B||_{p->1} = max over signs s of ||B^T s||_{p*}
        cands.append(float(kernels.phase_enum_values(
            np.ascontiguousarray(B.T), kernels.dual_exponent(p), _SIGNS).max()))
    cands += list(extra)
    return min(cands) * (1.0 + UPPER_SLACK)


def _monomial(B):
    """``(cols, mags)`` if each row and column of ``B`` has one nonzero."""
    nz = B != 0
    if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
        return None
    return np.abs(B).sum(axis=0)


def _monomial_norm(a, p, q):
    """``||P diag(a)||_{p->q}`` and a maximizer, by Hoelder."""
    if q >= p:
        u = np.zeros(a.size, dtype=np.complex128)
        u[int(np.argmax(a))] = 1.0
        return float(a.max()), u
    # 1/s = 1/q - 1/p, attained at |u_i| proportional to a_i^(q/(p-q))
    s = 1.0 / (1.0 / q - _inv_exp(p))
    e = 0.0 if math.isinf(p) else q / (p - q)
    return kernels.lp_norm(a.astype(np.complex128), s), (a ** e).astype(np.complex128)


def _phase_grid(M, r, phases):
    """The ``PHASE_GRID_STARTS`` best grid vectors for ``||M u||_r``."""
    vals = kernels.phase_enum_values(M, r, phases)
    best = np.argsort(-vals, kind="stable")[:PHASE_GRID_STARTS]
    return np.array([_code_to_vector(int(c), M.shape[1], phases) for c in best])


def _phase_table(m):
    if m == 2:
        return _SIGNS.copy()
    return np.exp(2j * np.pi * np.arange(m) / m)


def _code_to_vector(code, n, phases):
    m = phases.size
    u = np.ones(n, dtype=np.complex128)
    for j in range(n - 1, 0, -1):
        u[j] = phases[code % m]
        code //= m
    return u


def _starts(B, p, q, n, seed, real):
    starts = [np.eye(n, dtype=np.complex128)]
    try:
        _, v = top_singular_pair(B)
        if real:
            k = int(np.argmax(np.abs(v)))
            v = (v * np.conj(v[k]) / abs(v[k])).real.astype(np.complex128)
        if np.any(v):
            starts.append(v[None, :])
    except ConvergenceFailure:
        pass
    g = rng(seed)
    rand = g.standard_normal((N_RANDOM_STARTS, n))
    starts.append(rand.astype(np.complex128) if real
                  else rand + 1j * g.standard_normal((N_RANDOM_STARTS, n)))
    if n <= PHASE_GRID_MAX_N:
        phases = _phase_table(2 if real else PHASES_PER_COORD)
        if math.isinf(p):
            starts.append(_phase_grid(B, q, phases))
        if q == 1.0 and not real:
            pstar = kernels.dual_exponent(p)
            for s in _phase_grid(np.ascontiguousarray(B.T), pstar, phases):
                u = kernels.dual_vec(np.ascontiguousarray(B.T @ s), pstar)
                if np.any(u):
                    starts.append(u[None, :])
    if math.isinf(q):
        i = int(np.argmax(kernels.lp_norm_rows(B, kernels.dual_exponent(p))))
        u = kernels.dual_vec(np.ascontiguousarray(B[i]), kernels.dual_exponent(p))
        if np.any(u):
            starts.append(u[None, :])
    if real and q == 1.0 and n <= SIGN_ENUM_MAX_N:
        Bt = np.ascontiguousarray(B.T)
        pstar = kernels.dual_exponent(p)
        code = int(np.argmax(kernels.phase_enum_values(Bt, pstar, _SIGNS)))
        s = _code_to_vector(code, n, _SIGNS)
        u = kernels.dual_vec(np.ascontiguousarray(Bt @ s), pstar)
        if np.any(u):
            starts.append(u[None, :])
    return np.ascontiguousarray(np.vstack(starts))


def _torus_refine(B, p, q, best, u):
    """Branch-and-bound over phases when ``p = inf`` (``||B u||_q``) or
    ``q = 1`` (``||B^T s||_{p*}``); returns the improved incumbent and the
    certified upper bounds found."""
    pstar = kernels.dual_exponent(p)
    forms = []
    if math.isinf(p):
        forms.append((B, q, False))
    if q == 1.0:
        forms.append((np.ascontiguousarray(B.T), pstar, True))
    extra = []
    for M, r, dual in forms:
        if extra and min(extra) <= best * (1 + TORUS_RTOL):
            break
        res = torus_max(M, r, best)
        if res is None:
            continue
        _, upper, s = res
        extra.append(upper)
        if s is None:
            continue
        x0 = kernels.dual_vec(np.ascontiguousarray(B.T @ s), pstar) if dual else s
        vals, X, _ = kernels.multistart_ascent(B, p, q, x0[None, :], ASCENT_MAXITER, ASCENT_TOL)
        if vals[0] > best:
            best, u = float(vals[0]), X[0]
    return best, u, extra


def _reduce(A, d, c):
    n = A.shape[0]
    Md, p = flatten(d, n)
    Mc, q = flatten(c, n)
    Md_inv = np.eye(n, dtype=np.complex128) if isinstance(d, Lp) else invert(Md)
    B = A if isinstance(c, Lp) else Mc @ A
    if not isinstance(d, Lp):
        B = B @ Md_inv
    return np.ascontiguousarray(B), p, q, Md, Mc, Md_inv


def gind(A, d, c, seed=0, *, real=False, force_generic=False):
    """Certified bounds on ``||A||_{d,c} = max{||Ax||_c : ||x||_d = 1}``.

    ``real=True`` restricts the maximization to real ``x`` (data must be
    real); ``force_generic=True`` skips the exact formulas.
    """
    A = as_matrix(A)
    n = A.shape[0]
    B, p, q, Md, Mc, Md_inv = _reduce(A, d, c)
    if real and not is_real(B, Md):
        raise ValueError("real restriction needs real matrix and norm data")
    real_data = is_real(B)

    method = None
    if not force_generic:
        if p == 1.0:
            cols = kernels.lp_norm_rows(np.ascontiguousarray(B.T), q)
            u = np.zeros(n, dtype=np.complex128)
            u[int(np.argmax(cols))] = 1.0
            value, method = float(cols.max()), EXACT_COLUMN
        elif p == 2.0 and q == 2.0:
            try:
                value, u = top_singular_pair(B)
                method = EXACT_SPECTRAL
            except ConvergenceFailure:
                pass
        elif math.isinf(p) and real_data and (real or math.isinf(q)) and n <= SIGN_ENUM_MAX_N:
            vals = kernels.phase_enum_values(B, q, _SIGNS)
            u = _code_to_vector(int(np.argmax(vals)), n, _SIGNS)
            value, method = float(vals.max()), EXACT_SIGN_ENUM
        if method is None:
            mags = _monomial(B)
            if mags is not None:
                value, u = _monomial_norm(mags, p, q)
                method = EXACT_MONOMIAL

    if method is None:
        X0 = _starts(B, p, q, n, seed, real)
        values, X, _ = kernels.multistart_ascent(B, p, q, X0, ASCENT_MAXITER, ASCENT_TOL)
        k = int(np.argmax(values))
        best, u = float(values[k]), X[k]
        extra = []
        if not real:
            best, u, extra = _torus_refine(B, p, q, best, u)
        value = sandwich_upper(B, p, q, real=real, extra=extra)
        method = ASCENT_SANDWICH

    x = Md_inv @ u
    x = x / kernels.lp_norm(np.ascontiguousarray(Md @ x), p)
    lower = kernels.lp_norm(np.ascontiguousarray(Mc @ (A @ x)), q) / kernels.lp_norm(
        np.ascontiguousarray(Md @ x), p)
    upper = max(value, lower)
    return GindResult(lower=float(lower), upper=float(upper), witness=x, method=method)


def ratio(i, j, seed=0, n=None):
    """``R_{i,j} = max ||x||_i / ||x||_j``, computed as the g-ind norm of
    the identity from ``j`` into ``i``."""
    dim = n or i.dim or j.dim
    if dim is None:
        raise DimensionMismatch("dimension is not implied by the specs; pass n")
    return gind(np.eye(dim), j, i, seed)


def column_operator(x, j):
    """``C_{x,j}``: ``x`` in column ``j`` (0-based), zeros elsewhere."""
    x = as_vector(x)
    if not 0 <= j < x.size:
        raise IndexOutOfRange(f"column index {j} outside 0..{x.size - 1}")
    C = np.zeros((x.size, x.size), dtype=np.complex128)
    C[:, j] = x
    return C


def column_sum_operator(x):
    """``C_x``: every column equals ``x``."""
    x = as_vector(x)
    return np.repeat(x[:, None], x.size, axis=1)


def predicted_column_norms(x, j, d, c):
    """Closed-form ``(||C_{x,j}||_{d,c}, ||C_x||_{d,c})``.

    Both operators are rank one, so their norms are ``||x||_c`` times the
    dual norm of ``e_j`` resp. of the all-ones vector.
    """
    x = as_vector(x)
    n = x.size
    if not 0 <= j < n:
        raise IndexOutOfRange(f"column index {j} outside 0..{n - 1}")
    xc = norm_eval(c, x)
    e = np.zeros(n)
    e[j] = 1.0
    return dual_norm_eval(d, e) * xc, dual_norm_eval(d, np.ones(n)) * xc


@dataclass(frozen=True)
class ClassicalNorms:
    C: float
    R: float
    S: float
    sigma: float
    m: float


def _classical_value(tag, A):
    a = np.abs(A)
    if tag == "C":
        return float(a.sum(axis=0).max())
    if tag == "R":
        return float(a.sum(axis=1).max())
    if tag == "S":
        return top_singular_pair(A)[0]
    if tag == "sigma":
        return float(a.sum())
    return float(a.max())


CLASSICAL_TAGS = ("C", "R", "S", "sigma", "m")


def classical_norms(A):
    """Column-sum, row-sum, spectral, entrywise-l1 and max-entry norms."""
    A = as_matrix(A)
    return ClassicalNorms(**{t: _classical_value(t, A) for t in CLASSICAL_TAGS})


def matrix_norm_bounds(norm_id, A, seed=0):
    """``(lower, upper)`` for a classical tag or a ``(d, c)`` g-ind pair."""
    if isinstance(norm_id, str):
        if norm_id not in CLASSICAL_TAGS:
            raise ValueError(f"unknown matrix norm {norm_id!r}; expected one of {CLASSICAL_TAGS}")
        v = _classical_value(norm_id, as_matrix(A))
        return v, v
    d, c = norm_id
    r = gind(A, d, c, seed)
    return r.lower, r.upper


@dataclass(frozen=True)
class DefectEstimate:
    value: float
    witness_pair: tuple


def defect_ratio(norm_id, A, B, seed=0):
    """Conservative ``||AB|| / (||A|| ||B||)``: lower bound over upper bounds."""
    lo, _ = matrix_norm_bounds(norm_id, A @ B, seed)
    _, ua = matrix_norm_bounds(norm_id, A, seed)
    _, ub = matrix_norm_bounds(norm_id, B, seed)
    if ua == 0 or ub == 0:
        return 0.0
    return lo / (ua * ub)


def submult_defect(norm_id, n, trials, seed=0, climb_steps=60):
    """Sampled lower bound on ``max ||AB|| / (||A|| ||B||)``.

    Candidates: ``(I, I)``, the all-ones pair ``(J, J)``, then ``trials``
    seeded pairs alternating Gaussian and rank-one products, followed by
    hill-climbing perturbations of the best pair.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    I = np.eye(n, dtype=np.complex128)
    J = np.ones((n, n), dtype=np.complex128)
    best_val, best = defect_ratio(norm_id, I, I, seed), (I, I)
    v = defect_ratio(norm_id, J, J, seed)
    if v > best_val:
        best_val, best = v, (J, J)
    for t in range(trials):
        g = rng(seed, 1, t)
        if t % 2 == 0:
            A, B = gaussian_matrix(g, n), gaussian_matrix(g, n)
        else:
            u, w, y, z = (gaussian_matrix(g, n, 1)[:, 0] for _ in range(4))
            A, B = np.outer(u, w), np.outer(y, z)
        v = defect_ratio(norm_id, A, B, seed)
        if v > best_val:
            best_val, best = v, (A, B)
    step = 0.1
    for k in range(climb_steps):
        g = rng(seed, 2, k)
        A, B = best
        scale = max(np.abs(A).max(), np.abs(B).max())
        A2 = A + step * scale * gaussian_matrix(g, n)
        B2 = B + step * scale * gaussian_matrix(g, n)
        v = defect_ratio(norm_id, A2, B2, seed)
        if v > best_val:
            best_val, best = v, (A2, B2)
        else:
            step *= 0.8
    return DefectEstimate(value=float(best_val), witness_pair=best)
