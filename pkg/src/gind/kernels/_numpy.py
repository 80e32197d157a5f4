"""Vectorized numpy implementations of the kernels in ``_numba.py``."""

import math

import numpy as np

INF = math.inf
_CHUNK = 1 << 16


def dual_exponent(p):
    if p == 1.0:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def lp_norm_rows(Y, p):
    A = np.abs(Y)
    s = A.max(axis=1) if A.shape[1] else np.zeros(A.shape[0])
    if p == INF:
        return s
    if p == 1.0:
        return A.sum(axis=1)
    safe = np.where(s > 0.0, s, 1.0)
    acc = ((A / safe[:, None]) ** p).sum(axis=1)
    return np.where(s > 0.0, s * acc ** (1.0 / p), 0.0)


def lp_norm(y, p):
    return float(lp_norm_rows(y[None, :], p)[0])


def _rescale(Y, s):
    safe = np.where(s > 0.0, s, 1.0)[:, None]
    out = np.empty(Y.shape, dtype=np.complex128)
    out.real = Y.real / safe
    out.imag = Y.imag / safe
    return out


def dual_vec_rows(Y, r):
    """Row-wise :func:`dual_vec`."""
    s = np.abs(Y).max(axis=1) if Y.shape[1] else np.zeros(Y.shape[0])
    # the map is scale invariant; rescaling keeps |y| accurate for subnormal input
    Y = _rescale(Y, s)
    A = np.abs(Y)
    s = A.max(axis=1) if A.shape[1] else np.zeros(A.shape[0])
    live = s > 0.0
    nz = A > 0.0
    phase = np.zeros_like(Y, dtype=np.complex128)
    # componentwise, as in the numba kernel: complex division overflows on subnormals
    a = A[nz]
    phase.real[nz] = Y[nz].real / a
    phase.imag[nz] = -Y[nz].imag / a
    if r == INF:
        top = (A >= (s * (1.0 - 1e-14))[:, None]) & live[:, None]
        return np.where(top, phase / np.maximum(top.sum(axis=1), 1)[:, None], 0.0)
    if r == 1.0:
        phase[~nz] = 1.0
        return np.where(live[:, None], phase, 0.0)
    safe = np.where(live, s, 1.0)
    scale = (lp_norm_rows(Y, r) / safe) ** (r - 1.0)
    scale = np.where(live, scale, 1.0)
    Z = np.zeros_like(phase)
    weight = (A / safe[:, None]) ** (r - 1.0) / scale[:, None]
    Z[nz] = phase[nz] * weight[nz]
    return Z


def dual_vec(y, r):
    return dual_vec_rows(y[None, :], r)[0]


def multistart_ascent(B, p, q, X0, maxiter, tol):
    # every start advances in lockstep; finished starts drop out
    k, n = X0.shape
    pstar = dual_exponent(p)
    X = X0 / lp_norm_rows(X0, p)[:, None]
    Y = X @ B.T
    f = lp_norm_rows(Y, q)
    iters = np.zeros(k, dtype=np.int64)
    active = np.ones(k, dtype=bool)
    for _ in range(maxiter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        iters[idx] += 1
        Xa, fa = X[idx], f[idx]
        XL = dual_vec_rows(dual_vec_rows(Y[idx], q) @ B, pstar)
        newX, newY, newf = Xa.copy(), Y[idx], fa.copy()
        accepted = np.zeros(idx.size, dtype=bool)
        t = 1.0
        for _ in range(30):
            j = np.flatnonzero(~accepted)
            if j.size == 0:
                break
            cand = Xa[j] + t * (XL[j] - Xa[j])
            nt = lp_norm_rows(cand, p)
            ok = nt > 0.0
            cand[ok] /= nt[ok, None]
            yc = cand @ B.T
            fc = lp_norm_rows(yc, q)
            win = ok & (fc > fa[j])
            w = j[win]
            newX[w], newY[w], newf[w] = cand[win], yc[win], fc[win]
            accepted[w] = True
            t *= 0.5
        gain = (newf - fa) / np.maximum(fa, 1e-300)
        X[idx], Y[idx], f[idx] = newX, newY, newf
        active[idx[~accepted | (gain < tol)]] = False
    return f, X, iters


def phase_enum_values(B, q, phases):
    n = B.shape[1]
    m = phases.shape[0]
    total = m ** (n - 1)
    out = np.empty(total)
    weights = m ** np.arange(n - 2, -1, -1)
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total))
        digits = (codes[:, None] // weights[None, :]) % m
        U = np.ones((codes.size, n), dtype=np.complex128)
        U[:, 1:] = phases[digits]
        out[start:start + codes.size] = lp_norm_rows(U @ B.T, q)
    return out


def power_gram(A, v0, maxiter, tol):
    """Power iteration on A^H A; returns (mu, v, iters, relchange, converged)."""
    Ah = A.conj().T
    v = v0 / np.linalg.norm(v0)
    w = A @ v
    mu = float(np.vdot(w, w).real)
    rel = INF
    it = 0
    while it < maxiter:
        it += 1
        u = Ah @ w
        res = np.linalg.norm(u - mu * v)
        if res <= tol * mu or mu == 0.0:
            return mu, v, it, 0.0, True
        v = u / np.linalg.norm(u)
        w = A @ v
        new = float(np.vdot(w, w).real)
        rel = abs(new - mu) / max(new, 1e-300)
        mu = new
    return mu, v, it, rel, False


def batch_sigma_max(stack, starts, maxiter, tol):
    # all (matrix, start) pairs advance together; converged ones are frozen
    m, k, n = starts.shape
    A = np.repeat(stack, k, axis=0)
    Ah = np.conj(np.swapaxes(A, 1, 2))
    V = starts.reshape(m * k, n)
    V = V / np.linalg.norm(V, axis=1, keepdims=True)
    W = np.einsum("bij,bj->bi", A, V)
    mu = np.einsum("bi,bi->b", W.conj(), W).real
    active = np.ones(m * k, dtype=bool)
    for _ in range(maxiter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        U = np.einsum("bij,bj->bi", Ah[idx], W[idx])
        res = np.linalg.norm(U - mu[idx, None] * V[idx], axis=1)
        done = (res <= tol * mu[idx]) | (mu[idx] == 0.0)
        active[idx[done]] = False
        go = idx[~done]
        U = U[~done]
        V[go] = U / np.linalg.norm(U, axis=1, keepdims=True)
        W[go] = np.einsum("bij,bj->bi", A[go], V[go])
        mu[go] = np.einsum("bi,bi->b", W[go].conj(), W[go]).real
    return np.sqrt(mu.reshape(m, k).max(axis=1))
