"""Loop kernels compiled with numba.

Every function here has a twin of the same name and signature in
``_numpy.py``; the two must agree to rounding.
"""

import math

import numpy as np
from numba import njit

INF = math.inf


@njit(cache=True)
def dual_exponent(p):
    if p == 1.0:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


@njit(cache=True)
def _lp_abs(a, p):
    """l_p norm of a vector of magnitudes, scaled by its max against overflow."""
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        if a[i] > s:
            s = a[i]
    if s == 0.0 or p == INF:
        return s
    acc = 0.0
    if p == 1.0:
        for i in range(n):
            acc += a[i]
        return acc
    if p == 2.0:
        for i in range(n):
            t = a[i] / s
            acc += t * t
        return s * math.sqrt(acc)
    for i in range(n):
        acc += (a[i] / s) ** p
    return s * acc ** (1.0 / p)


@njit(cache=True)
def lp_norm(y, p):
    a = np.empty(y.shape[0])
    for i in range(y.shape[0]):
        a[i] = abs(y[i])
    return _lp_abs(a, p)


@njit(cache=True)
def lp_norm_rows(Y, p):
    m, n = Y.shape
    out = np.empty(m)
    a = np.empty(n)
    for k in range(m):
        for i in range(n):
            a[i] = abs(Y[k, i])
        out[k] = _lp_abs(a, p)
    return out


@njit(cache=True)
def _matvec(A, x):
    # explicit loops: BLAS call overhead dominates at these sizes
    m, n = A.shape
    out = np.zeros(m, dtype=np.complex128)
    for i in range(m):
        acc = 0j
        for j in range(n):
            acc += A[i, j] * x[j]
        out[i] = acc
    return out


@njit(cache=True)
def dual_vec(y, r):
    n = y.shape[0]
    z = np.zeros(n, dtype=np.complex128)
    s = 0.0
    for i in range(n):
        a = abs(y[i])
        if a > s:
            s = a
    if s == 0.0:
        return z
    # the map is scale invariant; rescaling keeps |y| accurate for subnormal input
    y = y.copy()
    for i in range(n):
        y[i] = complex(y[i].real / s, y[i].imag / s)
    s = 0.0
    for i in range(n):
        a = abs(y[i])
        if a > s:
            s = a
    if r == INF:
        cut = s * (1.0 - 1e-14)
        count = 0
        for i in range(n):
            if abs(y[i]) >= cut:
                count += 1
        for i in range(n):
            a = abs(y[i])
            if a >= cut:
                z[i] = (y[i] / a).conjugate() / count
        return z
    if r == 1.0:
        # zero entries get phase 1: still a valid dual vector, and ascent
        # from a canonical direction can leave its face
        for i in range(n):
            a = abs(y[i])
            z[i] = (y[i] / a).conjugate() if a > 0.0 else 1.0
        return z
    nrm = lp_norm(y, r) / s
    scale = nrm ** (r - 1.0)
    for i in range(n):
        a = abs(y[i])
        if a > 0.0:
            z[i] = (y[i] / a).conjugate() * ((a / s) ** (r - 1.0) / scale)
    return z


@njit(cache=True)
def _ascent_one(B, Bt, p, q, pstar, x0, maxiter, tol):
    x = x0 / lp_norm(x0, p)
    y = _matvec(B, x)
    f = lp_norm(y, q)
    it = 0
    while it < maxiter:
        it += 1
        z = dual_vec(y, q)
        g = _matvec(Bt, z)
        xl = dual_vec(g, pstar)
        t = 1.0
        accepted = False
        xt = x
        yt = y
        ft = f
        for _ in range(30):
            cand = x + t * (xl - x)
            nt = lp_norm(cand, p)
            if nt > 0.0:
                cand = cand / nt
                yc = _matvec(B, cand)
                fc = lp_norm(yc, q)
                if fc > f:
                    xt = cand
                    yt = yc
                    ft = fc
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            break
        gain = (ft - f) / max(f, 1e-300)
        x = xt
        y = yt
        f = ft
        if gain < tol:
            break
    return f, x, it


@njit(cache=True)
def multistart_ascent(B, p, q, X0, maxiter, tol):
    k, n = X0.shape
    Bt = np.ascontiguousarray(B.T)
    pstar = dual_exponent(p)
    values = np.empty(k)
    X = np.empty((k, n), dtype=np.complex128)
    iters = np.empty(k, dtype=np.int64)
    for s in range(k):
        f, x, it = _ascent_one(B, Bt, p, q, pstar, X0[s].copy(), maxiter, tol)
        values[s] = f
        X[s] = x
        iters[s] = it
    return values, X, iters


@njit(cache=True)
def phase_enum_values(B, q, phases):
    n = B.shape[1]
    m = phases.shape[0]
    total = 1
    for _ in range(n - 1):
        total *= m
    out = np.empty(total)
    u = np.empty(n, dtype=np.complex128)
    u[0] = 1.0
    for code in range(total):
        c = code
        for j in range(n - 1, 0, -1):
            u[j] = phases[c % m]
            c //= m
        out[code] = lp_norm(_matvec(B, u), q)
    return out


@njit(cache=True)
def _norm2(v):
    acc = 0.0
    for i in range(v.shape[0]):
        acc += v[i].real * v[i].real + v[i].imag * v[i].imag
    return math.sqrt(acc)


@njit(cache=True)
def power_gram(A, v0, maxiter, tol):
    """Power iteration on A^H A; returns (mu, v, iters, relchange, converged)."""
    Ah = np.ascontiguousarray(A.conj().T)
    v = v0 / lp_norm(v0, 2.0)
    w = _matvec(A, v)
    mu = lp_norm(w, 2.0) ** 2
    rel = INF
    it = 0
    n = v.shape[0]
    while it < maxiter:
        it += 1
        u = _matvec(Ah, w)
        res = 0.0
        for i in range(n):
            d = u[i] - mu * v[i]
            res += d.real * d.real + d.imag * d.imag
        if math.sqrt(res) <= tol * mu or mu == 0.0:
            return mu, v, it, 0.0, True
        v = u / _norm2(u)
        w = _matvec(A, v)
        new = _norm2(w) ** 2
        rel = abs(new - mu) / max(new, 1e-300)
        mu = new
    return mu, v, it, rel, False


@njit(cache=True)
def batch_sigma_max(stack, starts, maxiter, tol):
    m = stack.shape[0]
    k = starts.shape[1]
    out = np.zeros(m)
    for i in range(m):
        best = 0.0
        for s in range(k):
            mu, _, _, _, _ = power_gram(stack[i], starts[i, s].copy(), maxiter, tol)
            if mu > best:
                best = mu
        out[i] = math.sqrt(best)
    return out
