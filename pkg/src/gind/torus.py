"""Certified maximum of ``||M u||_r`` over unimodular vectors ``|u_i| = 1``.

This is ``||M||_{inf->r}`` over C^n. Since ``f(u) = ||M u||_r`` is convex
and invariant under a common phase, ``u_0 = 1`` is fixed and the other
phases are split into arcs. An arc of half-width ``h < pi/2`` lies inside the
triangle spanned by its endpoints and the tangent corner ``sec(h) e^{i theta}``,
so the max of ``f`` over the vertex products bounds ``f`` on the whole cell.
Cells that cannot beat the incumbent are dropped, the rest are halved.
"""

import functools
import itertools
import math

import numpy as np

from . import kernels

RTOL = 1e-12
BUDGET = 1 << 19
INIT_CELLS = 4096
INIT_PER_AXIS = 16


def _values(M, U, r):
    return kernels.lp_norm_rows(np.ascontiguousarray(U @ M.T), r)


def _lead_values(M0, M1t, W, r):
    """``||M (1, w)||_r`` for each row ``w`` of ``W``."""
    return kernels.lp_norm_rows(np.ascontiguousarray(W @ M1t + M0), r)


@functools.lru_cache(maxsize=None)
def _patterns(k):
    """Vertex choices per cell (``3^k`` rows) and child offsets (``2^k`` rows)."""
    combos = np.array(list(itertools.product(range(3), repeat=k)))
    halves = np.array(list(itertools.product((-1.0, 1.0), repeat=k)))
    return combos, halves


def _lift(w):
    return None if w is None else np.concatenate([np.ones(1, dtype=np.complex128), w])


def torus_max(M, r, lower=0.0, rtol=RTOL, budget=BUDGET):
    """Return ``(lower, upper, u)`` for ``max ||M u||_r`` over the torus.

    ``lower`` seeds the incumbent; ``u`` is the best cell center found, or
    ``None`` if none beat the seed. Returns ``None`` when even the first
    level of cells exceeds ``budget`` vertex evaluations.
    """
    n = M.shape[1]
    k = n - 1
    if k == 0:
        u = np.ones(1, dtype=np.complex128)
        v = float(_values(M, u[None, :], r)[0])
        return max(v, lower), v, u
    m = min(INIT_PER_AXIS, int(INIT_CELLS ** (1.0 / k) + 1e-9))
    while m ** k > INIT_CELLS:
        m -= 1
    nv = 3 ** k
    if m < 3 or m ** k * (nv + 1) > budget:
        return None
    combos, halves = _patterns(k)
    h = math.pi / m
    axis = (np.arange(m) + 0.5) * 2 * h
    theta = np.stack([g.ravel() for g in np.meshgrid(*([axis] * k), indexing="ij")], axis=1)

    M0 = np.ascontiguousarray(M[:, 0])
    M1t = np.ascontiguousarray(M[:, 1:].T)
    best, best_w = lower, None
    pruned = 0.0
    spent = 0
    while True:
        cells = theta.shape[0]
        W = np.exp(1j * theta)
        fc = _lead_values(M0, M1t, W, r)
        i = int(np.argmax(fc))
        if fc[i] > best:
            best, best_w = float(fc[i]), W[i]

        # vertex j of a cell is w * rad_j e^{i off_j}, coordinatewise
        corner = np.array([np.exp(-1j * h), np.exp(1j * h), 1.0 / math.cos(h)])[combos]
        V = (W[:, None, :] * corner[None]).reshape(-1, k)
        fb = _lead_values(M0, M1t, V, r).reshape(cells, nv).max(axis=1)
        spent += cells * (nv + 1)

        live = fb > best * (1.0 + rtol)
        if not live.all():
            pruned = max(pruned, float(fb[~live].max()))
        if not live.any():
            return best, max(pruned, best), _lift(best_w)
        nxt = int(live.sum()) << k
        if spent + nxt * (nv + 1) > budget:
            return best, max(pruned, float(fb[live].max()), best), _lift(best_w)
        h /= 2
        theta = (theta[live][:, None, :] + h * halves[None]).reshape(-1, k)
