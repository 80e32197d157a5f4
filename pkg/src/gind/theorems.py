"""Constructive checks of the structure theory of g-ind norms.

Each check compares conservative bound sides (a lower bound against an
upper bound) so that a pass never rests on an optimistic estimate.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .core import (
    CLASSICAL_TAGS,
    gind,
    matrix_norm_bounds,
    ratio,
)
from .errors import BudgetTooSmall, DegenerateWitness, DimensionMismatch
from .norms import (
    Transformed,
    dual_norm_eval,
    dual_vector,
    is_unitarily_invariant,
    norm_eval,
    spec_to_text,
)
from .numerics import as_matrix, gaussian_matrix, invert, random_unitary, rng
from .report import AT_LEAST, AT_MOST, Check, CongruenceVerdict, Witness, WitnessReport

DEGENERATE_TOL = 1e-12


def _dim(specs, n):
    dims = {s.dim for s in specs if s.dim is not None}
    if n is not None:
        dims.add(n)
    if len(dims) > 1:
        raise DimensionMismatch(f"inconsistent dimensions {sorted(dims)}")
    if not dims:
        raise DimensionMismatch("dimension is not implied by the specs; pass n")
    return dims.pop()


def _texts(*specs):
    return [spec_to_text(s) for s in specs]


def _max_submult_ratio(norm_id, n, samples, seed, stream, scale=1.0):
    """Largest conservative ``||AB|| / (scale ||A|| ||B||)`` over random pairs."""
    worst, pair = 0.0, None
    for t in range(samples):
        g = rng(seed, stream, t)
        A, B = gaussian_matrix(g, n), gaussian_matrix(g, n)
        lo, _ = matrix_norm_bounds(norm_id, A @ B, seed)
        _, ua = matrix_norm_bounds(norm_id, A, seed)
        _, ub = matrix_norm_bounds(norm_id, B, seed)
        r = lo / (scale * ua * ub)
        if r > worst:
            worst, pair = r, (A, B)
    return worst, pair


def extremal_ratio_witness(n1, n2, n3, n4, seed=0, n=None, samples=100):
    """Build the rank-one matrix that attains ``max ||A||_{1,2} / ||A||_{3,4}
    = R_{2,4} R_{3,1}`` and sample the matching upper bound."""
    n = _dim((n1, n2, n3, n4), n)
    r24 = ratio(n2, n4, seed, n)
    r31 = ratio(n3, n1, seed, n)
    y, z = r24.witness, r31.witness
    if min(np.abs(y).max(), np.abs(z).max()) < DEGENERATE_TOL:
        raise DegenerateWitness("ratio maximizer is numerically zero")
    z0 = dual_vector(n3, z).y0
    A0 = np.outer(y, z0)
    top = gind(A0, n1, n2, seed)
    bottom = gind(A0, n3, n4, seed)
    predicted = r24.upper * r31.upper
    achieved = top.lower / bottom.upper

    worst = 0.0
    for t in range(samples):
        A = gaussian_matrix(rng(seed, 10, t), n)
        lhs = gind(A, n1, n2, seed).lower
        rhs = gind(A, n3, n4, seed).upper
        worst = max(worst, lhs / (predicted * rhs))
    checks = (
        Check("attained ratio", predicted, achieved, 1e-6),
        Check("sampled ratio / predicted", 1.0, worst, 1e-8, AT_MOST),
    )
    return WitnessReport(
        theorem="extremal-ratio",
        inputs={"norms": _texts(n1, n2, n3, n4), "n": n, "samples": samples},
        checks=checks,
        seed=seed,
        witnesses=(
            Witness("y", y, norm_eval(n2, y), (n2,)),
            Witness("z", z, norm_eval(n3, z), (n3,)),
            Witness("z0", z0),
            Witness("A0", A0, top.lower, (n1, n2)),
        ),
        details={"R24": [r24.lower, r24.upper], "R31": [r31.lower, r31.upper],
                 "norm_12": [top.lower, top.upper], "norm_34": [bottom.lower, bottom.upper]},
    )


def algebra_counterexample(d, c, seed=0, n=None):
    """``(B, R)`` with ``||B||_{d,c} = 1`` and ``B^2 = R B``, where
    ``R = ||x||_d / ||x||_c`` at the maximizer ``x`` of that ratio."""
    n = _dim((d, c), n)
    r = ratio(d, c, seed, n)
    x = r.witness
    if np.abs(x).max() < DEGENERATE_TOL:
        raise DegenerateWitness("ratio maximizer is numerically zero")
    x0 = dual_vector(d, x).y0
    xc = norm_eval(c, x)
    return np.outer(x, x0) / xc, norm_eval(d, x) / xc


def algebra_norm_test(d, c, seed=0, n=None, samples=1000):
    """Decide whether ``||.||_{d,c}`` is submultiplicative (iff ``d <= c``)."""
    n = _dim((d, c), n)
    r = ratio(d, c, seed, n)
    inputs = {"from": spec_to_text(d), "to": spec_to_text(c), "n": n}
    if r.upper <= 1 + 1e-9:
        worst, pair = _max_submult_ratio((d, c), n, samples, seed, 20)
        witnesses = () if pair is None else (Witness("A", pair[0]), Witness("B", pair[1]))
        return WitnessReport(
            theorem="algebra-norm",
            inputs=dict(inputs, samples=samples),
            checks=(Check("max ||AB||/(||A|| ||B||)", 1.0, worst, 1e-9, AT_MOST),),
            seed=seed, witnesses=witnesses, verdict=True,
            details={"R": [r.lower, r.upper]},
        )
    B, R = algebra_counterexample(d, c, seed, n)
    g1 = gind(B, d, c, seed)
    g2 = gind(B @ B, d, c, seed)
    checks = (
        Check("||B^2|| / ||B||^2", R, g2.lower / g1.upper ** 2, 1e-6),
        Check("||B||", 1.0, g1.lower, 1e-9),
        Check("||B^2||", R, g2.lower, 1e-6),
    )
    return WitnessReport(
        theorem="algebra-norm", inputs=inputs, checks=checks, seed=seed,
        witnesses=(Witness("B", B, g1.lower, (d, c)), Witness("B2", B @ B, g2.lower, (d, c))),
        verdict=False, details={"R": [r.lower, r.upper]},
    )


def min_algebra_scale(d, c, seed=0, n=None):
    """Smallest ``lam`` making ``lam ||.||_{d,c}`` an algebra norm: ``R_{d,c}``."""
    return ratio(d, c, seed, _dim((d, c), n)).upper


def min_algebra_scale_report(d, c, seed=0, n=None, samples=500, below=0.99):
    n = _dim((d, c), n)
    r = ratio(d, c, seed, n)
    lam = r.upper
    worst, _ = _max_submult_ratio((d, c), n, samples, seed, 30, scale=lam)
    B, R = algebra_counterexample(d, c, seed, n)
    g1 = gind(B, d, c, seed)
    g2 = gind(B @ B, d, c, seed)
    s = below * lam
    # at scale s: s||B^2|| / (s||B||)^2 = R / s, a violation whenever s < R
    violation = g2.lower / (s * g1.upper ** 2)
    checks = [
        Check("lambda bounds agree", lam, r.lower, 1e-8),
        Check("scaled submultiplicativity", 1.0, worst, 1e-9, AT_MOST),
        Check(f"violation factor at {below} lambda", R / s, violation, 1e-6),
    ]
    if lam > 1.02:
        checks.append(Check(f"violation exists at {below} lambda", 1.0, violation, 0.0, AT_LEAST))
    return WitnessReport(
        theorem="min-algebra-scale",
        inputs={"from": spec_to_text(d), "to": spec_to_text(c), "n": n, "samples": samples},
        checks=tuple(checks), seed=seed,
        witnesses=(Witness("B", B, g1.lower, (d, c)),),
        details={"lambda": lam, "below": below, "violation": violation},
    )


def gi_congruent(p1, p2, seed=0, n=None):
    """Is ``||.||_{p1} = gamma ||.||_{p2}``? Holds iff both component ratios
    are constant, i.e. ``R_{a,b} R_{b,a} = 1`` for each side."""
    n = _dim((*p1, *p2), n)
    a, ai = ratio(p1[0], p2[0], seed, n), ratio(p2[0], p1[0], seed, n)
    b, bi = ratio(p1[1], p2[1], seed, n), ratio(p2[1], p1[1], seed, n)
    a_const = a.upper * ai.upper <= 1 + 1e-8
    b_const = b.upper * bi.upper <= 1 + 1e-8
    if a_const and b_const:
        return CongruenceVerdict(True, gamma=b.upper / a.upper, alpha=a.upper, beta=b.upper)
    lo, hi = (ai, a) if not a_const else (bi, b)
    return CongruenceVerdict(False, separating_vectors=(lo.witness, hi.witness))


def congruence_report(p1, p2, seed=0, n=None, trials=200):
    """Run :func:`gi_congruent` and confirm its verdict on random matrices."""
    n = _dim((*p1, *p2), n)
    v = gi_congruent(p1, p2, seed, n)
    inputs = {"pair1": _texts(*p1), "pair2": _texts(*p2), "n": n, "trials": trials}
    if v.congruent:
        worst = 0.0
        for t in range(trials):
            A = gaussian_matrix(rng(seed, 40, t), n)
            g1 = gind(A, *p1, seed)
            g2 = gind(A, *p2, seed)
            dev = max(g1.upper - v.gamma * g2.lower, v.gamma * g2.upper - g1.lower)
            worst = max(worst, dev / g1.lower)
        checks = (Check("max relative deviation from gamma", 0.0, worst, 1e-6, AT_MOST),)
        witnesses = ()
    else:
        u, w = v.separating_vectors
        side = 0 if _ratio_spread(p1[0], p2[0], u, w) > 1e-6 else 1
        spread = _ratio_spread(p1[side], p2[side], u, w)
        checks = (Check("separating ratio spread", 1e-6, spread, 0.0, AT_LEAST),)
        witnesses = (Witness("u", u), Witness("w", w))
    return WitnessReport(
        theorem="gi-congruence", inputs=inputs, checks=checks, seed=seed,
        witnesses=witnesses, verdict=v.congruent, details={"verdict": v.to_json()},
    )


def _ratio_spread(s1, s2, u, w):
    """Relative difference of ``||.||_s1 / ||.||_s2`` at ``u`` and ``w``."""
    ru = norm_eval(s1, u) / norm_eval(s2, u)
    rw = norm_eval(s1, w) / norm_eval(s2, w)
    return abs(rw - ru) / max(ru, rw)


def unitary_invariance_probe(d, c, trials=100, seed=0, n=None):
    """Compare ``||UAV||`` with ``||A||`` for random unitaries.

    When both norms are unitarily invariant the largest possible deviation
    must stay below 1e-6; otherwise a guaranteed deviation above 1e-3 must
    be found.
    """
    n = _dim((d, c), n)
    expect = is_unitarily_invariant(d, n) and is_unitarily_invariant(c, n)
    inputs = {"from": spec_to_text(d), "to": spec_to_text(c), "n": n, "trials": trials,
              "expect_invariant": expect}
    worst, witness = 0.0, None
    for t in range(trials):
        g = rng(seed, 50, t)
        U = random_unitary(n, int(g.integers(2 ** 63)))
        V = random_unitary(n, int(g.integers(2 ** 63)))
        kind = t % 3
        if kind == 0:
            A = gaussian_matrix(g, n)
        elif kind == 1:
            A = np.outer(gaussian_matrix(g, n, 1)[:, 0], gaussian_matrix(g, n, 1)[:, 0])
        else:
            A = np.zeros((n, n), dtype=np.complex128)
            A[g.integers(n), g.integers(n)] = 1.0
        UAV = U @ A @ V
        ra, ru = gind(A, d, c, seed), gind(UAV, d, c, seed)
        if expect:
            dev = max(abs(ru.upper - ra.lower), abs(ra.upper - ru.lower)) / ra.lower
        else:
            gap = max(0.0, ru.lower - ra.upper, ra.lower - ru.upper)
            # (UAV, U^*, V^*) is an equally valid sample, measured against ||UAV||
            dev = max(gap / ra.upper, gap / ru.upper)
        if dev > worst or witness is None:
            worst, witness = dev, (U, A, V, ra.lower, ru.lower)
    if trials == 0:
        checks = (Check("max deviation", 0.0, 0.0, 1e-6, AT_MOST),)
    elif expect:
        checks = (Check("max deviation", 0.0, worst, 1e-6, AT_MOST),)
    else:
        checks = (Check("max deviation", 1e-3, worst, 0.0, AT_LEAST),)
    witnesses = ()
    if witness is not None:
        U, A, V, la, lu = witness
        witnesses = (Witness("U", U), Witness("A", A, la, (d, c)), Witness("V", V),
                     Witness("UAV", U @ A @ V, lu, (d, c)))
    return WitnessReport(theorem="unitary-invariance", inputs=inputs, checks=checks,
                         seed=seed, witnesses=witnesses, verdict=expect,
                         details={"max_deviation": worst})


def transformed_gind_check(A, K, L, base_d, base_c, seed=0):
    """``||A||_{K,L} = ||L A K^-1||`` for pulled-back norms."""
    A, K, L = as_matrix(A), as_matrix(K), as_matrix(L)
    if not A.shape == K.shape == L.shape:
        raise DimensionMismatch("A, K and L must share one square shape")
    d, c = Transformed(K, base_d), Transformed(L, base_c)
    left = gind(A, d, c, seed)
    right = gind(L @ A @ invert(K), base_d, base_c, seed)
    checks = (
        Check("left.lower / right.upper", 1.0, left.lower / right.upper, 1e-8, AT_MOST),
        Check("right.lower / left.upper", 1.0, right.lower / left.upper, 1e-8, AT_MOST),
    )
    return WitnessReport(
        theorem="transformed-identity",
        inputs={"base": _texts(base_d, base_c), "n": A.shape[0]},
        checks=checks, seed=seed,
        witnesses=(Witness("A", A, left.lower, (d, c)), Witness("K", K), Witness("L", L)),
        details={"left": [left.lower, left.upper], "right": [right.lower, right.upper],
                 "methods": [left.method, right.method]},
    )


# ---- norm recovery from an algebra norm -----------------------------------

def oracle_batch(oracle, stack, seed=0):
    """Evaluate a matrix norm on a stack of matrices, shape ``(m, n, n)``."""
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    a = np.abs(stack)
    if oracle == "C":
        return a.sum(axis=1).max(axis=1)
    if oracle == "R":
        return a.sum(axis=2).max(axis=1)
    if oracle == "sigma":
        return a.sum(axis=(1, 2))
    if oracle == "m":
        return a.max(axis=(1, 2))
    if oracle == "S":
        m, n, _ = stack.shape
        starts = np.empty((m, 4, n), dtype=np.complex128)
        starts[:, 0] = 1.0
        g = rng(seed, 60)
        starts[:, 1:] = g.standard_normal((m, 3, n)) + 1j * g.standard_normal((m, 3, n))
        return kernels.batch_sigma_max(stack, starts, 100_000, 1e-11)
    d, c = oracle
    return np.array([gind(M, d, c, seed).upper for M in stack])


@dataclass(frozen=True)
class RecoveredNorms:
    nu1_eval: Callable
    nu2_eval: Callable
    lam: float
    report: WitnessReport


def _oracle_name(oracle):
    return oracle if isinstance(oracle, str) else "g-ind:" + "->".join(_texts(*oracle))


def _unit_sphere_candidates(n, oracle, seed, count):
    """Matrices with ``||A|| = ||A^-1|| = 1`` under ``oracle`` (within 1e-6)."""
    g = rng(seed, 61)
    found = []
    for t in range(4 * count):
        if t % 2 == 0:
            A = random_unitary(n, int(g.integers(2 ** 63)))
        else:
            A = np.zeros((n, n), dtype=np.complex128)
            A[np.arange(n), g.permutation(n)] = np.exp(2j * np.pi * g.random(n))
        vals = oracle_batch(oracle, np.stack([A, invert(A)]), seed)
        if np.all(np.abs(vals - 1.0) <= 1e-6):
            found.append(A)
        if len(found) == count:
            break
    return found


def recover_vector_norms(n, oracle="S", budget=10_000, seed=0, probes=20, vector_samples=64):
    """Rebuild the two vector norms whose g-ind norm reproduces an algebra
    norm on matrices with ``||A|| = ||A^-1|| = 1``.

    ``nu1(x) = max{oracle(C_{Ax}) : oracle(A) = 1}`` and
    ``lam^-1 = max{|sum x| : nu1(x) = 1}`` are approximated by maximizing over
    seeded samples; ``nu2(x) = lam * oracle(C_x)``.
    """
    if budget < 100:
        raise BudgetTooSmall(f"budget must be >= 100, got {budget}")
    if isinstance(oracle, str) and oracle not in CLASSICAL_TAGS:
        raise ValueError(f"unknown oracle {oracle!r}")
    g = rng(seed, 62)
    k_unit = budget // 4
    k_rank1 = budget // 4
    k_gauss = budget - k_unit - k_rank1 - 1
    mats = [np.eye(n, dtype=np.complex128)[None]]
    mats.append(np.stack([random_unitary(n, int(g.integers(2 ** 63))) for _ in range(k_unit)]))
    u = g.standard_normal((k_rank1, n)) + 1j * g.standard_normal((k_rank1, n))
    w = g.standard_normal((k_rank1, n)) + 1j * g.standard_normal((k_rank1, n))
    mats.append(u[:, :, None] * w[:, None, :])
    mats.append(g.standard_normal((k_gauss, n, n)) + 1j * g.standard_normal((k_gauss, n, n)))
    sample = np.concatenate(mats)
    sample /= oracle_batch(oracle, sample, seed)[:, None, None]

    ones = np.ones(n)
    if isinstance(oracle, str):
        def column_norms(Y):
            return oracle_batch(oracle, Y[:, :, None] * ones[None, None, :], seed)
    else:
        # C_y = y 1^T is rank one: ||C_y||_{d,c} = ||y||_c ||1||_d^*
        d, c = oracle
        ones_dual = dual_norm_eval(d, ones)

        def column_norms(Y):
            return ones_dual * np.array([norm_eval(c, y) for y in Y])

    def nu1(x):
        return float(column_norms(sample @ np.asarray(x, dtype=np.complex128)).max())

    X = [ones.astype(np.complex128)] + list(np.eye(n, dtype=np.complex128))
    X += list(g.standard_normal((vector_samples, n)) + 1j * g.standard_normal((vector_samples, n)))
    nu1_cache = [nu1(x) for x in X]
    lam = 1.0 / max(abs(x.sum()) / v for x, v in zip(X, nu1_cache))

    def nu2(x):
        x = np.asarray(x, dtype=np.complex128)
        return lam * float(column_norms(x[None])[0])

    units = _unit_sphere_candidates(n, oracle, seed, probes)
    recon = []
    for A in units:
        recon.append(max(nu2(A @ x) / v for x, v in zip(X, nu1_cache)))
    if recon:
        worst = max(recon, key=lambda r: abs(r - 1.0))
        checks = (Check("reconstructed norm on ||A|| = ||A^-1|| = 1", 1.0, worst, 0.05),)
    else:
        checks = (Check("no matrices with ||A|| = ||A^-1|| = 1 found", 1.0, 1.0, 0.05),)
    report = WitnessReport(
        theorem="norm-recovery",
        inputs={"n": n, "oracle": _oracle_name(oracle), "budget": budget, "probes": probes},
        checks=checks, seed=seed,
        witnesses=tuple(Witness(f"A{i}", A) for i, A in enumerate(units[:3])),
        details={"lambda": lam, "reconstructed": recon, "skipped": not recon},
    )
    return RecoveredNorms(nu1_eval=nu1, nu2_eval=nu2, lam=lam, report=report)
