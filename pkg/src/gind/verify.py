"""The full theorem suite over a fixed family of vector norms."""

import dataclasses
import itertools

import numpy as np

from . import theorems as T
from .core import (
    classical_norms,
    column_operator,
    column_sum_operator,
    gind,
    predicted_column_norms,
    ratio,
    submult_defect,
)
from .errors import DimensionMismatch
from .norms import L1, L2, LINF, Lp, Transformed, dual_norm_eval, dual_vector, norm_eval, scaled, spec_to_text
from .numerics import gaussian_matrix, rng
from .report import AT_LEAST, AT_MOST, Check, Witness, WitnessReport

MIN_N, MAX_N = 2, 6


def family(n):
    """``l1, l2, linf, lp:3, scale:2*l2, lin:diag(1..n)*l1``."""
    return (L1, L2, LINF, Lp(3), scaled(2, L2), Transformed(np.diag(np.arange(1.0, n + 1)), L1))


def _label(*specs):
    return ",".join(spec_to_text(s) for s in specs)


def _merge(tag, cases, seed, n):
    """Fold ``(label, report)`` cases into one report with prefixed checks."""
    checks, details = [], {}
    for label, rep in cases:
        checks += [dataclasses.replace(c, name=f"[{label}] {c.name}") for c in rep.checks]
        if rep.verdict is not None:
            details[label] = rep.verdict
    witnesses = cases[0][1].witnesses if cases else ()
    return WitnessReport(theorem=tag, inputs={"n": n, "cases": [lab for lab, _ in cases]},
                         checks=tuple(checks), seed=seed, witnesses=witnesses,
                         details={"verdicts": details} if details else {})


def _classical(n, seed, trials=20):
    worst = {"C": 0.0, "S": 0.0, "R": 0.0}
    for t in range(trials):
        A = gaussian_matrix(rng(seed, 100, t), n)
        ref = classical_norms(A)
        for tag, (d, c) in (("C", (L1, L1)), ("S", (L2, L2))):
            r = gind(A, d, c, seed)
            v = getattr(ref, tag)
            worst[tag] = max(worst[tag], abs(r.lower - v) / v, abs(r.upper - v) / v)
        Ar = A.real.copy()
        r = gind(Ar, LINF, LINF, seed)
        v = classical_norms(Ar).R
        worst["R"] = max(worst["R"], abs(r.lower - v) / v, abs(r.upper - v) / v)
    checks = tuple(Check(f"gind vs ||.||_{k}", 0.0, worst[k], 1e-8, AT_MOST) for k in worst)
    return WitnessReport("classical-agreement", {"n": n, "trials": trials}, checks, seed)


def _defect(n, seed):
    J = np.ones((n, n))
    m = submult_defect("m", n, 100, seed)
    sig = submult_defect("sigma", n, 200, seed)
    checks = (
        Check("||J||_m", 1.0, classical_norms(J).m, 1e-12),
        Check("||J^2||_m", float(n), classical_norms(J @ J).m, 1e-12),
        Check("defect of m", float(n), m.value, 1e-9, AT_LEAST),
        Check("defect of sigma", 1.0, sig.value, 1e-9, AT_MOST),
    )
    return WitnessReport("submult-defect", {"n": n}, checks, seed,
                         witnesses=(Witness("A", m.witness_pair[0]), Witness("B", m.witness_pair[1])))


def _duality(n, seed):
    checks = []
    for k, s in enumerate(family(n)):
        y = gaussian_matrix(rng(seed, 110, k), n, 1)[:, 0]
        dv = dual_vector(s, y)
        checks.append(Check(f"[{_label(s)}] y0^T y = ||y||", norm_eval(s, y), dv.attained, 1e-10))
        checks.append(Check(f"[{_label(s)}] ||y0||^* = 1", 1.0, dual_norm_eval(s, dv.y0), 1e-10))
    return WitnessReport("dual-vector", {"n": n}, tuple(checks), seed)


def _columns(n, seed):
    F = family(n)
    checks = []
    for k, (d, c) in enumerate([(F[0], F[1]), (F[2], F[3]), (F[4], F[5]), (F[5], F[2])]):
        x = gaussian_matrix(rng(seed, 120, k), n, 1)[:, 0]
        j = k % n
        pj, ps = predicted_column_norms(x, j, d, c)
        gj = gind(column_operator(x, j), d, c, seed)
        gs = gind(column_sum_operator(x), d, c, seed)
        lab = _label(d, c)
        checks.append(Check(f"[{lab}] ||C_x,j||", pj, gj.lower, 1e-8))
        checks.append(Check(f"[{lab}] ||C_x||", ps, gs.lower, 1e-8))
    return WitnessReport("column-operators", {"n": n}, tuple(checks), seed)


def _monotone(n, seed, trials=20):
    # ||A||_{n1,n2} <= R(n2,n4) R(n3,n1) ||A||_{n3,n4} for every A
    F = family(n)
    quads = [(F[2], F[0], F[1], F[1]), (F[3], F[4], F[5], F[0]), (F[5], F[1], F[2], F[3])]
    checks = []
    for n1, n2, n3, n4 in quads:
        k = ratio(n2, n4, seed, n).upper * ratio(n3, n1, seed, n).upper
        worst = 0.0
        for t in range(trials):
            A = gaussian_matrix(rng(seed, 130, t), n)
            worst = max(worst, gind(A, n1, n2, seed).lower / (k * gind(A, n3, n4, seed).upper))
        checks.append(Check(f"[{_label(n1, n2, n3, n4)}] pointwise bound", 1.0, worst, 1e-8, AT_MOST))
    return WitnessReport("pointwise-ratio-bound", {"n": n, "trials": trials}, tuple(checks), seed)


def _non_minimal(n, seed, trials=50):
    beta = scaled(2, L2)
    I = np.eye(n)
    a = gind(I, LINF, beta, seed)
    g = gind(I, L2, beta, seed)
    worst = 0.0
    for t in range(trials):
        A = gaussian_matrix(rng(seed, 140, t), n)
        worst = max(worst, gind(A, L2, beta, seed).upper / gind(A, LINF, beta, seed).lower)
    checks = (
        Check("||I|| via (l2, 2 l2)", 2.0, g.lower, 1e-8),
        Check("||I|| via (linf, 2 l2)", 2.0 * np.sqrt(n), a.lower, 1e-8),
        Check("domination ratio", 1.0, worst, 1e-8, AT_MOST),
    )
    return WitnessReport("non-minimal-pair", {"n": n, "trials": trials}, checks, seed)


def verify_all(n, seed=0, tol=None):
    """One :class:`WitnessReport` per theorem tag over the fixed family."""
    if not MIN_N <= n <= MAX_N:
        raise DimensionMismatch(f"verify-all supports {MIN_N} <= n <= {MAX_N}, got {n}")
    F = family(n)
    reports = [_classical(n, seed), _defect(n, seed), _duality(n, seed), _columns(n, seed)]

    quads = [(LINF, L1, L2, L2), (L1, L1, L2, L2), (L2, L2, L1, L1), (F[4], F[0], F[5], F[2])]
    reports.append(_merge("extremal-ratio", [
        (_label(*q), T.extremal_ratio_witness(*q, seed=seed, n=n, samples=20)) for q in quads], seed, n))
    reports.append(_monotone(n, seed))

    pairs = list(itertools.permutations(F, 2)) + [(F[0], F[0]), (F[4], F[4])]
    reports.append(_merge("algebra-norm", [
        (_label(d, c), T.algebra_norm_test(d, c, seed, n, samples=20)) for d, c in pairs], seed, n))
    reports.append(_merge("min-algebra-scale", [
        (_label(d, c), T.min_algebra_scale_report(d, c, seed, n, samples=20))
        for d, c in [(L1, LINF), (L2, F[4]), (F[5], F[3]), (F[3], F[3])]], seed, n))

    cong = [((L2, L2), (scaled(3, L2), scaled(5, L2))), ((F[5], F[3]), (F[5], F[3])),
            ((L1, L2), (L2, L2)), ((L1, L1), (F[5], L1))]
    reports.append(_merge("gi-congruence", [
        (f"{_label(*p1)} vs {_label(*p2)}", T.congruence_report(p1, p2, seed, n, trials=20))
        for p1, p2 in cong], seed, n))
    reports.append(_non_minimal(n, seed))

    reports.append(_merge("unitary-invariance", [
        (_label(d, c), T.unitary_invariance_probe(d, c, 20 if d == c == L2 else 200, seed, n))
        for d, c in [(L2, L2), (F[4], L2), (L1, L1), (LINF, L2)]], seed, n))

    cases = []
    for t in range(5):
        g = rng(seed, 150, t)
        A = gaussian_matrix(g, n)
        K = gaussian_matrix(g, n) + 3 * np.eye(n)
        L = gaussian_matrix(g, n) + 3 * np.eye(n)
        base = [(L1, L1), (L2, L2), (L2, LINF), (Lp(3), L1), (LINF, L2)][t]
        cases.append((f"{_label(*base)} #{t}", T.transformed_gind_check(A, K, L, *base, seed=seed)))
    reports.append(_merge("transformed-identity", cases, seed, n))

    reports.append(T.recover_vector_norms(n, "S", 2000, seed).report)
    if tol is not None:
        reports = [r.with_tolerance(tol) for r in reports]
    return reports
