"""Acceptance criteria, one test each, with their tolerances and time budgets.

Every test prints a ``PASS``/``FAIL`` line, repeated in the terminal summary.
"""

import contextlib
import io
import itertools
import json
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, grid_oracle_real
from gind import L1, L2, LINF, Lp, scaled
from gind.cli import run
from gind.core import EXACT_SIGN_ENUM, classical_norms, gind, submult_defect
from gind.numerics import gaussian_matrix, random_unitary, rng
from gind.theorems import (
    algebra_counterexample,
    algebra_norm_test,
    congruence_report,
    extremal_ratio_witness,
    gi_congruent,
    min_algebra_scale,
    min_algebra_scale_report,
    recover_vector_norms,
    transformed_gind_check,
    unitary_invariance_probe,
)
from gind.verify import _non_minimal


class Criterion:
    """Collects named conditions and the wall time of one criterion."""

    def __init__(self, number, title, budget_s):
        self.number, self.title, self.budget = number, title, budget_s
        self.failures = []

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if elapsed > self.budget:
            self.failures.append(f"runtime {elapsed:.1f}s > {self.budget}s")
        status = "FAIL" if self.failures else "PASS"
        line = f"{status} [{self.number:2d}] {self.title} ({elapsed:.2f}s / {self.budget}s)"
        if self.failures:
            line += ": " + "; ".join(self.failures)
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert not self.failures, line


def close(a, b, rtol):
    return abs(a - b) <= rtol * abs(b)


def test_01_classical_agreement():
    with Criterion(1, "classical norms are induced by l1, l2, linf", 10) as c:
        for t in range(100):
            A = gaussian_matrix(rng(1, t), 3)
            ref = classical_norms(A)
            for d, v in ((L1, ref.C), (L2, ref.S)):
                r = gind(A, d, d)
                c.check(close(r.lower, v, 1e-8) and close(r.upper, v, 1e-8), f"complex #{t}")
            Ar = gaussian_matrix(rng(2, t), 3, complex_=False)
            r = gind(Ar, LINF, LINF)
            c.check(r.method == EXACT_SIGN_ENUM, f"real #{t} method {r.method}")
            c.check(close(r.lower, classical_norms(Ar).R, 1e-8), f"real #{t}")


def test_02_max_entry_defect():
    with Criterion(2, "max-entry norm is not submultiplicative", 5) as c:
        J = np.ones((2, 2))
        c.check(close(classical_norms(J).m, 1.0, 1e-12), "||J||_m")
        c.check(close(classical_norms(J @ J).m, 2.0, 1e-12), "||J^2||_m")
        c.check(submult_defect("m", 2, 100).value >= 2.0, "defect(m)")
        c.check(submult_defect("sigma", 2, 1000).value <= 1 + 1e-9, "defect(sigma)")


def test_03_extremal_ratio():
    with Criterion(3, "extremal ratio for (linf, l1, l2, l2)", 5) as c:
        rep = extremal_ratio_witness(LINF, L1, L2, L2, seed=0, n=2, samples=100)
        c.check(close(rep.predicted, 2.0, 1e-6), f"predicted {rep.predicted}")
        c.check(close(rep.achieved, 2.0, 1e-6), f"achieved {rep.achieved}")
        sampled = [k for k in rep.checks if k.name.startswith("sampled")]
        c.check(len(sampled) == 1 and sampled[0].tolerance <= 1e-8, "sample check present")
        c.check(rep.passed, "report checks")


def test_04_algebra_norm():
    with Criterion(4, "algebra norm iff R <= 1", 10) as c:
        rep = algebra_norm_test(LINF, L1, seed=0, n=2, samples=1000)
        c.check(rep.verdict is True and rep.passed, "(linf, l1) submultiplicative")
        rep = algebra_norm_test(L1, LINF, seed=0, n=2)
        B, _ = algebra_counterexample(L1, LINF, 0, 2)
        c.check(rep.verdict is False and rep.passed, "(l1, linf) counterexample")
        c.check(close(gind(B, L1, LINF).lower, 1.0, 1e-9), "||B|| = 1")
        c.check(close(gind(B @ B, L1, LINF).lower, 2.0, 1e-9), "||B^2|| = 2")


def test_05_min_algebra_scale():
    with Criterion(5, "minimal algebra scale is R", 5) as c:
        for n in (2, 3):
            c.check(close(min_algebra_scale(L1, LINF, 0, n), float(n), 1e-8), f"lambda at n={n}")
            rep = min_algebra_scale_report(L1, LINF, 0, n, samples=100, below=0.99)
            c.check(rep.details["violation"] > 1.0, f"0.99 n violates at n={n}")
            c.check(rep.passed, f"report at n={n}")


def test_06_congruence():
    with Criterion(6, "gi-congruence classes are rescalings", 10) as c:
        p1, p2 = (L2, L2), (scaled(3, L2), scaled(5, L2))
        v = gi_congruent(p1, p2, 0, 2)
        c.check(v.congruent, "rescaled l2 pair congruent")
        c.check(v.congruent and close(v.gamma, 3 / 5, 1e-9), f"gamma {v.gamma}")
        rep = congruence_report(p1, p2, 0, 2, trials=200)
        c.check(rep.passed, "gamma confirmed on 200 matrices")
        v = gi_congruent((L1, L2), (L2, L2), 0, 2)
        c.check(not v.congruent and v.separating_vectors is not None, "(l1, l2) vs (l2, l2) separated")
        c.check(congruence_report((L1, L2), (L2, L2), 0, 2).passed, "separating vectors differ")


def test_07_unitary_invariance():
    with Criterion(7, "unitary invariance iff both norms are", 10) as c:
        rep = unitary_invariance_probe(L2, L2, trials=100, seed=0, n=3)
        c.check(rep.details["max_deviation"] <= 1e-8, f"(l2, l2) dev {rep.details['max_deviation']}")
        rep = unitary_invariance_probe(L1, L1, trials=200, seed=0, n=2)
        c.check(rep.details["max_deviation"] >= 0.4, f"(l1, l1) dev {rep.details['max_deviation']}")


def test_08_transformed_identity():
    bases = [(L1, L1), (L2, L2), (L1, LINF), (L1, Lp(3)), (L1, L2)]
    with Criterion(8, "transformed norms give L A K^-1", 10) as c:
        for n in (2, 3):
            for t in range(50):
                g = rng(8, n, t)
                A = gaussian_matrix(g, n)
                K = gaussian_matrix(g, n) + 3 * np.eye(n)
                L = gaussian_matrix(g, n) + 3 * np.eye(n)
                rep = transformed_gind_check(A, K, L, *bases[t % len(bases)])
                c.check(rep.passed, f"n={n} #{t}")


def test_09_non_minimal():
    with Criterion(9, "g-ind norms need not be minimal", 5) as c:
        rep = _non_minimal(2, 0, trials=100)
        by_name = {k.name: k for k in rep.checks}
        c.check(close(by_name["||I|| via (l2, 2 l2)"].achieved, 2.0, 1e-8), "(l2, 2 l2)")
        c.check(close(by_name["||I|| via (linf, 2 l2)"].achieved, 2 * np.sqrt(2), 1e-8), "(linf, 2 l2)")
        c.check(by_name["domination ratio"].passed, "domination")


def test_10_norm_recovery():
    with Criterion(10, "spectral norm recovery", 60) as c:
        rec = recover_vector_norms(2, "S", budget=10_000, seed=0)
        X = gaussian_matrix(rng(10), 50, 2)
        nu1 = np.array([rec.nu1_eval(x) for x in X])
        r = nu1 / np.linalg.norm(X, axis=1)
        c.check(r.max() / r.min() - 1 <= 0.02, f"nu1/l2 spread {r.max() / r.min() - 1:.4f}")
        for t in range(20):
            U = random_unitary(2, 1000 + t)
            v = max(rec.nu2_eval(U @ x) / v1 for x, v1 in zip(X, nu1))
            c.check(abs(v - 1) <= 0.05, f"unitary #{t} -> {v:.4f}")


def test_11_grid_oracle():
    specs = [L1, L2, LINF, Lp(3)]
    with Criterion(11, "real 2x2 gind matches angular sweep", 30) as c:
        for t in range(20):
            A = gaussian_matrix(rng(11, t), 2, complex_=False)
            for d, e in itertools.product(specs, repeat=2):
                r = gind(A, d, e, real=True)
                ref = grid_oracle_real(A, d, e, 10_000)
                c.check(abs(r.lower - ref) <= 1e-3 * ref, f"#{t} lower vs sweep")
                c.check(ref <= r.upper * (1 + 1e-12), f"#{t} sweep within upper")


def _verify_all_json():
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = run(["verify-all", "--n", "2", "--seed", "0", "--format", "json"])
    return code, json.loads(buf.getvalue())


def test_12_verify_all():
    with Criterion(12, "verify-all --n 2 --seed 0", 120) as c:
        code, first = _verify_all_json()
        reports = first["result"]["reports"]
        c.check(code == 0, f"exit {code}")
        c.check(len({r["theorem"] for r in reports}) >= 10, "at least 10 tags")
        c.check(all(r["passed"] for r in reports), "all passed")
        _, second = _verify_all_json()
        first.pop("runtime_ms"), second.pop("runtime_ms")
        c.check(json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True), "byte-identical")
