import json
import math

import numpy as np
import pytest

from gind.core import gind, ratio
from gind.errors import BudgetTooSmall, DimensionMismatch, SingularMatrix
from gind.norms import L1, L2, LINF, Lp, Transformed, norm_eval, scaled
from gind.numerics import gaussian_matrix, random_unitary, rng
from gind.report import Check, Witness, WitnessReport
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

D2 = Transformed(np.diag([1.0, 2.0]), L1)


def _reevaluates(rep):
    for w in rep.witnesses:
        back = Witness.from_json(json.loads(json.dumps(w.to_json())))
        if back.claim is not None:
            assert back.reevaluate(rep.seed) == pytest.approx(back.claim, rel=max(rep.tolerance, 1e-12))


def test_check_semantics():
    assert Check("a", 2.0, 2.0 + 1e-7, 1e-7).passed
    assert not Check("a", 2.0, 2.0 + 3e-7, 1e-7).passed
    assert Check("b", 1.0, 0.5, 0.0, "at_most").passed
    assert not Check("c", 1.0, 0.5, 0.0, "at_least").passed
    assert not Check("d", 1.0, float("nan"), 1.0).passed


def test_extremal_example():
    rep = extremal_ratio_witness(LINF, L1, L2, L2, n=2)
    assert rep.passed
    assert rep.predicted == pytest.approx(2.0, rel=1e-9)
    assert rep.achieved == pytest.approx(2.0, rel=1e-6)
    A0 = rep.witnesses[-1].value
    np.testing.assert_allclose(A0, 0.5 * np.ones((2, 2)), atol=1e-9)
    _reevaluates(rep)


def test_extremal_trivial_and_symmetric():
    rep = extremal_ratio_witness(Lp(3), Lp(3), Lp(3), Lp(3), n=3)
    assert rep.predicted == pytest.approx(1.0) and rep.passed
    a = extremal_ratio_witness(L1, L1, L2, L2, n=3)
    b = extremal_ratio_witness(L2, L2, L1, L1, n=3)
    assert a.passed and b.passed
    assert a.predicted == pytest.approx(b.predicted, rel=1e-10)
    assert a.predicted == pytest.approx(
        ratio(L1, L2, n=3).upper * ratio(L2, L1, n=3).upper, rel=1e-12)


@pytest.mark.parametrize("quad", [
    (L1, L2, LINF, L1), (L2, LINF, L1, L2), (LINF, LINF, L1, L2), (scaled(2, L2), L1, D2, LINF),
])
def test_extremal_exact_families(quad):
    rep = extremal_ratio_witness(*quad, n=2, samples=30)
    assert rep.passed
    assert rep.achieved >= rep.predicted * (1 - 1e-5)


def test_extremal_dimension_checks():
    with pytest.raises(DimensionMismatch):
        extremal_ratio_witness(L1, L2, L1, L2)
    with pytest.raises(DimensionMismatch):
        extremal_ratio_witness(D2, L2, L1, L2, n=3)


def test_algebra_true():
    rep = algebra_norm_test(LINF, L1, n=2, samples=300)
    assert rep.verdict is True and rep.passed
    rep = algebra_norm_test(Lp(3), Lp(3), n=3, samples=100)
    assert rep.verdict is True and rep.passed


def test_algebra_counterexample():
    rep = algebra_norm_test(L1, LINF, n=2)
    assert rep.verdict is False and rep.passed
    B, R = algebra_counterexample(L1, LINF, n=2)
    np.testing.assert_allclose(B, np.ones((2, 2)))
    assert R == 2
    assert gind(B, L1, LINF).lower == pytest.approx(1.0, abs=1e-9)
    assert gind(B @ B, L1, LINF).lower == pytest.approx(2.0, abs=1e-9)
    _reevaluates(rep)


@pytest.mark.parametrize("d, c", [(L1, L2), (L2, LINF), (Lp(3), L1), (D2, L1), (scaled(0.5, L2), L2)])
def test_algebra_verdict_matches_ratio(d, c):
    rep = algebra_norm_test(d, c, n=2, samples=50)
    assert rep.passed
    assert rep.verdict is (ratio(d, c, n=2).upper <= 1 + 1e-9)


def test_min_scale():
    assert min_algebra_scale(L1, LINF, n=2) == pytest.approx(2.0, rel=1e-12)
    assert min_algebra_scale(L1, LINF, n=3) == pytest.approx(3.0, rel=1e-12)
    assert min_algebra_scale(Lp(3), Lp(3), n=2) == pytest.approx(1.0)
    assert min_algebra_scale(L2, scaled(2, L2), n=2) == pytest.approx(0.5)
    rep = min_algebra_scale_report(L1, LINF, n=2, samples=100)
    assert rep.passed
    assert rep.details["violation"] > 1.0


def test_min_scale_boundary_at_point_nine():
    rep = min_algebra_scale_report(L1, LINF, n=3, samples=50, below=0.9)
    assert rep.passed
    assert rep.details["violation"] == pytest.approx(1 / 0.9, rel=1e-9)


def test_congruence_scaled_pair():
    v = gi_congruent((L2, L2), (scaled(3, L2), scaled(5, L2)), n=2)
    assert v.congruent
    assert (v.alpha, v.beta) == (pytest.approx(1 / 3), pytest.approx(1 / 5))
    assert v.gamma == pytest.approx(3 / 5, rel=1e-9)
    assert v.gamma == pytest.approx(v.beta / v.alpha, rel=1e-10)
    assert congruence_report((L2, L2), (scaled(3, L2), scaled(5, L2)), n=2, trials=50).passed


def test_congruence_reflexive():
    v = gi_congruent((Lp(3), D2), (Lp(3), D2), n=2)
    assert v.congruent and v.gamma == pytest.approx(1.0)


def test_congruence_separates():
    v = gi_congruent((L1, L2), (L2, L2), n=2)
    assert not v.congruent
    u, w = v.separating_vectors
    ru, rw = (norm_eval(L1, x) / norm_eval(L2, x) for x in (u, w))
    assert sorted([ru, rw]) == [pytest.approx(1.0), pytest.approx(math.sqrt(2))]
    assert congruence_report((L1, L2), (L2, L2), n=2).passed


def test_unitary_probe_invariant():
    rep = unitary_invariance_probe(L2, L2, 100, n=3)
    assert rep.passed and rep.details["max_deviation"] <= 1e-8
    assert unitary_invariance_probe(scaled(2, L2), L2, 30, n=2).passed


def test_unitary_probe_finds_violation():
    rep = unitary_invariance_probe(L1, L1, 200, n=2)
    assert rep.passed and rep.details["max_deviation"] >= 0.4


def test_unitary_probe_hand_example():
    U = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
    E = np.array([[1.0, 0.0], [0.0, 0.0]])
    assert gind(U @ E, L1, L1).lower == pytest.approx(math.sqrt(2))


def test_unitary_probe_no_trials():
    rep = unitary_invariance_probe(L1, L1, 0, n=2)
    assert rep.passed and rep.details["max_deviation"] == 0


def test_transformed_example():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    rep = transformed_gind_check(A, np.diag([1.0, 2.0]), np.eye(2), L1, L1)
    assert rep.passed
    assert rep.details["left"][0] == pytest.approx(4.0)


def test_transformed_scalar_law():
    A = gaussian_matrix(rng(3), 2)
    rep = transformed_gind_check(A, 2 * np.eye(2), 3 * np.eye(2), Lp(3), L2)
    assert rep.passed
    base = gind(A, Lp(3), L2)
    assert rep.details["left"][0] == pytest.approx(1.5 * base.lower, rel=1e-8)


def test_transformed_random():
    for t in range(10):
        g = rng(4, t)
        n = 2 + t % 2
        A, K, L = (gaussian_matrix(g, n) + 2 * np.eye(n) for _ in range(3))
        assert transformed_gind_check(A, K, L, L1, L2).passed
        assert transformed_gind_check(A, K, L, L2, L2).passed


def test_transformed_singular():
    with pytest.raises(SingularMatrix):
        transformed_gind_check(np.eye(2), np.ones((2, 2)), np.eye(2), L1, L1)


def test_recover_spectral():
    rec = recover_vector_norms(2, "S", 2000, seed=0)
    assert rec.lam == pytest.approx(1.0, rel=0.02)
    g = rng(9)
    vals = [rec.nu1_eval(x) / norm_eval(L2, x) for x in gaussian_matrix(g, 10, 2)]
    assert max(vals) / min(vals) <= 1.02
    assert np.mean(vals) == pytest.approx(math.sqrt(2), rel=0.02)
    assert rec.report.passed
    U = random_unitary(2, 5)
    x = gaussian_matrix(g, 2, 1)[:, 0]
    assert rec.nu2_eval(U @ x) / rec.nu1_eval(x) == pytest.approx(1.0, rel=0.05)


def test_recover_other_oracles():
    assert recover_vector_norms(2, "C", 500).report.passed
    rep = recover_vector_norms(2, "sigma", 500).report
    assert rep.details["skipped"] and rep.passed


def test_recover_budget():
    with pytest.raises(BudgetTooSmall):
        recover_vector_norms(2, "S", 99)


def test_report_tolerance_override():
    rep = extremal_ratio_witness(LINF, L1, L2, L2, n=2, samples=5)
    assert isinstance(rep, WitnessReport)
    strict = rep.with_tolerance(0.0)
    assert strict.tolerance == 0.0
    assert json.loads(json.dumps(strict.to_json()))["tolerance"] == 0.0
