import math
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from scripts.bessel import BesselParams
from scripts.class_membership import ClaimStrength, ConditionId, SpiralParams, check_sp_sufficient
from scripts.errors import RegimeViolation, SignViolation
from scripts.function_model import CoeffFunction, SignClass
from scripts.oracle import (
    CompensatedSum, closed_form_mp, compare, derivative_dual_route, direct_sum_mp, direct_sum_sp,
    direct_sum_ucsp, refute_on_disk, weighted_series,
)
from scripts.theorems import thm1_lhs, thm3_lhs

regime = {
    "c": st.floats(-8.0, -0.01),
    "kappa": st.floats(0.1, 10.0),
    "alpha": st.floats(-1.56, 1.56),
    "beta": st.floats(0.0, 0.99),
}


@settings(max_examples=300, deadline=None)
@given(**regime)
def test_sp_sum_matches_closed_form(c, kappa, alpha, beta):
    assume(math.cos(alpha) > beta)
    p, s = BesselParams(c=c, kappa=kappa), SpiralParams(alpha=alpha, beta=beta)
    closed = thm1_lhs(p, s)[0]
    assert abs(direct_sum_sp(p, s) - closed) <= 1e-10 * (1 + abs(closed))


@settings(max_examples=300, deadline=None)
@given(**regime)
def test_ucsp_sum_matches_closed_form(c, kappa, alpha, beta):
    assume(math.cos(alpha) > beta)
    p, s = BesselParams(c=c, kappa=kappa), SpiralParams(alpha=alpha, beta=beta)
    closed = thm3_lhs(p, s)[0]
    assert abs(direct_sum_ucsp(p, s) - closed) <= 1e-10 * (1 + abs(closed))


@settings(max_examples=200, deadline=None)
@given(st.floats(-8.0, 0.0), st.floats(0.1, 10.0), st.sampled_from([1, 2]))
def test_derivative_routes_agree(c, kappa, order):
    report = derivative_dual_route(BesselParams(c=c, kappa=kappa), order)
    assert report.verdict, report
    assert report.target_id == f"LEMMA3_ORDER{order}"
    assert report.tolerance == 1e-12


def test_derivative_route_rejects_positive_c():
    with pytest.raises(RegimeViolation):
        derivative_dual_route(BesselParams(c=1.0, kappa=1.0), 1)
    with pytest.raises(ValueError):
        derivative_dual_route(BesselParams(c=-1.0, kappa=1.0), 3)


def test_direct_sums_need_theorem_regime():
    with pytest.raises(RegimeViolation):
        direct_sum_sp(BesselParams(c=1.0, kappa=1.0), SpiralParams(alpha=0.0, beta=0.0))


def test_extended_precision_agrees():
    p, s = BesselParams(c=-1.0, kappa=1.0), SpiralParams(alpha=0.2, beta=0.1)
    closed = thm1_lhs(p, s)[0]
    assert float(closed_form_mp(ConditionId.T1_HH, p, s)) == pytest.approx(closed, rel=1e-14)
    assert float(direct_sum_mp(p, s)) == pytest.approx(closed, rel=1e-14)
    assert float(direct_sum_mp(p, s, ucsp=True)) == pytest.approx(thm3_lhs(p, s)[0], rel=1e-14)
    with pytest.raises(ValueError):
        closed_form_mp(ConditionId.T5_D3, p, s)


def test_compensated_sum():
    acc = CompensatedSum()
    for value in (1e16, 1.0, -1e16):
        acc.add(value)
    assert acc.value == 1.0


def test_weighted_series_reproduces_i0():
    # unit weight, kappa = 1, y = 1: sum 1/(k!)^2 = I_0(2)
    value, used, tail = weighted_series(1.0, 1.0, lambda k: 1.0, 0)
    assert value == pytest.approx(2.2795853023360673, rel=1e-15)
    assert tail <= 1e-14 and used > 5


def test_compare_escalates_on_miss():
    report = compare("X", 1.0, 1.5, N_used=3, escalate=lambda: 1.0)
    assert report.escalated and report.verdict
    assert report.brute_force == 1.0
    plain = compare("X", 1.0, 1.5, N_used=3)
    assert not plain.verdict and not plain.escalated
    assert plain.rel_diff == pytest.approx(0.25)


def _t_function(weights, alpha, beta, offset):
    """T-class a_2.. scaled so the coefficient sum sits at rhs + offset."""
    s = SpiralParams(alpha=alpha, beta=beta)
    raw = check_sp_sufficient(CoeffFunction(coeffs=tuple(weights), sign_class=SignClass.T), s).lhs
    scale = (s.rhs + offset) / raw
    return CoeffFunction(coeffs=tuple(w * scale for w in weights), sign_class=SignClass.T), s


def test_refutation_follows_coefficient_margin():
    rng = np.random.default_rng(17)
    for _ in range(20):
        weights = rng.uniform(0.0, 1.0, 3)
        beta = float(rng.uniform(0.0, 0.9))
        failing, s = _t_function(weights, 0.0, beta, 0.1)
        assert check_sp_sufficient(failing, s).margin < -0.05
        report = refute_on_disk(failing, s)
        assert report.verdict, report.detail
        assert report.tolerance is None

        passing, s = _t_function(weights, 0.0, beta, -0.1)
        assert check_sp_sufficient(passing, s).margin > 0.05
        assert not refute_on_disk(passing, s).verdict


def test_refutation_needs_t_class():
    with pytest.raises(SignViolation):
        refute_on_disk(CoeffFunction(coeffs=(0.1,)), SpiralParams(alpha=0.0, beta=0.0))


def test_refutation_looks_past_a_zero_inside_the_disk():
    # z - 2z^2 vanishes at 1/2; beyond the zero the positive axis satisfies the inequality
    f = CoeffFunction(coeffs=(2.0,), sign_class=SignClass.T)
    s = SpiralParams(alpha=0.0, beta=0.0)
    assert check_sp_sufficient(f, s).margin == pytest.approx(-5.0)
    report = refute_on_disk(f, s)
    assert report.verdict, report.detail
    assert "default grid" in report.detail


def test_rotated_aperture_failure_is_not_refuted():
    # at alpha = 1.2, |z f'/f - 1| <= a/(1-a) keeps m(z) >= cos(alpha) - 2a/(1-a) > 0
    s = SpiralParams(alpha=1.2, beta=0.0)
    a = (s.rhs + 0.1) / (4 - s.cos_alpha)
    f = CoeffFunction(coeffs=(a,), sign_class=SignClass.T)
    t1 = check_sp_sufficient(f, s)
    assert t1.margin == pytest.approx(-0.1)
    assert t1.claim_strength is ClaimStrength.PAPER_CLAIMS_IFF_SEE_NOTES
    assert not refute_on_disk(f, s).verdict
