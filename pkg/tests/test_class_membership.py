import math
import pytest
from hypothesis import given, settings, strategies as st

from scripts.class_membership import (
    Certificate, ClaimStrength, ConditionId, DiskGrid, Method, SpiralParams, check_sp_sufficient,
    check_ucsp_sufficient, geometric_check, radial_probe_radii, spiral_functional,
)
from scripts.config import CERT_TOL
from scripts.errors import InvalidSpiralParams, ZeroDenominator
from scripts.function_model import CoeffFunction, SignClass, zfprime

coefficient = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("alpha, beta", [(math.pi / 2, 0.0), (-2.0, 0.0), (0.0, 1.0), (0.0, -0.1)])
def test_spiral_params_reject_out_of_range(alpha, beta):
    with pytest.raises(InvalidSpiralParams):
        SpiralParams(alpha=alpha, beta=beta)


def test_spiral_params_in_degrees():
    s = SpiralParams.from_degrees(60.0, 0.25)
    assert s.alpha == pytest.approx(math.pi / 3)
    assert s.rhs == pytest.approx(0.25)


def test_default_grid_reaches_towards_the_boundary():
    grid = DiskGrid.default()
    assert grid.n_angles == 256
    assert max(grid.radii) == pytest.approx(1 - 1e-6)
    assert 0.96 in grid.radii
    assert list(grid.radii) == sorted(grid.radii)
    assert len(grid.points()) == len(grid.radii) * 256
    assert radial_probe_radii(3) == pytest.approx([0.9, 0.99, 0.999])
    with pytest.raises(ValueError):
        DiskGrid(radii=(1.0,), n_angles=4)


def test_certificate_tolerance():
    assert Certificate.build(ConditionId.T1_HH, 1.0 + CERT_TOL / 2, 1.0, Method.CLOSED_FORM).holds
    failing = Certificate.build(ConditionId.T1_HH, 1.0 + 2 * CERT_TOL, 1.0, Method.CLOSED_FORM)
    assert not failing.holds
    assert failing.meta["tol"] == CERT_TOL
    with pytest.raises(ValueError):
        Certificate.build(ConditionId.T1_HH, float("nan"), 1.0, Method.CLOSED_FORM)


def test_relabel_keeps_numbers():
    cert = Certificate.build(ConditionId.T1_HH, 0.5, 1.0, Method.CLOSED_FORM,
                             claim_strength=ClaimStrength.SUFFICIENT)
    relabeled = cert.relabel(ConditionId.T6_G_HH, ClaimStrength.NECESSARY_AND_SUFFICIENT, source="T1_HH")
    assert relabeled.lhs == cert.lhs and relabeled.margin == cert.margin
    assert relabeled.condition_id is ConditionId.T6_G_HH
    assert relabeled.meta["source"] == "T1_HH"
    assert cert.condition_id is ConditionId.T1_HH


def test_coefficient_sum():
    s = SpiralParams(alpha=0.0, beta=0.0)
    f = CoeffFunction(coeffs=(0.1, 0.05), sign_class=SignClass.T)
    cert = check_sp_sufficient(f, s)
    # (4 - 1) 0.1 + (6 - 1) 0.05
    assert cert.lhs == pytest.approx(0.55)
    assert cert.rhs == 1.0
    assert cert.holds
    assert cert.claim_strength is ClaimStrength.NECESSARY_AND_SUFFICIENT
    general = check_sp_sufficient(CoeffFunction(coeffs=(0.1, -0.05)), s)
    assert general.lhs == pytest.approx(0.55)
    assert general.claim_strength is ClaimStrength.SUFFICIENT


@settings(max_examples=100, deadline=None)
@given(st.lists(coefficient, min_size=1, max_size=20),
       st.floats(-1.5, 1.5), st.floats(0.0, 0.99))
def test_ucsp_check_is_sp_check_of_zfprime(coeffs, alpha, beta):
    f = CoeffFunction(coeffs=tuple(coeffs))
    s = SpiralParams(alpha=alpha, beta=beta)
    ucsp = check_ucsp_sufficient(f, s)
    assert ucsp.lhs == check_sp_sufficient(zfprime(f), s).lhs
    assert ucsp.condition_id is ConditionId.LEMMA1_B1


def test_identity_is_in_every_class():
    s = SpiralParams(alpha=0.7, beta=0.3)
    cert = geometric_check(CoeffFunction.identity(4), s)
    assert cert.holds
    assert cert.margin == pytest.approx(s.rhs)
    assert cert.claim_strength is ClaimStrength.REFUTES_ONLY


def test_geometric_check_finds_violation():
    # (t1) lhs = 3 * 0.6 = 1.8 > 1; on the positive axis m(r) -> (1 - 3a)/(1 - a) < 0
    f = CoeffFunction(coeffs=(0.6,), sign_class=SignClass.T)
    cert = geometric_check(f, SpiralParams(alpha=0.0, beta=0.0))
    assert not cert.holds
    re, _ = cert.meta["worst_point"]
    assert re > 0.5


def test_printed_modulus_differs_from_standard():
    s = SpiralParams(alpha=0.0, beta=0.0)
    identity = CoeffFunction.identity(4)
    assert geometric_check(identity, s).holds
    # literal |z f'/f' - 1| = |z - 1| exceeds 1 near z = -1
    assert not geometric_check(identity, s, modulus="printed").holds
    with pytest.raises(ValueError):
        spiral_functional(identity, s, DiskGrid.radial_probe().points(), modulus="other")


def test_zero_of_f_inside_the_disk():
    f = CoeffFunction(coeffs=(2.0,))  # z + 2z^2 vanishes at z = -1/2
    with pytest.raises(ZeroDenominator) as info:
        geometric_check(f, SpiralParams(alpha=0.0, beta=0.0), DiskGrid(radii=(0.5,), n_angles=2))
    assert info.value.point == pytest.approx(-0.5)


def test_t_class_necessity_claimed_only_at_zero_aperture():
    f = CoeffFunction(coeffs=(0.1, 0.05), sign_class=SignClass.T)
    straight = check_sp_sufficient(f, SpiralParams(alpha=0.0, beta=0.2))
    assert straight.claim_strength is ClaimStrength.NECESSARY_AND_SUFFICIENT
    assert "notes" not in straight.meta
    rotated = check_ucsp_sufficient(f, SpiralParams(alpha=-0.4, beta=0.2))
    assert rotated.claim_strength is ClaimStrength.PAPER_CLAIMS_IFF_SEE_NOTES
    assert "alpha = 0" in rotated.meta["notes"]
