"""가중 곡률: 골든 성분, 가중 Einstein/조화 잔차, m = 1의 μ 비의존성, 형식적 워프곱"""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.catalog.families import build_family, family_samples, resolve_params
from services.config.catalog_config import FamilyId
from services.geometry.tensor_core import FDConfig, curvature_bundle
from services.geometry.warped_closed import warped_chart
from services.geometry.weighted import (
    Branch,
    SMMSChart,
    bakry_emery_ricci,
    condition_report,
    formal_warped_product,
    unweighted_weyl_harmonicity,
    weighted_fields_array,
    weighted_scalar_curvature,
    weighted_schouten,
    weighted_weyl,
    weighted_weyl_divergence,
)
from services.helpers.errors import InsufficientSamples, NonIntegerM, ParamConstraintViolation

REPORT_TOL = 1e-4


# ---------------------------------------------------------------------------
# Non-Einstein family (m = 1/2)
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5])
def test_example12_weyl_goldens(family, cfg, n):
    s = warped_chart(family(FamilyId.EXAMPLE12, n=n))
    point = (1.0,) + (0.0,) * (n - 1)
    W = weighted_weyl(s, point, cfg)
    assert W[0, 1, 0, 1] == pytest.approx((n - 2) / (n - 1) ** 2, abs=1e-6)
    assert W[1, 2, 1, 2] == pytest.approx(-1.0 / (n - 1) ** 2, abs=1e-6)
    assert curvature_bundle(s.chart, point, cfg).scalar == pytest.approx((n - 2) / (n - 1), abs=1e-6)


def test_example12_report_is_weighted_einstein_but_not_einstein(family, cfg):
    w = family(FamilyId.EXAMPLE12)
    report = condition_report(warped_chart(w), family_samples(w, 3), cfg, tol=REPORT_TOL)
    assert report.einstein_residual <= 1e-5
    assert report.harmonic_residual <= REPORT_TOL
    assert report.lambda_fit == pytest.approx(0.0, abs=1e-6)
    assert report.ricci_einstein_residual > 1e-2
    assert report.branch is Branch.NON_EINSTEIN_EXAMPLE12
    assert list(report.table["sample"]) == [0, 1, 2]


# ---------------------------------------------------------------------------
# Counterexamples (weighted Einstein, Weyl not weighted harmonic)
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0])
def test_counterexample31_divergence_golden(family, cfg, m):
    s = family(FamilyId.COUNTEREXAMPLE31, m=m)
    delta_w = weighted_weyl_divergence(s, (1.0, 0.0, 0.0, 0.0), cfg)
    assert delta_w[1, 0, 1] == pytest.approx(2.0 * m * (2.0 * m ** 2 + m - 1.0), abs=1e-5)


def test_counterexample31_identity_holds_while_harmonicity_fails(family, cfg):
    s = family(FamilyId.COUNTEREXAMPLE31, m=1.0)
    report = condition_report(s, family_samples(s, 3), cfg, tol=REPORT_TOL)
    assert report.einstein_residual <= 1e-5
    assert report.harmonic_residual > 1e-2
    assert report.identity_residual <= REPORT_TOL
    assert report.branch is Branch.INDETERMINATE


def test_counterexample32_divergence_golden(family, cfg):
    s = family(FamilyId.COUNTEREXAMPLE32)
    delta_w = weighted_weyl_divergence(s, (1.0, 0.0, 0.0), cfg)
    assert delta_w[1, 0, 1] == pytest.approx(4.0 * (math.sqrt(6.0) - 3.0) / 9.0, abs=1e-5)


def test_counterexample31_bakry_emery_ricci_is_proportional_to_metric(family, cfg):
    s = family(FamilyId.COUNTEREXAMPLE31, m=1.0)
    rho = bakry_emery_ricci(s, (1.0, 0.0, 0.0, 0.0), cfg).components
    np.testing.assert_allclose(rho, -5.0 * np.eye(4), atol=1e-6)


# ---------------------------------------------------------------------------
# m = 1 and construction rules
# ---------------------------------------------------------------------------


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False))
def test_mu_is_ignored_when_m_is_one(mu):
    cfg = FDConfig()
    s = build_family(FamilyId.COUNTEREXAMPLE31, resolve_params(FamilyId.COUNTEREXAMPLE31, {"m": 1.0}))
    other = replace(s, mu=mu)
    pts = np.array(family_samples(s, 3))
    J0 = weighted_fields_array(s, pts, cfg).J
    J1 = weighted_fields_array(other, pts, cfg).J
    np.testing.assert_array_equal(J0, J1)


def test_mu_enters_scalar_when_m_is_not_one(family, cfg):
    s = family(FamilyId.COUNTEREXAMPLE31, m=2.0)
    other = replace(s, mu=1.0)
    pts = np.array(family_samples(s, 3))
    assert np.all(weighted_fields_array(other, pts, cfg).J != weighted_fields_array(s, pts, cfg).J)


def test_smms_rejects_constant_density_and_bad_m(unit_sphere_3d):
    with pytest.raises(ParamConstraintViolation):
        SMMSChart(unit_sphere_3d, None, 1.0)
    with pytest.raises(ParamConstraintViolation):
        SMMSChart(unit_sphere_3d, lambda p: p[..., 0], 0.0)
    s = SMMSChart(unit_sphere_3d, None, 1.0, allow_constant_density=True)
    assert np.all(s.v(np.zeros((2, 3))) == 1.0)


def test_report_needs_three_samples(family, cfg):
    s = family(FamilyId.COUNTEREXAMPLE32)
    with pytest.raises(InsufficientSamples):
        condition_report(s, family_samples(s, 3)[:2], cfg)


# ---------------------------------------------------------------------------
# Formal warped product
# ---------------------------------------------------------------------------


def test_formal_warped_product_of_quasi_einstein_family_is_einstein(family, cfg):
    w = family(FamilyId.THM41_POSITIVE, c1=1.0, c2=1.0, c4=1.0, quasi_einstein_choice=True)
    total = formal_warped_product(warped_chart(w), 2)
    assert total.dim == 6
    p = (0.1, 0.05, -0.03, 0.02, 0.1, -0.2)
    bundle = curvature_bundle(total, p, cfg)
    g = total.metric(np.array(p))
    np.testing.assert_allclose(bundle.ricci.components, 5.0 * g, atol=1e-5)


def test_formal_warped_product_requires_integer_m(family):
    s = warped_chart(family(FamilyId.EXAMPLE12))
    with pytest.raises(NonIntegerM):
        formal_warped_product(s, 1)


def test_formal_warped_product_of_counterexample_is_not_einstein(family, cfg):
    s = family(FamilyId.COUNTEREXAMPLE31, m=3.0)
    total = formal_warped_product(s, 3)
    p = np.array((1.0,) + (0.0,) * 6)
    bundle = curvature_bundle(total, p, cfg)
    traceless = bundle.ricci.components - (bundle.scalar / 7.0) * total.metric(p)
    assert np.max(np.abs(traceless)) > 1e-2


def test_weighted_harmonic_without_weighted_einstein(family, cfg):
    w = replace(family(FamilyId.EXAMPLE12, n=4), m=2.0, mu=1.0)
    s = warped_chart(w)
    delta_w = weighted_weyl_divergence(s, (1.0, 0.0, 0.0, 0.0), cfg)
    np.testing.assert_allclose(delta_w.components, 0.0, atol=1e-5)
    report = condition_report(s, family_samples(w, 3), cfg, tol=REPORT_TOL)
    assert report.einstein_residual > 1e-3


def test_formal_warped_product_recovers_weighted_curvature(family, cfg):
    s = warped_chart(family(FamilyId.THM41_POSITIVE))
    total = formal_warped_product(s, 2)
    p = np.array((0.1, 0.05, -0.03, 0.02, 0.1, -0.2))
    bundle = curvature_bundle(total, p, cfg)
    base = p[:4]
    assert bundle.scalar == pytest.approx(weighted_scalar_curvature(s, base, cfg), rel=1e-4)
    np.testing.assert_allclose(
        bundle.ricci.components[:4, :4], bakry_emery_ricci(s, base, cfg).components, atol=1e-4
    )


# ---------------------------------------------------------------------------
# Einstein branch: GQE constant and unweighted Weyl harmonicity
# ---------------------------------------------------------------------------


def test_both_forms_of_the_gqe_constant_agree(family, cfg):
    w = family(FamilyId.WEIGHTED_SPHERE)
    s = warped_chart(w)
    for point in family_samples(w, 3):
        scalars = weighted_schouten(s, point, cfg, lam=0.5).scalars
        assert scalars.alpha_alt == pytest.approx(scalars.alpha, abs=1e-5)
    assert weighted_schouten(s, point, cfg).scalars.alpha is None

    report = condition_report(s, family_samples(w, 3), cfg, tol=REPORT_TOL)
    assert report.gqe_residual <= 1e-5


def test_gqe_residual_scales_the_einstein_residual(family, cfg):
    """ρ_f^m − α g = (n+m−2)(P_f^m − λ g)"""
    w = replace(family(FamilyId.EXAMPLE12, n=4), m=2.0, mu=1.0)
    report = condition_report(warped_chart(w), family_samples(w, 3), cfg, tol=REPORT_TOL)
    assert report.einstein_residual > 1e-3
    assert report.gqe_residual == pytest.approx(4.0 * report.einstein_residual, rel=1e-6)


@pytest.mark.parametrize("fid", [FamilyId.WEIGHTED_SPHERE, FamilyId.THM41_POSITIVE])
def test_einstein_branch_weyl_is_harmonic_and_orthogonal_to_grad_f(family, cfg, fid):
    w = family(fid)
    delta_w, interior_w = unweighted_weyl_harmonicity(warped_chart(w), family_samples(w, 3), cfg)
    assert delta_w <= 1e-4
    assert interior_w <= 1e-4
