"""워프곱 닫힌 형식: ODE 잔차, 오라클 비교, 분기 결손값, 파이버 실현"""

from dataclasses import replace

import numpy as np
import pytest

from services.config.catalog_config import FamilyId
from services.geometry.warped_closed import (
    FiberRealization,
    FiberSpec,
    Profile1D,
    WarpedSMMS,
    branch_probe,
    chart_samples,
    density_from_v,
    lambda_from_warp,
    ode_residuals,
    oracle_compare,
    profile_samples,
    sample_times,
    warped_curvature_closed,
)
from services.helpers.errors import (
    DomainError,
    InsufficientSamples,
    NonPositiveWarp,
    UnrealizableFiber,
)
from services.tables.report_tables import ORACLE_COLUMNS, build_profile_table

WARPED_FAMILIES = [
    FamilyId.EXAMPLE12,
    FamilyId.WEIGHTED_SPHERE,
    FamilyId.WEIGHTED_EUCLIDEAN,
    FamilyId.WEIGHTED_HYPERBOLIC,
    FamilyId.THM41_POSITIVE,
    FamilyId.THM41_ZERO,
    FamilyId.THM41_NEGATIVE,
    FamilyId.EXAMPLE43,
    FamilyId.THM14_3B,
]


def _linear(a, b, name):
    return Profile1D(lambda t: a * t + b, lambda t: a + 0.0 * t, lambda t: 0.0 * t, name=name)


@pytest.mark.parametrize("fid", WARPED_FAMILIES, ids=lambda f: f.value)
def test_catalog_families_solve_the_ode_system(family, fid):
    w = family(fid)
    ts = sample_times(w, 9)
    assert ode_residuals(w, w.lambda_target, ts).sup() <= 1e-9
    assert lambda_from_warp(w, ts) == pytest.approx(w.lambda_target, abs=1e-9)


def test_perturbed_mu_breaks_only_the_scalar_equation(family):
    w = family(FamilyId.THM41_POSITIVE)
    ts = sample_times(w, 5)
    residuals = ode_residuals(replace(w, mu=w.mu + 1e-2), w.lambda_target, ts)
    assert np.max(np.abs(residuals.r1)) <= 1e-9
    assert np.max(np.abs(residuals.r2)) <= 1e-9
    assert np.min(np.abs(residuals.r3)) > 1e-4


@pytest.mark.parametrize("fid", [FamilyId.WEIGHTED_SPHERE, FamilyId.THM41_NEGATIVE, FamilyId.EXAMPLE12])
def test_oracle_matches_closed_forms(family, cfg, fid):
    w = family(fid)
    table = oracle_compare(w, sample_times(w, 3), cfg)
    assert list(table.columns) == ORACLE_COLUMNS
    assert len(table) == 3 * 5
    assert table["rel_error"].max() <= 1e-5


def test_sphere_closed_ricci_is_einstein(family):
    w = family(FamilyId.WEIGHTED_SPHERE, n=4)
    closed = warped_curvature_closed(w, sample_times(w, 5))
    np.testing.assert_allclose(closed.ricci_tt, 3.0, atol=1e-12)
    np.testing.assert_allclose(closed.ricci_fiber_coeff, 3.0, atol=1e-12)


def test_branch_probe_separates_the_two_branches(family):
    sphere = family(FamilyId.WEIGHTED_SPHERE)
    probe = branch_probe(sphere, 0.5, sample_times(sphere, 5))
    assert probe.einstein_defect <= 1e-12
    assert probe.branch2_defect > 1e-3

    ex12 = family(FamilyId.EXAMPLE12)
    probe = branch_probe(ex12, 0.0, sample_times(ex12, 5))
    assert probe.branch2_defect <= 1e-12
    assert probe.einstein_defect > 1e-3
    assert probe.fprime_sq_defect <= 1e-9


def test_branch_probe_needs_three_samples(family):
    w = family(FamilyId.WEIGHTED_SPHERE)
    with pytest.raises(InsufficientSamples):
        branch_probe(w, 0.5, [0.5, 1.0])


def test_profile_table_has_residual_columns(family):
    w = family(FamilyId.THM41_ZERO)
    table = build_profile_table(profile_samples(w, sample_times(w, 4), lam=0.0))
    assert list(table.columns)[-3:] == ["r1", "r2", "r3"]
    assert table[["r1", "r2", "r3"]].abs().to_numpy().max() <= 1e-9


def test_density_from_v_derivatives_match_finite_differences():
    v = Profile1D(lambda t: 2.0 + np.cos(t), lambda t: -np.sin(t), lambda t: -np.cos(t), name="v")
    f = density_from_v(v, 1.5)
    ts = np.linspace(0.2, 2.0, 7)
    exact = Profile1D(f.fn, name="f-fd")
    np.testing.assert_allclose(f(ts), -1.5 * np.log(2.0 + np.cos(ts)))
    np.testing.assert_allclose(f.first(ts), exact.first(ts), atol=1e-8)
    np.testing.assert_allclose(f.second(ts), exact.second(ts), atol=1e-6)


def test_chart_samples_sit_near_the_fiber_origin(family):
    w = family(FamilyId.THM41_POSITIVE)
    points = chart_samples(w, [0.1, 0.2])
    assert len(points) == 2 and all(len(p) == w.n for p in points)
    assert points[0][0] == 0.1


# ---------------------------------------------------------------------------
# Construction errors
# ---------------------------------------------------------------------------


def test_fiber_realization_constraints():
    with pytest.raises(UnrealizableFiber):
        FiberSpec(3, 1.0, FiberRealization.FLAT)
    with pytest.raises(UnrealizableFiber):
        FiberSpec(3, 1.0, FiberRealization.PRODUCT_OF_SURFACES)
    with pytest.raises(UnrealizableFiber):
        FiberSpec(4, 1.0, FiberRealization.PRODUCT_OF_SURFACES, gauss=2.0)
    with pytest.raises(UnrealizableFiber):
        FiberSpec(1, 0.0)
    assert FiberSpec(3, 4.0).sectional_curvature == pytest.approx(2.0)


def test_warped_smms_checks_points():
    w = WarpedSMMS(3, (0.0, 3.0), _linear(1.0, -1.0, "phi"), _linear(0.5, 0.0, "f"), FiberSpec(2, 0.0), m=2.0)
    with pytest.raises(NonPositiveWarp):
        w.check_t(0.5)
    with pytest.raises(DomainError):
        w.check_t(3.5)
    assert float(w.check_t(2.0)) == pytest.approx(2.0)


def test_warped_smms_fiber_dimension_must_match():
    with pytest.raises(UnrealizableFiber):
        WarpedSMMS(4, (0.0, 1.0), _linear(1.0, 1.0, "phi"), _linear(1.0, 0.0, "f"), FiberSpec(2, 0.0), m=1.0)
