"""패밀리 카탈로그: 파라미터 제약, 강제값, κ 기대값, 골든 성분, 임의 파라미터"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.catalog.families import (
    DEFAULT_PARAMS,
    FamilyParams,
    build_family,
    family_expected,
    family_samples,
    is_chart_only,
    list_families,
    random_params,
    resolve_params,
)
from services.config.catalog_config import FAMILY_SLUGS, FamilyId, family_from_slug, slug_for_family
from services.geometry.tensor_core import curvature_bundle, schouten_weyl
from services.geometry.warped_closed import WarpedSMMS, ode_residuals, sample_times, warped_chart
from services.geometry.weighted import SMMSChart, condition_report, weighted_schouten
from services.helpers.errors import ParamConstraintViolation, UnknownFamily


def _violation(fid, **overrides):
    with pytest.raises(ParamConstraintViolation) as info:
        build_family(fid, resolve_params(fid, overrides))
    return info.value.clause


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


def test_every_family_builds_with_defaults():
    for fid in FamilyId:
        built = build_family(fid, resolve_params(fid))
        assert isinstance(built, SMMSChart if is_chart_only(fid) else WarpedSMMS)


def test_slugs_round_trip_and_unknown_slug():
    for fid in FamilyId:
        assert family_from_slug(slug_for_family(fid)) is fid
    with pytest.raises(UnknownFamily):
        family_from_slug("no-such-family")
    assert [slug for slug, _ in list_families()] == [FAMILY_SLUGS[fid] for fid in FamilyId]


def test_params_mapping_uses_symbol_names():
    params = FamilyParams.from_mapping({"n": 5.0, "lambda": -0.5, "kappa": 3.0, "A": 1.0})
    assert params.n == 5 and isinstance(params.n, int)
    assert params.lam == -0.5
    assert params.to_dict() == {"n": 5, "m": 2.0, "lambda": -0.5, "A": 1.0}


def test_overrides_replace_defaults_and_ignore_none():
    params = resolve_params(FamilyId.WEIGHTED_SPHERE, {"A": 3.0, "B": None})
    assert params.A == 3.0
    assert params.B == DEFAULT_PARAMS[FamilyId.WEIGHTED_SPHERE]["B"]


@pytest.mark.parametrize(
    "fid, overrides, clause",
    [
        (FamilyId.WEIGHTED_SPHERE, {"A": 1.0, "B": 1.0}, "A>|B|"),
        (FamilyId.WEIGHTED_SPHERE, {"lambda": -0.5}, "lambda > 0"),
        (FamilyId.THM14_3B, {"A": 2.0, "B": 1.0, "C": 1.0}, "AC<=B"),
        (FamilyId.EXAMPLE12, {"m": 1.0}, "m = 1/2"),
        (FamilyId.COUNTEREXAMPLE31, {"n": 5}, "n = 4"),
        (FamilyId.THM41_POSITIVE, {"lambda": -0.5}, "lambda > 0"),
        (FamilyId.THM41_NEGATIVE, {"c1": -1.0, "c2": 0.5}, "c1 + c2 > 0"),
        (FamilyId.EXAMPLE43, {"n": 4}, "n = 5"),
        (FamilyId.WEIGHTED_EUCLIDEAN, {"n": 2}, "n >= 3"),
    ],
)
def test_constraint_violations_name_the_clause(fid, overrides, clause):
    assert _violation(fid, **overrides) == clause


def test_incomplete_sphere_is_allowed_only_on_request():
    assert _violation(FamilyId.WEIGHTED_SPHERE, A=1.0, B=1.0) == "A>|B|"
    w = build_family(FamilyId.WEIGHTED_SPHERE, resolve_params(FamilyId.WEIGHTED_SPHERE,
                                                              {"A": 1.0, "B": 1.0, "incomplete_ok": True}))
    assert w.interval[1] < math.pi
    expected = family_expected(FamilyId.WEIGHTED_SPHERE, resolve_params(
        FamilyId.WEIGHTED_SPHERE, {"A": 1.0, "B": 1.0, "incomplete_ok": True}))
    assert expected.sub_case == "standard-weighted-sphere"
    assert expected.complete is False


# ---------------------------------------------------------------------------
# Forced values and kappa
# ---------------------------------------------------------------------------


def test_forced_mu_values():
    sphere = build_family(FamilyId.WEIGHTED_SPHERE, resolve_params(FamilyId.WEIGHTED_SPHERE))
    assert sphere.mu == pytest.approx(2.0 * 0.5 * (1.0 - 4.0))
    euclid = build_family(FamilyId.WEIGHTED_EUCLIDEAN, resolve_params(FamilyId.WEIGHTED_EUCLIDEAN))
    assert euclid.mu == pytest.approx(-4.0)
    warped = build_family(FamilyId.THM14_3B, resolve_params(FamilyId.THM14_3B))
    assert warped.mu == pytest.approx(1.0)
    assert warped.fiber.beta == 0.0


def test_m_equal_one_leaves_mu_to_the_user():
    params = resolve_params(FamilyId.WEIGHTED_SPHERE, {"m": 1.0, "mu": 7.0})
    assert build_family(FamilyId.WEIGHTED_SPHERE, params).mu == 7.0
    assert family_expected(FamilyId.WEIGHTED_SPHERE, params).mu_forced is None


@pytest.mark.parametrize(
    "fid, kappa",
    [
        (FamilyId.WEIGHTED_SPHERE, 2.0 * 0.5 * 2.0),
        (FamilyId.WEIGHTED_EUCLIDEAN, 2.0),
        (FamilyId.WEIGHTED_HYPERBOLIC, 2.0 * -0.5 * 1.0),
    ],
)
def test_space_form_kappa_matches_the_report(fid, kappa, cfg):
    params = resolve_params(fid)
    assert family_expected(fid, params).kappa == pytest.approx(kappa)
    w = build_family(fid, params)
    report = condition_report(warped_chart(w), family_samples(w, 3), cfg, tol=1e-4)
    assert report.kappa == pytest.approx(kappa, abs=1e-5)
    assert report.kappa_spread <= 1e-5


def test_quasi_einstein_choice_has_zero_kappa(cfg):
    params = resolve_params(
        FamilyId.THM41_NEGATIVE, {"c1": 0.5, "c2": 1.0, "c4": 0.3, "quasi_einstein_choice": True}
    )
    assert family_expected(FamilyId.THM41_NEGATIVE, params).kappa == 0.0
    w = build_family(FamilyId.THM41_NEGATIVE, params)
    report = condition_report(warped_chart(w), family_samples(w, 3), cfg, tol=1e-4)
    assert report.kappa == pytest.approx(0.0, abs=1e-5)
    assert report.quasi_einstein


def test_hyperbolic_family_with_zero_a_is_quasi_einstein(cfg):
    params = resolve_params(FamilyId.WEIGHTED_HYPERBOLIC, {"A": 0.0})
    assert family_expected(FamilyId.WEIGHTED_HYPERBOLIC, params).kappa == 0.0
    w = build_family(FamilyId.WEIGHTED_HYPERBOLIC, params)
    report = condition_report(warped_chart(w), family_samples(w, 3), cfg, tol=1e-4)
    alphas = report.table["alpha"].to_numpy()
    assert report.quasi_einstein
    assert report.kappa == pytest.approx(0.0, abs=1e-5)
    assert np.max(np.abs(alphas - alphas.mean())) <= 1e-6


# ---------------------------------------------------------------------------
# Golden components
# ---------------------------------------------------------------------------


def test_example43_unweighted_weyl_goldens(cfg):
    params = resolve_params(FamilyId.EXAMPLE43)
    w = build_family(FamilyId.EXAMPLE43, params)
    expected = family_expected(FamilyId.EXAMPLE43, params)
    assert len(expected.golden_components) == 3
    chart = warped_chart(w).chart
    for golden in expected.golden_components:
        W = schouten_weyl(chart, golden.point, cfg)[1]
        assert W[golden.index] == pytest.approx(golden.value, abs=1e-6), golden.name


@pytest.mark.parametrize("fid", [FamilyId.THM41_POSITIVE, FamilyId.THM41_ZERO, FamilyId.THM41_NEGATIVE])
def test_four_dimensional_families_are_conformally_flat(cfg, fid):
    w = build_family(fid, resolve_params(fid))
    chart = warped_chart(w).chart
    for point in family_samples(w, 3):
        W = schouten_weyl(chart, point, cfg)[1]
        assert np.max(np.abs(W.components)) <= 1e-4


def test_example12_goldens_scale_with_parameters():
    params = resolve_params(FamilyId.EXAMPLE12, {"A": 2.0, "B": 3.0})
    goldens = {g.index: g.value for g in family_expected(FamilyId.EXAMPLE12, params).golden_components}
    phi1 = 2.0 * 3.0 ** (1.0 / 3.0)
    assert goldens[(0, 1, 0, 1)] == pytest.approx(2.0 * phi1 ** 2 / 9.0)
    assert goldens[(1, 2, 1, 2)] == pytest.approx(-phi1 ** 4 / 9.0)


def test_counterexample_goldens():
    ce31 = family_expected(FamilyId.COUNTEREXAMPLE31, resolve_params(FamilyId.COUNTEREXAMPLE31, {"m": 2.0}))
    assert ce31.golden_components[0].value == pytest.approx(2.0 * 2.0 * 9.0)
    assert not ce31.weighted_harmonic
    half = family_expected(FamilyId.COUNTEREXAMPLE31, resolve_params(FamilyId.COUNTEREXAMPLE31, {"m": 0.5}))
    assert half.weighted_harmonic
    ce32 = family_expected(FamilyId.COUNTEREXAMPLE32, resolve_params(FamilyId.COUNTEREXAMPLE32))
    assert ce32.golden_components[0].value == pytest.approx(4.0 * (math.sqrt(6.0) - 3.0) / 9.0)


@pytest.mark.parametrize("x1", [0.5, 1.0, 2.0])
def test_example12_in_arc_length_is_counterexample31_at_half(cfg, x1):
    """t = (2/3) x1^{3/2} 로 바꾸면 n = 4, A = 1, B = 3/2 인 Example12가 m = 1/2 Counterexample31과 같다"""
    ex12_params = resolve_params(FamilyId.EXAMPLE12, {"n": 4, "A": 1.0, "B": 1.5})
    ex12 = warped_chart(build_family(FamilyId.EXAMPLE12, ex12_params))
    ce31 = build_family(FamilyId.COUNTEREXAMPLE31, resolve_params(FamilyId.COUNTEREXAMPLE31, {"m": 0.5}))
    t = (2.0 / 3.0) * x1 ** 1.5
    p_warped = (t, 0.0, 0.0, 0.0)
    p_conformal = (x1, 0.0, 0.0, 0.0)

    assert float(ex12.f(np.array(p_warped))) == pytest.approx(float(ce31.f(np.array(p_conformal))), abs=1e-12)
    assert curvature_bundle(ex12.chart, p_warped, cfg).scalar == pytest.approx(
        curvature_bundle(ce31.chart, p_conformal, cfg).scalar, abs=1e-6
    )
    J_warped = weighted_schouten(ex12, p_warped, cfg).scalars.J_fm
    J_conformal = weighted_schouten(ce31, p_conformal, cfg).scalars.J_fm
    assert J_warped == pytest.approx(J_conformal, abs=1e-6)


def test_chart_only_samples_stay_in_the_domain():
    s = build_family(FamilyId.COUNTEREXAMPLE31, resolve_params(FamilyId.COUNTEREXAMPLE31))
    points = np.array(family_samples(s, 5))
    assert points.shape == (5, 4)
    assert np.all(points[:, 0] > 0)


# ---------------------------------------------------------------------------
# Random parameters
# ---------------------------------------------------------------------------

RANDOM_FAMILIES = [
    FamilyId.THM41_POSITIVE,
    FamilyId.THM41_ZERO,
    FamilyId.THM41_NEGATIVE,
    FamilyId.WEIGHTED_SPHERE,
    FamilyId.WEIGHTED_EUCLIDEAN,
    FamilyId.WEIGHTED_HYPERBOLIC,
]


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(RANDOM_FAMILIES), st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_random_parameters_build_weighted_einstein_families(fid, seed):
    params = random_params(fid, np.random.default_rng(seed))
    w = build_family(fid, params)
    ts = sample_times(w, 5)

    assert ode_residuals(w, params.lam, ts).sup() <= 1e-8


def test_random_parameters_unsupported_family():
    with pytest.raises(ParamConstraintViolation):
        random_params(FamilyId.EXAMPLE12, np.random.default_rng(0))
