"""tensor_core 오라클: 공간형 곡률, Kulkarni–Nomizu 대칭, Bianchi 항등식, 틀 독립성"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from services.geometry.tensor_core import (
    ChartMetric,
    FDConfig,
    Stencil,
    SymmetryTag,
    TensorValue,
    christoffel,
    covariant_derivative,
    curvature_arrays,
    curvature_bundle,
    divergence,
    frame_components,
    interior_product,
    kulkarni_nomizu,
    kulkarni_nomizu_array,
    orthonormal_frame,
    raise_index,
    scalar_calculus,
    schouten_weyl,
    space_form_chart,
)
from services.helpers.errors import DomainError, RankMismatch, SingularMetric

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
sym_matrices = arrays(np.float64, (4, 4), elements=finite).map(lambda a: 0.5 * (a + a.T))
vectors = arrays(np.float64, (4,), elements=finite)
rank3 = arrays(np.float64, (4, 4, 4), elements=finite)


def _flat_chart(dim=3):
    return ChartMetric(dim, lambda p: np.broadcast_to(np.eye(dim), p.shape[:-1] + (dim, dim)).copy(),
                       tuple((-np.inf, np.inf) for _ in range(dim)), name="flat")


# ---------------------------------------------------------------------------
# Space forms
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("curvature", [1.0, -0.5, 0.25])
def test_space_form_riemann_is_half_c_g_kn_g(curvature, cfg):
    chart = space_form_chart(curvature, 3)
    p = np.array([0.3, -0.2, 0.1])
    bundle = curvature_bundle(chart, p, cfg)
    g = chart.metric(p)
    expected = 0.5 * curvature * kulkarni_nomizu_array(g, g)
    np.testing.assert_allclose(bundle.riemann.components, expected, atol=1e-6)
    np.testing.assert_allclose(bundle.ricci.components, 2.0 * curvature * g, atol=1e-6)
    assert bundle.scalar == pytest.approx(6.0 * curvature, abs=1e-6)


def test_space_form_weyl_and_traceless_schouten_vanish(unit_sphere_3d, cfg):
    P, W = schouten_weyl(unit_sphere_3d, [0.4, 0.1, -0.3], cfg)
    g = unit_sphere_3d.metric(np.array([0.4, 0.1, -0.3]))
    assert np.max(np.abs(W.components)) < 1e-6
    np.testing.assert_allclose(P.components, 0.5 * g, atol=1e-6)


def test_step_halving_reduces_the_error(unit_sphere_3d):
    p = np.array([0.3, -0.2, 0.1])
    g = unit_sphere_3d.metric(p)
    exact = 0.5 * kulkarni_nomizu_array(g, g)

    def error(step):
        cfg = FDConfig(rel_step=step, stencil=Stencil.FIVE_POINT, richardson=False)
        return np.max(np.abs(curvature_bundle(unit_sphere_3d, p, cfg).riemann.components - exact))

    assert error(0.04) / error(0.02) >= 4.0


def test_christoffel_of_conformal_power_metric():
    chart = ChartMetric(4, lambda p: (p[..., 0] ** 2)[..., None, None] * np.eye(4),
                        ((0.0, np.inf),) + tuple((-np.inf, np.inf) for _ in range(3)))
    gamma = christoffel(chart, [2.0, 0.1, 0.2, -0.1])
    assert gamma[0, 1, 1] == pytest.approx(-0.5, abs=1e-9)
    assert gamma[1, 0, 1] == pytest.approx(0.5, abs=1e-9)
    assert gamma[0, 0, 0] == pytest.approx(0.5, abs=1e-9)
    assert gamma[1, 2, 3] == pytest.approx(0.0, abs=1e-9)


def test_scalar_calculus_on_flat_chart(cfg):
    chart = _flat_chart()

    def s(p):
        return p[..., 0] ** 2 + p[..., 1] * p[..., 2]

    calc = scalar_calculus(chart, s, [0.5, 1.0, -2.0], cfg)
    np.testing.assert_allclose(calc.hess.components, [[2, 0, 0], [0, 0, 1], [0, 1, 0]], atol=1e-7)
    assert calc.laplacian == pytest.approx(2.0, abs=1e-7)
    assert calc.grad_norm_sq == pytest.approx(1.0 + 4.0 + 1.0, abs=1e-7)
    np.testing.assert_allclose(calc.grad.components, [1.0, -2.0, 1.0], atol=1e-8)


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------


def test_metric_is_parallel(bumpy_chart, cfg):
    nabla_g = covariant_derivative(bumpy_chart, bumpy_chart.metric, [0.2, -0.4, 0.3], cfg)
    assert np.max(np.abs(nabla_g.components)) < 1e-8


def test_riemann_first_bianchi(bumpy_chart, cfg):
    R = curvature_arrays(bumpy_chart, np.array([[0.2, -0.4, 0.3]]), cfg).riemann[0]
    cyclic = R + np.einsum("acdb->abcd", R) + np.einsum("adbc->abcd", R)
    assert np.max(np.abs(cyclic)) < 1e-8


def test_contracted_second_bianchi(bumpy_chart, cfg):
    """δρ = ½ dτ"""
    p = np.array([0.2, -0.4, 0.3])

    def ricci(pts):
        return curvature_arrays(bumpy_chart, pts, cfg).ricci

    def scalar(pts):
        return curvature_arrays(bumpy_chart, pts, cfg).scalar

    div_ricci = divergence(bumpy_chart, ricci, p, cfg.outer())
    d_tau = scalar_calculus(bumpy_chart, scalar, p, cfg.outer()).differential
    np.testing.assert_allclose(div_ricci.components, 0.5 * d_tau.components, atol=1e-5)


def test_frame_choice_does_not_change_norms(bumpy_chart, cfg):
    p = np.array([0.2, -0.4, 0.3])
    bundle = curvature_bundle(bumpy_chart, p, cfg)
    g = bumpy_chart.metric(p)
    norms = [
        np.linalg.norm(frame_components(bundle.riemann, orthonormal_frame(g, order)))
        for order in ([0, 1, 2], [2, 0, 1], [1, 2, 0])
    ]
    assert norms[1] == pytest.approx(norms[0], rel=1e-10)
    assert norms[2] == pytest.approx(norms[0], rel=1e-10)


# ---------------------------------------------------------------------------
# Kulkarni-Nomizu product
# ---------------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(sym_matrices, sym_matrices)
def test_kulkarni_nomizu_has_curvature_symmetries(S, T):
    K = kulkarni_nomizu(TensorValue(S, SymmetryTag.SYM2), TensorValue(T, SymmetryTag.SYM2)).components
    scale = 1.0 + np.max(np.abs(K))
    assert np.max(np.abs(K + np.swapaxes(K, 0, 1))) <= 1e-12 * scale
    assert np.max(np.abs(K + np.swapaxes(K, 2, 3))) <= 1e-12 * scale
    assert np.max(np.abs(K - np.einsum("cdab->abcd", K))) <= 1e-12 * scale
    bianchi = K + np.einsum("acdb->abcd", K) + np.einsum("adbc->abcd", K)
    assert np.max(np.abs(bianchi)) <= 1e-12 * scale
    np.testing.assert_allclose(K, kulkarni_nomizu_array(T, S), atol=1e-12 * scale)


def test_kulkarni_nomizu_rejects_wrong_rank():
    S = TensorValue(np.eye(3), SymmetryTag.SYM2)
    with pytest.raises(RankMismatch):
        kulkarni_nomizu(S, TensorValue(np.zeros((3, 3, 3))))
    with pytest.raises(RankMismatch):
        kulkarni_nomizu(S, TensorValue(np.eye(4), SymmetryTag.SYM2))


# ---------------------------------------------------------------------------
# Interior product and index raising
# ---------------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(vectors, vectors, rank3, rank3, finite)
def test_interior_product_is_bilinear(X, Y, T, S, c):
    def iota(v, t):
        return interior_product(TensorValue(v), TensorValue(t)).components

    scale = 1.0 + np.max(np.abs(T)) + np.max(np.abs(S))
    np.testing.assert_allclose(iota(X + c * Y, T), iota(X, T) + c * iota(Y, T), atol=1e-10 * scale ** 2)
    np.testing.assert_allclose(iota(X, T + c * S), iota(X, T) + c * iota(X, S), atol=1e-10 * scale ** 2)


def test_interior_product_contracts_the_first_slot():
    T = np.arange(27.0).reshape(3, 3, 3)
    X = np.array([1.0, 0.0, 0.0])
    result = interior_product(TensorValue(X), TensorValue(T))
    assert result.rank == 2
    np.testing.assert_array_equal(result.components, T[0])


def test_interior_product_rejects_wrong_rank_and_dimension():
    with pytest.raises(RankMismatch):
        interior_product(TensorValue(np.eye(3)), TensorValue(np.zeros((3, 3))))
    with pytest.raises(RankMismatch):
        interior_product(TensorValue(np.ones(3)), TensorValue(np.array(1.0)))
    with pytest.raises(RankMismatch):
        interior_product(TensorValue(np.ones(3)), TensorValue(np.zeros((4, 4))))


def test_raise_index_inverts_the_metric():
    g = np.diag([4.0, 1.0, 0.25])
    np.testing.assert_allclose(raise_index(g, [2.0, 1.0, 1.0]), [0.5, 1.0, 4.0])
    g = np.array([[2.0, 0.5], [0.5, 1.0]])
    w = np.array([0.3, -1.2])
    np.testing.assert_allclose(g @ raise_index(g, w), w, atol=1e-12)


# ---------------------------------------------------------------------------
# Domain / validation errors
# ---------------------------------------------------------------------------


def test_point_outside_chart_raises_domain_error():
    chart = space_form_chart(-1.0, 3)
    with pytest.raises(DomainError) as info:
        curvature_bundle(chart, [2.0, 0.0, 0.0])
    assert info.value.point is not None


def test_stencil_leaving_domain_raises_domain_error():
    chart = ChartMetric(3, lambda p: np.broadcast_to(np.eye(3), p.shape[:-1] + (3, 3)).copy(),
                        ((0.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)))
    with pytest.raises(DomainError):
        curvature_bundle(chart, [1e-6, 0.0, 0.0], FDConfig(rel_step=1e-3))


def test_degenerate_metric_raises_singular_metric():
    chart = ChartMetric(3, lambda p: np.broadcast_to(np.diag([1.0, 0.0, 1.0]), p.shape[:-1] + (3, 3)).copy(),
                        tuple((-np.inf, np.inf) for _ in range(3)))
    with pytest.raises(SingularMetric) as info:
        chart.metric(np.zeros(3))
    assert info.value.min_eigenvalue <= 1e-12


def test_chart_dimension_must_be_at_least_two():
    with pytest.raises(RankMismatch):
        ChartMetric(1, lambda p: np.ones(p.shape[:-1] + (1, 1)), ((-1.0, 1.0),))


def test_fd_config_rejects_non_positive_step():
    with pytest.raises(ValueError):
        FDConfig(rel_step=0.0)
