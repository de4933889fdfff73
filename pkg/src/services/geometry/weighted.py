"""
Weighted Curvature Module
SMMS 가중 곡률 텐서 (Bakry–Émery 리치, 가중 Schouten/Weyl/Cotton), 가중 발산, 조건 리포트
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from services.geometry.tensor_core import (
    ChartMetric,
    FDConfig,
    SymmetryTag,
    TensorField,
    TensorValue,
    conformal_space_form_metric,
    covariant_derivative_array,
    curvature_arrays,
    divergence_array,
    frame_components_array,
    interior_product_array,
    kulkarni_nomizu_array,
    orthonormal_frame_array,
    scalar_calculus_array,
    schouten_weyl_array,
)
from services.helpers.errors import (
    InsufficientSamples,
    NonIntegerM,
    ParamConstraintViolation,
    RankMismatch,
)
from services.helpers.utils import sup_abs

logger = logging.getLogger(__name__)

DEFAULT_REPORT_TOL = 1e-5


# ==============================================================================
# SMMS chart
# ==============================================================================


@dataclass(frozen=True)
class SMMSChart:
    """
    좌표 차트 위의 SMMS (M^n, g, f, m, μ)

    Attributes:
        chart: 계량 차트
        f: 밀도 함수 (점 배치 -> 값). None은 f ≡ 0 (배관 테스트 전용)
        m: 차원 파라미터 (> 0)
        mu: 보조 곡률 파라미터 (m = 1이면 읽지 않음)
        allow_constant_density: f ≡ 0 허용 여부
    """

    chart: ChartMetric
    f: Optional[Callable[[np.ndarray], np.ndarray]]
    m: float
    mu: float = 0.0
    name: str = "smms"
    allow_constant_density: bool = False

    def __post_init__(self):
        n = self.chart.dim
        if n < 3:
            raise RankMismatch(f"SMMS requires n >= 3, got {n}")
        if not self.m > 0:
            raise ParamConstraintViolation("m > 0", self.name)
        if not (n + self.m - 2 > 0 and n + self.m - 1 > 0):
            raise ParamConstraintViolation("n + m - 2 > 0", self.name)
        if self.f is None and not self.allow_constant_density:
            raise ParamConstraintViolation("density must be non-constant", self.name)

    @property
    def n(self) -> int:
        return self.chart.dim

    def density(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.f is None:
            return np.zeros(points.shape[:-1])
        return np.asarray(self.f(points), dtype=float)

    def v(self, points) -> np.ndarray:
        """v = e^{-f/m}"""
        return np.exp(-self.density(points) / self.m)


# ==============================================================================
# Batched weighted fields
# ==============================================================================


@dataclass(frozen=True)
class WeightedFields:
    """점 배치에서의 가중 곡률 배열 묶음"""

    g: np.ndarray
    ginv: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: np.ndarray
    f: np.ndarray
    df: np.ndarray
    grad_f: np.ndarray
    hess: np.ndarray
    laplacian: np.ndarray
    grad_norm_sq: np.ndarray
    rho_fm: np.ndarray
    tau_fm: np.ndarray
    J: np.ndarray
    P: np.ndarray
    Y: np.ndarray
    W: np.ndarray


def weighted_fields_array(s: SMMSChart, points, cfg: FDConfig) -> WeightedFields:
    """
    가중 곡률 배치 계산

    ρ_f^m = ρ + Hes_f − (1/m) df⊗df
    τ_f^m = τ + 2Δf − ((m+1)/m)|∇f|² + m(m−1)μ e^{2f/m}   (m = 1이면 μ 항 없음)
    J = τ_f^m / (2(n+m−1)),  P = (ρ_f^m − J g)/(n+m−2),  Y = J − tr P,  W = R − P⊘g
    """
    points = np.asarray(points, dtype=float)
    n, m = s.n, s.m
    curv = curvature_arrays(s.chart, points, cfg)
    f_vals = s.density(points)
    if s.f is None:
        zeros = np.zeros(points.shape)
        df = grad_f = zeros
        hess = np.zeros(curv.g.shape)
        laplacian = grad_norm_sq = np.zeros(points.shape[:-1])
    else:
        sc = scalar_calculus_array(s.chart, s.f, points, cfg)
        df, grad_f, hess = sc.differential, sc.grad, sc.hess
        laplacian, grad_norm_sq = sc.laplacian, sc.grad_norm_sq

    rho_fm = curv.ricci + hess - np.einsum("...i,...j->...ij", df, df) / m
    tau_fm = curv.scalar + 2.0 * laplacian - (m + 1.0) / m * grad_norm_sq
    if m != 1:
        tau_fm = tau_fm + m * (m - 1.0) * s.mu * np.exp(2.0 * f_vals / m)
    J = tau_fm / (2.0 * (n + m - 1.0))
    P = (rho_fm - J[..., None, None] * curv.g) / (n + m - 2.0)
    Y = J - np.einsum("...ij,...ij->...", curv.ginv, P)
    W = curv.riemann - kulkarni_nomizu_array(P, curv.g)
    return WeightedFields(
        g=curv.g, ginv=curv.ginv, riemann=curv.riemann, ricci=curv.ricci, scalar=curv.scalar,
        f=f_vals, df=df, grad_f=grad_f, hess=hess, laplacian=laplacian,
        grad_norm_sq=grad_norm_sq, rho_fm=rho_fm, tau_fm=tau_fm, J=J, P=P, Y=Y, W=W,
    )


def schouten_field(s: SMMSChart, cfg: FDConfig) -> TensorField:
    return lambda pts: weighted_fields_array(s, pts, cfg).P


def weyl_field(s: SMMSChart, cfg: FDConfig) -> TensorField:
    return lambda pts: weighted_fields_array(s, pts, cfg).W


def weighted_divergence_array(s: SMMSChart, tensor_field: TensorField, points, cfg: FDConfig) -> np.ndarray:
    """δ_f T = δT − ι_{∇f}T 배치 계산"""
    points = np.asarray(points, dtype=float)
    div = divergence_array(s.chart, tensor_field, points, cfg)
    if s.f is None:
        return div
    grad_f = scalar_calculus_array(s.chart, s.f, points, cfg).grad
    return div - interior_product_array(grad_f, np.asarray(tensor_field(points), dtype=float))


def weighted_cotton_array(s: SMMSChart, points, cfg: FDConfig) -> np.ndarray:
    """dP(X,Y,Z) = (∇_X P)(Y,Z) − (∇_Y P)(X,Z), 바깥 미분은 cfg.outer() 사용"""
    nabla_p = covariant_derivative_array(s.chart, schouten_field(s, cfg), points, cfg.outer())
    return nabla_p - np.swapaxes(nabla_p, -3, -2)


def weighted_harmonic_array(s: SMMSChart, points, cfg: FDConfig) -> np.ndarray:
    """δ_f W_f^m, 바깥 미분은 cfg.outer() 사용"""
    return weighted_divergence_array(s, weyl_field(s, cfg), points, cfg.outer())


# ==============================================================================
# Single-point operations
# ==============================================================================


@dataclass(frozen=True)
class WeightedScalars:
    """
    가중 스칼라 (τ_f^m, J_f^m, Y_f^m, GQE 상수 α)

    alpha = (n+m−2)λ + J, alpha_alt = (2n+m−2)λ + Y (λ가 주어진 경우만)
    """

    tau_fm: float
    J_fm: float
    Y_fm: float
    alpha: Optional[float] = None
    alpha_alt: Optional[float] = None


@dataclass(frozen=True)
class SchoutenResult:
    P: TensorValue
    scalars: WeightedScalars


def _point(s: SMMSChart, p) -> np.ndarray:
    point = np.asarray(p, dtype=float).reshape(1, -1)
    if point.shape[-1] != s.n:
        raise RankMismatch(f"point has {point.shape[-1]} coordinates, SMMS has n = {s.n}")
    return point


def bakry_emery_ricci(s: SMMSChart, p, cfg: FDConfig = FDConfig()) -> TensorValue:
    """m-Bakry–Émery 리치 텐서 ρ_f^m"""
    return TensorValue(weighted_fields_array(s, _point(s, p), cfg).rho_fm[0], SymmetryTag.SYM2)


def weighted_scalar_curvature(s: SMMSChart, p, cfg: FDConfig = FDConfig()) -> float:
    """가중 스칼라 곡률 τ_f^m"""
    return float(weighted_fields_array(s, _point(s, p), cfg).tau_fm[0])


def weighted_schouten(
    s: SMMSChart, p, cfg: FDConfig = FDConfig(), lam: Optional[float] = None
) -> SchoutenResult:
    """
    가중 Schouten 텐서 P_f^m과 가중 스칼라

    Args:
        s: SMMS 차트
        p: 평가점
        cfg: 유한차분 설정
        lam: 주어지면 α, alpha_alt 계산에 사용

    Returns:
        SchoutenResult: P와 WeightedScalars
    """
    wf = weighted_fields_array(s, _point(s, p), cfg)
    J, Y = float(wf.J[0]), float(wf.Y[0])
    alpha = alpha_alt = None
    if lam is not None:
        alpha = (s.n + s.m - 2.0) * lam + J
        alpha_alt = (2.0 * s.n + s.m - 2.0) * lam + Y
    scalars = WeightedScalars(float(wf.tau_fm[0]), J, Y, alpha, alpha_alt)
    return SchoutenResult(TensorValue(wf.P[0], SymmetryTag.SYM2), scalars)


def weighted_weyl(s: SMMSChart, p, cfg: FDConfig = FDConfig()) -> TensorValue:
    """가중 Weyl 텐서 W_f^m = R − P_f^m⊘g"""
    return TensorValue(weighted_fields_array(s, _point(s, p), cfg).W[0], SymmetryTag.RIEMANN_LIKE)


def weighted_cotton(s: SMMSChart, p, cfg: FDConfig = FDConfig()) -> TensorValue:
    """가중 Cotton 텐서 dP_f^m (앞 두 슬롯 반대칭)"""
    return TensorValue(weighted_cotton_array(s, _point(s, p), cfg)[0])


def weighted_divergence(
    s: SMMSChart, tensor_field: TensorField, p, cfg: FDConfig = FDConfig()
) -> TensorValue:
    """가중 발산 δ_f T = δT − ι_{∇f}T"""
    return TensorValue(weighted_divergence_array(s, tensor_field, _point(s, p), cfg)[0])


def weighted_weyl_divergence(s: SMMSChart, p, cfg: FDConfig = FDConfig()) -> TensorValue:
    """δ_f W_f^m (가중 조화성 판정 대상)"""
    return TensorValue(weighted_harmonic_array(s, _point(s, p), cfg)[0])


# ==============================================================================
# Condition report
# ==============================================================================


class Branch(Enum):
    """차트 수준 분기 판정"""

    EINSTEIN = "einstein"
    NON_EINSTEIN_EXAMPLE12 = "non-einstein-example-1-2"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class _SampleFields:
    point: np.ndarray
    g: np.ndarray
    frame: np.ndarray
    f: float
    df: np.ndarray
    hess: np.ndarray
    ricci: np.ndarray
    scalar: float
    rho_fm: np.ndarray
    J: float
    Y: float
    P: np.ndarray
    W: np.ndarray
    trace_P: float
    harmonic: np.ndarray
    cotton: np.ndarray


def _evaluate_sample(s: SMMSChart, point: np.ndarray, cfg: FDConfig) -> _SampleFields:
    """샘플 한 점의 λ 독립 필드 계산"""
    pts = point.reshape(1, -1)
    wf = weighted_fields_array(s, pts, cfg)
    frame = orthonormal_frame_array(wf.g)[0]
    return _SampleFields(
        point=point,
        g=wf.g[0],
        frame=frame,
        f=float(wf.f[0]),
        df=wf.df[0],
        hess=wf.hess[0],
        ricci=wf.ricci[0],
        scalar=float(wf.scalar[0]),
        rho_fm=wf.rho_fm[0],
        J=float(wf.J[0]),
        Y=float(wf.Y[0]),
        P=wf.P[0],
        W=wf.W[0],
        trace_P=float(np.einsum("ij,ij->", wf.ginv[0], wf.P[0])),
        harmonic=weighted_harmonic_array(s, pts, cfg)[0],
        cotton=weighted_cotton_array(s, pts, cfg)[0],
    )


def identity_rhs(sample: _SampleFields, m: float, lam: float) -> np.ndarray:
    """
    가중 Einstein SMMS에서 δ_f W_f^m이 만족해야 하는 우변

    (Y/m + λ){df(Y)g(X,Z) − df(Z)g(X,Y)} − (1/m){df(Y)Hes(X,Z) − df(Z)Hes(X,Y)}
    """
    g, df, hess = sample.g, sample.df, sample.hess
    metric_part = np.einsum("b,ac->abc", df, g) - np.einsum("c,ab->abc", df, g)
    hess_part = np.einsum("b,ac->abc", df, hess) - np.einsum("c,ab->abc", df, hess)
    return (sample.Y / m + lam) * metric_part - hess_part / m


@dataclass(frozen=True, eq=False)
class ConditionReport:
    """
    샘플 집합에 대한 가중 조건 잔차 리포트

    잔차는 모두 g-정규직교 틀 성분의 샘플별 최대 절대값 중 최대값이다.
    """

    lambda_fit: float
    einstein_residual: float
    harmonic_residual: float
    cotton_residual: float
    kappa: float
    kappa_spread: float
    branch: Branch
    sample_points: List[Tuple[float, ...]]
    identity_residual: float = math.nan
    ricci_einstein_residual: float = math.nan
    gqe_residual: float = math.nan
    weyl_norm: float = math.nan
    quasi_einstein: bool = False
    m: float = math.nan
    mu: float = math.nan
    tol_used: float = DEFAULT_REPORT_TOL
    table: Optional[pd.DataFrame] = field(default=None, repr=False)

    @property
    def is_weighted_einstein(self) -> bool:
        return self.einstein_residual <= self.tol_used

    @property
    def is_weighted_harmonic(self) -> bool:
        return self.harmonic_residual <= self.tol_used


def condition_report(
    s: SMMSChart,
    samples: Sequence[Sequence[float]],
    cfg: FDConfig = FDConfig(),
    lambda_override: Optional[float] = None,
    tol: float = DEFAULT_REPORT_TOL,
    n_jobs: int = 1,
) -> ConditionReport:
    """
    가중 Einstein / 가중 조화 Weyl 조건 잔차 리포트 생성

    Args:
        s: SMMS 차트
        samples: 3개 이상의 내부 샘플 점
        cfg: 유한차분 설정
        lambda_override: 주어지면 λ 적합 대신 사용
        tol: 분기 판정과 항등식 검사 임계값
        n_jobs: joblib 병렬 폭 (결과는 샘플 순서대로 축약)

    Returns:
        ConditionReport: 잔차, λ, κ, 분기 판정, 샘플 테이블

    Raises:
        InsufficientSamples: 샘플이 3개 미만
    """
    from services.tables.report_tables import build_sample_table

    points = [np.asarray(p, dtype=float) for p in samples]
    if len(points) < 3:
        raise InsufficientSamples(f"condition_report needs >= 3 samples, got {len(points)}")
    n, m = s.n, s.m

    evaluated: List[_SampleFields] = Parallel(n_jobs=n_jobs)(
        delayed(_evaluate_sample)(s, p, cfg) for p in points
    )

    lam = (
        float(np.mean([smp.trace_P / n for smp in evaluated]))
        if lambda_override is None
        else float(lambda_override)
    )

    rows = []
    for idx, smp in enumerate(evaluated):
        frame = smp.frame
        einstein = sup_abs(frame_components_array(smp.P - lam * smp.g, frame))
        harmonic = sup_abs(frame_components_array(smp.harmonic, frame))
        cotton = sup_abs(frame_components_array(smp.cotton, frame))
        ricci_einstein = sup_abs(frame_components_array(smp.ricci - smp.scalar / n * smp.g, frame))
        alpha = (n + m - 2.0) * lam + smp.J
        gqe = sup_abs(frame_components_array(smp.rho_fm - alpha * smp.g, frame))
        weyl = sup_abs(frame_components_array(smp.W, frame))
        kappa = ((m + n) * lam - smp.J) * math.exp(-smp.f / m) / m
        identity = sup_abs(frame_components_array(smp.harmonic - identity_rhs(smp, m, lam), frame))
        rows.append({
            "sample": idx,
            "point": tuple(float(x) for x in smp.point),
            "f": smp.f,
            "J": smp.J,
            "Y": smp.Y,
            "trace_P_over_n": smp.trace_P / n,
            "alpha": alpha,
            "kappa": kappa,
            "einstein": einstein,
            "harmonic": harmonic,
            "cotton": cotton,
            "ricci_einstein": ricci_einstein,
            "gqe": gqe,
            "weyl": weyl,
            "identity": identity,
        })
        logger.debug(
            f"{s.name} sample {idx}: einstein={einstein:.3e} harmonic={harmonic:.3e} "
            f"cotton={cotton:.3e} kappa={kappa:.6g}"
        )

    table = build_sample_table(rows, s.chart.coord_names)
    kappas = table["kappa"].to_numpy()
    kappa_mean = float(np.mean(kappas))
    einstein_residual = float(table["einstein"].max())
    harmonic_residual = float(table["harmonic"].max())
    ricci_einstein_residual = float(table["ricci_einstein"].max())
    alphas = table["alpha"].to_numpy()

    identity_residual = math.nan
    if einstein_residual <= tol:
        identity_residual = float(table["identity"].max())

    weighted_einstein = einstein_residual <= tol
    harmonic = harmonic_residual <= tol
    if weighted_einstein and harmonic and ricci_einstein_residual <= tol:
        branch = Branch.EINSTEIN
    elif weighted_einstein and harmonic and math.isclose(m, 0.5) and abs(lam) <= tol:
        branch = Branch.NON_EINSTEIN_EXAMPLE12
    else:
        branch = Branch.INDETERMINATE

    alpha_spread = float(np.max(np.abs(alphas - np.mean(alphas))))
    quasi_einstein = weighted_einstein and abs(kappa_mean) <= tol and alpha_spread <= max(tol, 1e-6)

    report = ConditionReport(
        lambda_fit=lam,
        einstein_residual=einstein_residual,
        harmonic_residual=harmonic_residual,
        cotton_residual=float(table["cotton"].max()),
        kappa=kappa_mean,
        kappa_spread=float(np.max(np.abs(kappas - kappa_mean))),
        branch=branch,
        sample_points=[tuple(float(x) for x in p) for p in points],
        identity_residual=identity_residual,
        ricci_einstein_residual=ricci_einstein_residual,
        gqe_residual=float(table["gqe"].max()),
        weyl_norm=float(table["weyl"].max()),
        quasi_einstein=quasi_einstein,
        m=float(m),
        mu=float(s.mu) if m != 1 else math.nan,
        table=table,
        tol_used=tol,
    )
    logger.info(
        f"{s.name}: lambda_fit={lam:.6g} einstein={einstein_residual:.3e} "
        f"harmonic={harmonic_residual:.3e} kappa={kappa_mean:.6g} branch={branch.value}"
    )
    return report


def unweighted_weyl_harmonicity(
    s: SMMSChart, samples: Sequence[Sequence[float]], cfg: FDConfig = FDConfig()
) -> Tuple[float, float]:
    """
    비가중 Weyl 텐서의 조화성 분해 (sup ‖δW‖, sup ‖ι_{∇f}W‖)

    Einstein 분기에서는 두 항이 각각 0이어야 한다.
    """

    def unweighted_weyl(pts):
        return schouten_weyl_array(curvature_arrays(s.chart, pts, cfg))[1]

    div_sup = interior_sup = 0.0
    for p in samples:
        pts = np.asarray(p, dtype=float).reshape(1, -1)
        frame = orthonormal_frame_array(s.chart.metric(pts))[0]
        div = divergence_array(s.chart, unweighted_weyl, pts, cfg.outer())[0]
        grad_f = scalar_calculus_array(s.chart, s.f, pts, cfg).grad[0]
        interior = interior_product_array(grad_f, unweighted_weyl(pts)[0])
        div_sup = max(div_sup, sup_abs(frame_components_array(div, frame)))
        interior_sup = max(interior_sup, sup_abs(frame_components_array(interior, frame)))
    return div_sup, interior_sup


# ==============================================================================
# Formal warped product
# ==============================================================================


def formal_warped_product(s: SMMSChart, fiber_dim: int) -> ChartMetric:
    """
    형식적 워프곱 M ×_v F^m(μ) 차트, g ⊕ v² h_μ(y), v = e^{-f/m}

    파이버는 곡률 μ 공간형의 등각 평탄 좌표로 실현한다.

    Raises:
        NonIntegerM: m이 양의 정수가 아니거나 fiber_dim과 다른 경우
        DomainError: μ < 0에서 |y|² >= −4/μ (평가 시점)
    """
    m_int = int(fiber_dim)
    if m_int < 1 or m_int != fiber_dim or not math.isclose(s.m, m_int):
        raise NonIntegerM(f"formal warped product needs integer m equal to fiber_dim, got m={s.m}")
    n = s.n
    mu = s.mu if m_int != 1 else 0.0
    fiber_metric = conformal_space_form_metric(mu, m_int)
    if mu < 0:
        half = 0.999 * math.sqrt(-4.0 / mu / m_int)
        fiber_domain = tuple((-half, half) for _ in range(m_int))
    else:
        fiber_domain = tuple((-math.inf, math.inf) for _ in range(m_int))

    def metric_fn(points: np.ndarray) -> np.ndarray:
        base = points[..., :n]
        fiber = points[..., n:]
        g = np.zeros(points.shape[:-1] + (n + m_int, n + m_int))
        g[..., :n, :n] = s.chart.metric(base)
        v = s.v(base)
        g[..., n:, n:] = (v ** 2)[..., None, None] * fiber_metric(fiber)
        return g

    names = tuple(s.chart.coord_names) + tuple(f"y{i + 1}" for i in range(m_int))
    logger.debug(f"formal warped product of {s.name}: dim {n + m_int}, mu={mu}")
    return ChartMetric(
        n + m_int,
        metric_fn,
        tuple(s.chart.domain) + fiber_domain,
        coord_names=names,
        name=f"{s.name} x_v F^{m_int}",
    )
