"""
Warped Product Closed-Form Module
Einstein 파이버를 갖는 워프곱 I ×_φ N의 닫힌 형식 곡률, ODE 잔차 시스템, 분기 판정 결손값
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from services.config.runtime_config import DEFAULT_WINDOW, DOMAIN_MARGIN
from services.geometry.tensor_core import (
    ChartMetric,
    FDConfig,
    conformal_space_form_metric,
)
from services.geometry.weighted import SMMSChart, weighted_fields_array
from services.helpers.errors import (
    DomainError,
    InsufficientSamples,
    NonPositiveWarp,
    ParamConstraintViolation,
    UnrealizableFiber,
)
from services.helpers.utils import derivative_1d, interior_samples, shrink_interval, sup_abs

logger = logging.getLogger(__name__)

# 파이버 방향 샘플 오프셋 (원점 근처)
FIBER_OFFSETS = (0.05, -0.03, 0.02, 0.04, -0.01, 0.03)


# ==============================================================================
# Fiber specification
# ==============================================================================


class FiberRealization(Enum):
    SPACE_FORM = "space-form"
    FLAT = "flat"
    PRODUCT_OF_SURFACES = "product-of-surfaces"


@dataclass(frozen=True)
class FiberSpec:
    """
    Einstein 파이버 (ρ^N = β g^N) 명세와 좌표 실현

    Attributes:
        dim: 파이버 차원 n−1 (>= 2)
        beta: Einstein 상수 β (기준값)
        realization: 공간형 / 평탄 / 두 곡면의 곱
        gauss: 곡면 곱일 때 각 곡면의 가우스 곡률 (β와 같아야 함)
    """

    dim: int
    beta: float
    realization: FiberRealization = FiberRealization.SPACE_FORM
    gauss: Optional[float] = None

    def __post_init__(self):
        if self.dim < 2:
            raise UnrealizableFiber(f"fiber dimension must be >= 2, got {self.dim}")
        if self.realization is FiberRealization.FLAT and abs(self.beta) > 1e-12:
            raise UnrealizableFiber(f"flat fiber requires beta = 0, got {self.beta}")
        if self.realization is FiberRealization.PRODUCT_OF_SURFACES:
            if self.dim != 4:
                raise UnrealizableFiber(f"product of surfaces requires fiber dim 4, got {self.dim}")
            gauss = self.beta if self.gauss is None else self.gauss
            if not math.isclose(gauss, self.beta, rel_tol=1e-12, abs_tol=1e-12):
                raise UnrealizableFiber(f"surface Gauss curvature {gauss} must equal beta {self.beta}")
            object.__setattr__(self, "gauss", float(gauss))

    @property
    def sectional_curvature(self) -> float:
        """공간형 실현의 단면 곡률 β/(dim−1)"""
        return self.beta / (self.dim - 1)

    def _curvatures(self) -> List[Tuple[float, int]]:
        if self.realization is FiberRealization.FLAT:
            return [(0.0, self.dim)]
        if self.realization is FiberRealization.PRODUCT_OF_SURFACES:
            return [(self.gauss, 2), (self.gauss, 2)]
        return [(self.sectional_curvature, self.dim)]

    def metric(self, y: np.ndarray) -> np.ndarray:
        """파이버 좌표 y에서 계량 성분 (..., dim, dim)"""
        y = np.asarray(y, dtype=float)
        g = np.zeros(y.shape[:-1] + (self.dim, self.dim))
        start = 0
        for curvature, block in self._curvatures():
            stop = start + block
            g[..., start:stop, start:stop] = conformal_space_form_metric(curvature, block)(y[..., start:stop])
            start = stop
        return g

    def domain(self) -> Tuple[Tuple[float, float], ...]:
        """곡률이 음수인 블록은 공 안에 내접한 박스"""
        bounds = []
        for curvature, block in self._curvatures():
            if curvature < 0:
                half = 0.999 * math.sqrt(-4.0 / curvature / block)
                bounds.extend([(-half, half)] * block)
            else:
                bounds.extend([(-math.inf, math.inf)] * block)
        return tuple(bounds)


# ==============================================================================
# Profiles and warped SMMS
# ==============================================================================


@dataclass(frozen=True)
class Profile1D:
    """
    구간 위의 1차원 함수 (φ, f, v)와 선택적 정확한 도함수

    도함수가 없으면 7점 중심 차분을 쓴다.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    d1: Optional[Callable[[np.ndarray], np.ndarray]] = None
    d2: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "profile"

    @property
    def has_exact_derivatives(self) -> bool:
        return self.d1 is not None and self.d2 is not None

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.asarray(self.fn(t), dtype=float) + np.zeros_like(t)

    def first(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.d1 is not None:
            return np.asarray(self.d1(t), dtype=float) + np.zeros_like(t)
        return derivative_1d(self.__call__, t, 1)

    def second(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.d2 is not None:
            return np.asarray(self.d2(t), dtype=float) + np.zeros_like(t)
        return derivative_1d(self.__call__, t, 2)


def density_from_v(v: Profile1D, m: float) -> Profile1D:
    """
    v = e^{-f/m}로부터 밀도 f = −m log v 구성

    f' = −m v'/v, f'' = −m (v''/v − v'²/v²)
    """

    def f(t):
        return -m * np.log(v(t))

    d1 = d2 = None
    if v.has_exact_derivatives:
        def d1(t):
            return -m * v.first(t) / v(t)

        def d2(t):
            vt = v(t)
            return -m * (v.second(t) / vt - (v.first(t) / vt) ** 2)

    return Profile1D(f, d1, d2, name="f")


@dataclass(frozen=True)
class WarpedSMMS:
    """
    워프곱 SMMS (I ×_φ N, dt² + φ² g^N, f(t), m, μ)

    Attributes:
        n: 전체 차원 (>= 3)
        interval: 열린 구간 (t0, t1)
        phi: 워핑 함수 φ(t) > 0
        f: 밀도 f(t)
        fiber: Einstein 파이버 명세 (dim = n−1)
        m, mu: SMMS 파라미터
        lambda_target: 구성 시 의도한 λ (선택)
        v_profile: v = e^{-f/m} (정확한 도함수를 가진 경우)
    """

    n: int
    interval: Tuple[float, float]
    phi: Profile1D
    f: Profile1D
    fiber: FiberSpec
    m: float
    mu: float = 0.0
    lambda_target: Optional[float] = None
    name: str = "warped"
    v_profile: Optional[Profile1D] = None

    def __post_init__(self):
        if self.n < 3:
            raise UnrealizableFiber(f"warped SMMS requires n >= 3, got {self.n}")
        if self.fiber.dim != self.n - 1:
            raise UnrealizableFiber(f"fiber dim {self.fiber.dim} != n - 1 = {self.n - 1}")
        if not self.m > 0:
            raise ParamConstraintViolation("m > 0", self.name)
        lo, hi = self.interval
        if not lo < hi:
            raise DomainError(f"empty interval ({lo}, {hi})")
        for prof in (self.phi, self.f):
            if not prof.has_exact_derivatives:
                logger.warning(f"{self.name}: no exact derivatives for {prof.name}, using 7-point FD")

    def check_t(self, t) -> np.ndarray:
        """
        t가 구간 내부이고 φ(t) > 0인지 확인

        Raises:
            DomainError: 구간 밖
            NonPositiveWarp: φ(t) <= 0
        """
        t = np.asarray(t, dtype=float)
        lo, hi = self.interval
        outside = (t <= lo) | (t >= hi)
        if np.any(outside):
            bad = float(np.asarray(t)[outside].ravel()[0])
            raise DomainError(f"{self.name}: t={bad} outside interval {self.interval}", [bad])
        phi = self.phi(t)
        if np.any(phi <= 0):
            raise NonPositiveWarp(f"{self.name}: phi <= 0 at t={float(np.asarray(t)[phi <= 0].ravel()[0])}")
        return t

    def v(self, t) -> np.ndarray:
        if self.v_profile is not None:
            return self.v_profile(t)
        return np.exp(-self.f(t) / self.m)

    def v_first(self, t) -> np.ndarray:
        if self.v_profile is not None:
            return self.v_profile.first(t)
        return -self.f.first(t) / self.m * self.v(t)

    def finite_interval(self) -> Tuple[float, float]:
        """FD 여유를 둔 유한 평가 구간"""
        lo, hi = self.interval
        return shrink_interval(lo, hi, DOMAIN_MARGIN, DEFAULT_WINDOW)


# ==============================================================================
# Chart assembly
# ==============================================================================


def warped_chart(w: WarpedSMMS) -> SMMSChart:
    """
    워프곱을 좌표 차트 SMMS로 조립

    g = dt² + φ(t)² g^N(y), f는 t에만 의존.
    """
    n = w.n
    fiber = w.fiber

    def metric_fn(points: np.ndarray) -> np.ndarray:
        t = points[..., 0]
        g = np.zeros(points.shape[:-1] + (n, n))
        g[..., 0, 0] = 1.0
        g[..., 1:, 1:] = (w.phi(t) ** 2)[..., None, None] * fiber.metric(points[..., 1:])
        return g

    def density(points: np.ndarray) -> np.ndarray:
        return w.f(points[..., 0])

    chart = ChartMetric(
        n,
        metric_fn,
        (tuple(w.interval),) + fiber.domain(),
        coord_names=("t",) + tuple(f"x{i + 1}" for i in range(n - 1)),
        name=w.name,
    )
    return SMMSChart(chart, density, w.m, w.mu, name=w.name)


def sample_times(w: WarpedSMMS, count: int, fraction: float = 0.5) -> np.ndarray:
    """구간 중앙 부분의 t 샘플"""
    lo, hi = w.finite_interval()
    return interior_samples(lo, hi, count, fraction)


def chart_samples(w: WarpedSMMS, ts: Sequence[float]) -> List[Tuple[float, ...]]:
    """t 샘플에 파이버 원점 근처 오프셋을 붙인 차트 점 목록"""
    offsets = tuple(FIBER_OFFSETS[i % len(FIBER_OFFSETS)] for i in range(w.n - 1))
    return [(float(t),) + offsets for t in ts]


# ==============================================================================
# Closed forms
# ==============================================================================


@dataclass(frozen=True)
class ClosedCurvature:
    """닫힌 형식 곡률 성분 (파이버 계수는 정규직교 틀 기준)"""

    ricci_tt: np.ndarray
    ricci_fiber_coeff: np.ndarray
    hess_tt: np.ndarray
    hess_fiber_coeff: np.ndarray
    J_closed: np.ndarray


@dataclass(frozen=True)
class _Derivs:
    phi: np.ndarray
    dphi: np.ndarray
    ddphi: np.ndarray
    f: np.ndarray
    df: np.ndarray
    ddf: np.ndarray


def _derivs(w: WarpedSMMS, t) -> _Derivs:
    t = w.check_t(t)
    return _Derivs(w.phi(t), w.phi.first(t), w.phi.second(t), w.f(t), w.f.first(t), w.f.second(t))


def _j_closed(w: WarpedSMMS, d: _Derivs) -> np.ndarray:
    n, m, beta = w.n, w.m, w.fiber.beta
    total = (
        (n - 1) * (beta - (n - 2) * d.dphi ** 2) / d.phi ** 2
        + 2.0 * (n - 1) * (d.dphi * d.df - d.ddphi) / d.phi
        + 2.0 * d.ddf
        - (1.0 + m) / m * d.df ** 2
    )
    if m != 1:
        total = total + m * (m - 1.0) * np.exp(2.0 * d.f / m) * w.mu
    return total / (2.0 * (n + m - 1.0))


def warped_curvature_closed(w: WarpedSMMS, t) -> ClosedCurvature:
    """
    닫힌 형식 리치/헤시안 성분과 J_f^m

    Raises:
        DomainError: 구간 밖의 t
        NonPositiveWarp: φ(t) <= 0
    """
    d = _derivs(w, t)
    n = w.n
    return ClosedCurvature(
        ricci_tt=-(n - 1) * d.ddphi / d.phi,
        ricci_fiber_coeff=w.fiber.beta / d.phi ** 2 - d.ddphi / d.phi - (n - 2) * d.dphi ** 2 / d.phi ** 2,
        hess_tt=d.ddf,
        hess_fiber_coeff=d.dphi * d.df / d.phi,
        J_closed=_j_closed(w, d),
    )


@dataclass(frozen=True)
class OdeResiduals:
    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray

    def sup(self) -> float:
        return max(sup_abs(self.r1), sup_abs(self.r2), sup_abs(self.r3))


def ode_residuals(w: WarpedSMMS, lam: float, t) -> OdeResiduals:
    """
    가중 Einstein + 가중 조화 Weyl 동치 ODE 시스템의 잔차

    r1 = β − φ''φ − (n−2)φ'² − 2(n−1)λφ²
    r2 = f'' − (n−1)φ''/φ − f'²/m − φ'f'/φ − 2(n−1)λ
    r3 = φ'f'/φ + (n−m)λ − J_f^m
    """
    d = _derivs(w, t)
    n, m, beta = w.n, w.m, w.fiber.beta
    r1 = beta - d.ddphi * d.phi - (n - 2) * d.dphi ** 2 - 2.0 * (n - 1) * lam * d.phi ** 2
    r2 = d.ddf - (n - 1) * d.ddphi / d.phi - d.df ** 2 / m - d.dphi * d.df / d.phi - 2.0 * (n - 1) * lam
    r3 = d.dphi * d.df / d.phi + (n - m) * lam - _j_closed(w, d)
    return OdeResiduals(r1, r2, r3)


def lambda_from_warp(w: WarpedSMMS, ts: Sequence[float]) -> float:
    """r1 = 0에서 점별로 λ를 풀어 평균"""
    d = _derivs(w, ts)
    n = w.n
    lam = (w.fiber.beta - d.ddphi * d.phi - (n - 2) * d.dphi ** 2) / (2.0 * (n - 1) * d.phi ** 2)
    return float(np.mean(lam))


@dataclass(frozen=True)
class BranchProbe:
    einstein_defect: float
    branch2_defect: float
    fprime_sq_defect: float


def branch_probe(w: WarpedSMMS, lam: float, ts: Sequence[float]) -> BranchProbe:
    """
    Einstein 분기 / φ = A e^{−f/(n−1)} 분기 결손값

    einstein_defect = sup|φ''+2λφ| / sup|φ|
    branch2_defect = sup|φf' + (n−1)φ'| / (sup|φf'| + (n−1) sup|φ'|)
    fprime_sq_defect = sup|f'² − 2m(f'' − (n−1)λ)|

    Raises:
        InsufficientSamples: 샘플 3개 미만
    """
    ts = np.asarray(ts, dtype=float)
    if ts.size < 3:
        raise InsufficientSamples(f"branch_probe needs >= 3 samples, got {ts.size}")
    d = _derivs(w, ts)
    n, m = w.n, w.m
    einstein = sup_abs(d.ddphi + 2.0 * lam * d.phi) / max(sup_abs(d.phi), 1e-300)
    scale2 = sup_abs(d.phi * d.df) + (n - 1) * sup_abs(d.dphi)
    branch2 = sup_abs(d.phi * d.df + (n - 1) * d.dphi) / max(scale2, 1e-300)
    fprime = sup_abs(d.df ** 2 - 2.0 * m * (d.ddf - (n - 1) * lam))
    return BranchProbe(einstein, branch2, fprime)


def profile_samples(w: WarpedSMMS, ts: Sequence[float], lam: Optional[float] = None) -> Dict[str, np.ndarray]:
    """샘플 t에서 φ, φ', φ'', f, f', f'', v (λ가 있으면 r1..r3 포함)"""
    ts = np.asarray(ts, dtype=float)
    d = _derivs(w, ts)
    profile = {
        "t": ts, "phi": d.phi, "dphi": d.dphi, "ddphi": d.ddphi,
        "f": d.f, "df": d.df, "ddf": d.ddf, "v": w.v(ts),
    }
    if lam is not None:
        res = ode_residuals(w, lam, ts)
        profile.update({"r1": res.r1, "r2": res.r2, "r3": res.r3})
    return profile


# ==============================================================================
# Oracle comparison
# ==============================================================================


def oracle_compare(w: WarpedSMMS, ts: Sequence[float], cfg: FDConfig = FDConfig()) -> pd.DataFrame:
    """
    닫힌 형식 성분과 tensor_core 오라클 값 비교 테이블

    파이버 성분은 대각 블록 (1,1)을 g_11로 나눈 정규직교 계수로 비교한다.
    """
    from services.tables.report_tables import build_oracle_table

    s = warped_chart(w)
    points = np.asarray(chart_samples(w, ts), dtype=float)
    closed = warped_curvature_closed(w, points[:, 0])
    wf = weighted_fields_array(s, points, cfg)
    g11 = wf.g[:, 1, 1]
    oracle = {
        "ricci_tt": wf.ricci[:, 0, 0],
        "ricci_fiber_coeff": wf.ricci[:, 1, 1] / g11,
        "hess_tt": wf.hess[:, 0, 0],
        "hess_fiber_coeff": wf.hess[:, 1, 1] / g11,
        "J": wf.J,
    }
    closed_values = {
        "ricci_tt": closed.ricci_tt,
        "ricci_fiber_coeff": closed.ricci_fiber_coeff,
        "hess_tt": closed.hess_tt,
        "hess_fiber_coeff": closed.hess_fiber_coeff,
        "J": closed.J_closed,
    }
    records = []
    for i, t in enumerate(points[:, 0]):
        for quantity, values in oracle.items():
            records.append({
                "t": float(t),
                "quantity": quantity,
                "closed_form": float(closed_values[quantity][i]),
                "oracle": float(values[i]),
            })
    table = build_oracle_table(records)
    logger.info(f"{w.name}: oracle max rel error {table['rel_error'].max():.3e}")
    return table
