"""
Global Matching
완비성 장애 (리치 blowup) 탐지, v 임계점 계수, 전역 모델 공간 (구면/유클리드/쌍곡/워프 리치 평탄) 적합
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import statsmodels.api as sm
from scipy.optimize import least_squares

from services.catalog.families import FamilyParams
from services.config.runtime_config import DEFAULT_WINDOW
from services.geometry.warped_closed import (
    WarpedSMMS,
    lambda_from_warp,
    sample_times,
    warped_curvature_closed,
)
from services.geometry.weighted import ConditionReport, SMMSChart
from services.helpers.errors import DomainError
from services.helpers.utils import geometric_approach, sign_changes, sup_abs
from services.tables.report_tables import build_blowup_table

logger = logging.getLogger(__name__)

FIT_TOL = 1e-6
MU_REL_TOL = 1e-6
CRITICAL_DEAD_BAND = 1e-9
BLOWUP_START = 0.1
BLOWUP_COUNT = 10
FIT_SAMPLES = 9


# ==============================================================================
# Blowup probe
# ==============================================================================


@dataclass(frozen=True)
class BlowupFit:
    """
    ρ(∂t,∂t) ≈ c·d^{−k} 로그-로그 적합 (d = 끝점까지 거리)

    rate_stderr는 statsmodels OLS 기울기의 표준오차.
    """

    endpoint: float
    diverges: bool
    rate_exponent: float
    coefficient: float
    rate_stderr: float
    table: pd.DataFrame = field(repr=False)


def blowup_probe(
    w: WarpedSMMS,
    endpoint: str = "lower",
    count: int = BLOWUP_COUNT,
    start: float = BLOWUP_START,
    tol: float = 1e-6,
) -> BlowupFit:
    """
    끝점으로 기하급수적으로 다가가며 ρ(∂t,∂t)의 발산 여부와 지수 k 적합

    Args:
        w: 워프곱 SMMS
        endpoint: "lower" 또는 "upper"
        count: 샘플 개수 (거리 start, start/2, ...)
        start: 끝점에서 첫 샘플까지 거리
        tol: 발산 판정 임계값 (값이 1/tol을 넘고 k >= 1)

    Raises:
        DomainError: 끝점이 무한이거나 샘플이 구간 밖인 경우
    """
    if endpoint not in ("lower", "upper"):
        raise ValueError(f"endpoint must be 'lower' or 'upper', got {endpoint!r}")
    lo, hi = w.interval
    edge = lo if endpoint == "lower" else hi
    if math.isinf(edge):
        raise DomainError(f"{w.name}: cannot probe an infinite endpoint")
    start = min(start, 0.25 * (hi - lo)) if math.isfinite(hi - lo) else start
    origin = edge + start if endpoint == "lower" else edge - start
    ts = geometric_approach(edge, origin, count)
    distance = np.abs(ts - edge)
    ricci_tt = warped_curvature_closed(w, ts).ricci_tt
    table = build_blowup_table(distance, ricci_tt)

    finite = np.isfinite(table["log_abs_ricci_tt"].to_numpy())
    if finite.sum() < 2:
        k, c, stderr = 0.0, sup_abs(ricci_tt), math.nan
    else:
        X = sm.add_constant(table.loc[finite, "log_distance"].to_numpy())
        model = sm.OLS(table.loc[finite, "log_abs_ricci_tt"].to_numpy(), X).fit()
        k = -float(model.params[1])
        c = math.exp(float(model.params[0]))
        stderr = float(model.bse[1])
    diverges = k >= 1.0 and sup_abs(ricci_tt) > 1.0 / tol
    logger.info(f"{w.name}: blowup probe at t={edge}: k={k:.4f} c={c:.6g} diverges={diverges}")
    return BlowupFit(edge, diverges, k, c, stderr, table)


# ==============================================================================
# Critical points of v
# ==============================================================================


def count_critical_points(w: WarpedSMMS, points: int = 4001, extension: float = 0.02) -> int:
    """
    v' 부호 변화 개수 (dead-band 1e-9)

    유한 끝점은 구간 길이의 extension 비율만큼 바깥까지 격자를 늘려 끝점의 극(pole)을 센다.
    """
    lo, hi = w.interval
    a = lo if math.isfinite(lo) else (hi - DEFAULT_WINDOW if math.isfinite(hi) else -DEFAULT_WINDOW)
    b = hi if math.isfinite(hi) else (lo + DEFAULT_WINDOW if math.isfinite(lo) else DEFAULT_WINDOW)
    pad = extension * (b - a)
    if math.isfinite(lo):
        a -= pad
    if math.isfinite(hi):
        b += pad
    grid = np.linspace(a, b, points)
    with np.errstate(all="ignore"):
        dv = np.asarray(w.v_first(grid), dtype=float)
    dv = dv[np.isfinite(dv)]
    count = len(sign_changes(dv, CRITICAL_DEAD_BAND))
    logger.debug(f"{w.name}: {count} critical points of v on [{a:.4g}, {b:.4g}]")
    return count


# ==============================================================================
# Global verdict
# ==============================================================================


class GlobalCase(Enum):
    SPHERE = "sphere"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"
    WARPED_RICCI_FLAT = "warped-ricci-flat"
    INCOMPLETE = "incomplete"
    UNMATCHED = "unmatched"


@dataclass(frozen=True)
class GlobalVerdict:
    case: GlobalCase
    fitted_params: Optional[FamilyParams] = None
    fit_residual: float = math.nan
    reason: Optional[str] = None
    mu_expected: Optional[float] = None
    quasi_einstein: bool = False
    critical_points: Optional[int] = None

    @property
    def label(self) -> str:
        """출력용 이름 (예: "incomplete: ricci-blowup")"""
        if self.case is GlobalCase.INCOMPLETE and self.reason:
            return f"{self.case.value}: {self.reason}"
        return self.case.value


@dataclass(frozen=True)
class _Model:
    case: GlobalCase
    phi: Callable[[np.ndarray], np.ndarray]
    v: Callable[[np.ndarray, np.ndarray], np.ndarray]
    init: Callable[[np.ndarray, np.ndarray], List[float]]


def _space_form_model(lam: float) -> _Model:
    """λ 부호별 공간형 모델: φ와 v = A + B·w(t)"""
    if lam > 0:
        s = math.sqrt(2.0 * lam)
        case, phi, wave = GlobalCase.SPHERE, (lambda t: np.sin(s * t) / s), (lambda t: np.cos(s * t))
    elif lam < 0:
        s = math.sqrt(-2.0 * lam)
        case, phi, wave = GlobalCase.HYPERBOLIC, (lambda t: np.sinh(s * t) / s), (lambda t: np.cosh(s * t))
    else:
        case, phi, wave = GlobalCase.EUCLIDEAN, (lambda t: t), (lambda t: t ** 2)

    def v(x, t):
        return x[0] + x[1] * wave(t)

    def init(t, v_obs):
        w0, w1 = wave(t[0]), wave(t[-1])
        B = (v_obs[-1] - v_obs[0]) / (w1 - w0)
        return [float(v_obs[0] - B * w0), float(B)]

    return _Model(case, phi, v, init)


def _fit(model: _Model, t: np.ndarray, phi_obs: np.ndarray, v_obs: np.ndarray) -> Tuple[np.ndarray, float]:
    phi_mismatch = sup_abs(phi_obs - model.phi(t))

    def residuals(x):
        return model.v(x, t) - v_obs

    result = least_squares(residuals, model.init(t, v_obs), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    scale = max(1.0, sup_abs(v_obs))
    return result.x, max(phi_mismatch, sup_abs(residuals(result.x)) / scale)


def _fit_thm14_3b(lam: float, t: np.ndarray, phi_obs: np.ndarray, v_obs: np.ndarray) -> Tuple[np.ndarray, float]:
    """φ = A e^{st}, v = B + AC(e^{st} − 1) 의 (A, B, C) 적합"""
    s = math.sqrt(-2.0 * lam)
    e = np.exp(s * t)

    def residuals(x):
        A, B, C = x
        return np.concatenate([np.log(phi_obs) - np.log(np.abs(A) * e), (B + A * C * (e - 1.0) - v_obs) / max(1.0, sup_abs(v_obs))])

    A0 = float(np.mean(phi_obs / e))
    slope = (v_obs[-1] - v_obs[0]) / (e[-1] - e[0])
    intercept = v_obs[0] - slope * e[0]
    x0 = [A0, float(intercept + slope), float(slope / A0)]
    result = least_squares(residuals, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return result.x, sup_abs(residuals(result.x))


def _mu_matches(w: WarpedSMMS, mu_expected: float) -> bool:
    if math.isclose(w.m, 1.0):
        return True
    return abs(w.mu - mu_expected) <= MU_REL_TOL * max(1.0, abs(mu_expected))


def match_global(
    w: Union[WarpedSMMS, SMMSChart],
    report: ConditionReport,
    tol: float = 1e-6,
) -> GlobalVerdict:
    """
    전역 모델 공간 대응

    유한 끝점에서 리치 blowup이 보이면 Incomplete. 그 외에는 λ 부호와 v 임계점 유무로
    공간형 (임계점 있음) 또는 워프 리치 평탄 (λ < 0, 임계점 없음) 모델에 적합한다.
    m = 1이면 μ는 자유이며 기록만 한다.

    Args:
        w: 워프곱 SMMS (차트 전용 SMMS는 Unmatched)
        report: condition_report 결과 (lambda_fit, quasi_einstein 사용)
        tol: 발산 판정과 λ 부호 판정 허용치
    """
    if not isinstance(w, WarpedSMMS):
        return GlobalVerdict(GlobalCase.UNMATCHED, reason="chart-only")

    for side, edge in (("lower", w.interval[0]), ("upper", w.interval[1])):
        if math.isfinite(edge) and blowup_probe(w, side, tol=tol).diverges:
            return GlobalVerdict(GlobalCase.INCOMPLETE, reason="ricci-blowup")

    t = sample_times(w, FIT_SAMPLES)
    # 부호는 리포트의 λ, 값은 닫힌 형식 r1에서 다시 읽는다
    lam = 0.0 if abs(report.lambda_fit) <= max(tol, 1e-8) else lambda_from_warp(w, t)
    critical = count_critical_points(w)
    phi_obs, v_obs = w.phi(t), w.v(t)
    base = dict(n=w.n, m=w.m, lam=lam, mu=w.mu if not math.isclose(w.m, 1.0) else None)

    if critical > 0:
        model = _space_form_model(lam)
        (A, B), residual = _fit(model, t, phi_obs, v_obs)
        residual = max(residual, abs(w.fiber.beta - (w.n - 2)))
        if lam == 0:
            xi, kappa = A, 2.0 * B
            mu_expected = -2.0 * xi * kappa
        else:
            xi, kappa = A + B, 2.0 * lam * A
            mu_expected = 2.0 * xi * (xi * lam - kappa)
        params = FamilyParams(A=float(A), B=float(B), **base)
        if residual > FIT_TOL:
            return GlobalVerdict(GlobalCase.UNMATCHED, params, residual, "space-form fit failed", mu_expected,
                                 report.quasi_einstein, critical)
        if not _mu_matches(w, mu_expected):
            return GlobalVerdict(GlobalCase.UNMATCHED, params, residual, "mu mismatch", mu_expected,
                                 report.quasi_einstein, critical)
        if model.case is GlobalCase.SPHERE:
            pole = math.pi / math.sqrt(2.0 * lam)
            if A - abs(B) <= 0 or w.interval[1] < pole * (1.0 - 1e-6):
                return GlobalVerdict(GlobalCase.INCOMPLETE, params, residual, "density-singular", mu_expected,
                                     report.quasi_einstein, critical)
        logger.info(f"{w.name}: matched {model.case.value} with A={A:.10g} B={B:.10g}")
        return GlobalVerdict(model.case, params, residual, None, mu_expected, report.quasi_einstein, critical)

    if lam < 0:
        (A, B, C), residual = _fit_thm14_3b(lam, t, phi_obs, v_obs)
        if w.fiber.beta != 0:
            residual = max(residual, abs(w.fiber.beta))
        mu_expected = -2.0 * (B - A * C) ** 2 * lam
        params = FamilyParams(A=float(A), B=float(B), C=float(C), **base)
        constraints = A > 0 and B > 0 and C > 0 and A * C <= B * (1.0 + FIT_TOL)
        if residual <= FIT_TOL and constraints and _mu_matches(w, mu_expected):
            logger.info(f"{w.name}: matched warped-ricci-flat with A={A:.10g} B={B:.10g} C={C:.10g}")
            return GlobalVerdict(GlobalCase.WARPED_RICCI_FLAT, params, residual, None, mu_expected,
                                 report.quasi_einstein, critical)
        return GlobalVerdict(GlobalCase.UNMATCHED, params, residual, "warped ricci-flat fit failed", mu_expected,
                             report.quasi_einstein, critical)

    return GlobalVerdict(GlobalCase.UNMATCHED, reason="no critical points", quasi_einstein=report.quasi_einstein,
                         critical_points=critical)
