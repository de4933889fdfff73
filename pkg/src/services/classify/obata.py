"""
Generalized Obata Module
Hes_v + (2λv − κ)g = 0 검증과 초기값 문제 u'' + (2λu − κ) = 0 으로부터의 계량 재구성
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from services.classify.integrator import Trajectory, integrate_ode
from services.config.runtime_config import DEFAULT_WINDOW
from services.geometry.tensor_core import (
    ChartMetric,
    FDConfig,
    conformal_space_form_metric,
    frame_components_array,
    orthonormal_frame_array,
    scalar_calculus_array,
)
from services.geometry.weighted import (
    DEFAULT_REPORT_TOL,
    ConditionReport,
    SMMSChart,
    weighted_fields_array,
)
from services.helpers.errors import InsufficientSamples, InvalidProblem, PreconditionFailed
from services.helpers.utils import sup_abs
from services.tables.report_tables import build_trajectory_table

logger = logging.getLogger(__name__)

TRAJECTORY_POINTS = 201


# ==============================================================================
# Obata residual
# ==============================================================================


def _einstein_precondition(s: SMMSChart, lam: float, points: np.ndarray, cfg: FDConfig) -> tuple:
    wf = weighted_fields_array(s, points, cfg)
    frames = orthonormal_frame_array(wf.g)
    weighted = sup_abs(frame_components_array(wf.P - lam * wf.g, frames))
    ricci = wf.ricci - (wf.scalar / s.n)[..., None, None] * wf.g
    return weighted, sup_abs(frame_components_array(ricci, frames))


def obata_residual(
    s: SMMSChart,
    lam: float,
    kappa: float,
    samples: Sequence[Sequence[float]],
    cfg: FDConfig = FDConfig(),
    tol: float = DEFAULT_REPORT_TOL,
    report: Optional[ConditionReport] = None,
) -> float:
    """
    일반화 Obata 방정식 잔차 sup ‖Hes_v + (2λv − κ)g‖ (정규직교 틀)

    Args:
        s: 가중 Einstein이고 바탕 계량이 Einstein인 SMMS
        lam, kappa: 가중 Einstein 상수와 scale
        samples: 샘플 점
        cfg: 유한차분 설정
        tol: 전제조건 허용치
        report: 이미 계산된 condition_report (있으면 전제조건 재계산 생략)

    Raises:
        PreconditionFailed: 가중 Einstein 또는 바탕 Einstein 조건 불만족
        InsufficientSamples: 샘플 없음
    """
    points = np.asarray(samples, dtype=float)
    if points.ndim != 2 or len(points) == 0:
        raise InsufficientSamples("obata_residual needs at least one sample point")

    if report is not None:
        weighted, ricci = report.einstein_residual, report.ricci_einstein_residual
    else:
        weighted, ricci = _einstein_precondition(s, lam, points, cfg)
    if weighted > tol or ricci > tol:
        raise PreconditionFailed(
            f"{s.name}: obata residual needs a weighted Einstein SMMS over an Einstein metric "
            f"(weighted={weighted:.3e}, ricci={ricci:.3e}, tol={tol:.1e})"
        )

    g = s.chart.metric(points)
    hess_v = scalar_calculus_array(s.chart, s.v, points, cfg).hess
    v = s.v(points)
    residual = hess_v + (2.0 * lam * v - kappa)[..., None, None] * g
    value = sup_abs(frame_components_array(residual, orthonormal_frame_array(g)))
    logger.info(f"{s.name}: obata residual {value:.3e} (lambda={lam:.6g}, kappa={kappa:.6g})")
    return value


# ==============================================================================
# Initial value problem
# ==============================================================================


@dataclass(frozen=True)
class ObataProblem:
    """
    u'' + (2λu − κ) = 0, u(0) = xi, u'(0) = 0

    Raises:
        InvalidProblem: 2λ·xi − κ = 0 (상수 해)
    """

    lam: float
    kappa: float
    xi: float

    def __post_init__(self):
        if self.source_value == 0:
            raise InvalidProblem(f"2*lambda*xi - kappa must be nonzero (lambda={self.lam}, kappa={self.kappa}, xi={self.xi})")

    @property
    def source_value(self) -> float:
        """f(ξ) = 2λξ − κ"""
        return 2.0 * self.lam * self.xi - self.kappa

    def closed_form(self, t) -> np.ndarray:
        """선형 IVP의 닫힌 형식 해"""
        t = np.asarray(t, dtype=float)
        lam, kappa, xi = self.lam, self.kappa, self.xi
        if lam == 0:
            return xi + 0.5 * kappa * t ** 2
        center = kappa / (2.0 * lam)
        s = math.sqrt(abs(2.0 * lam))
        wave = np.cos(s * t) if lam > 0 else np.cosh(s * t)
        return center + (xi - center) * wave


@dataclass
class ObataSolution:
    """
    IVP 해와 재구성 계량 g = dt² + (u'/f(ξ))² g_{S^{n−1}}

    Attributes:
        T: 닫힘 시각 (λ > 0) 또는 math.inf
        t_max: 적분 구간 끝 (λ > 0이면 T)
        trajectory: 적분 결과
        table: (t, u, uprime, warp) 궤적 테이블
        chart: (0, t_max) 위의 재구성 계량 차트
        closed_form_error: 닫힌 형식 해와의 최대 차이
    """

    problem: ObataProblem
    n: int
    T: float
    t_max: float
    trajectory: Trajectory
    table: pd.DataFrame = field(repr=False)
    chart: ChartMetric = field(repr=False)
    closed_form_error: float = math.nan

    def u(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.asarray(self.trajectory.sol(t.ravel())[0]).reshape(t.shape)

    def uprime(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.asarray(self.trajectory.sol(t.ravel())[1]).reshape(t.shape)

    def warp(self, t) -> np.ndarray:
        """워프 인자 −u'(t)/f(ξ) (작은 t에서 양수)"""
        return -self.uprime(t) / self.problem.source_value

    @property
    def is_closed(self) -> bool:
        return math.isfinite(self.T)


def _closing_event(problem: ObataProblem):
    def event(t, y):
        return y[1]

    event.terminal = True
    # u'은 0에서 −f(ξ) 방향으로 출발하므로 되돌아오는 방향만 잡는다
    event.direction = 1.0 if problem.source_value > 0 else -1.0
    return event


def solve_obata_ivp(
    prob: ObataProblem,
    n: int,
    t_max: Optional[float] = None,
    rtol: float = 1e-11,
    atol: float = 1e-12,
    points: int = TRAJECTORY_POINTS,
) -> ObataSolution:
    """
    Obata IVP를 풀고 M_{f,ξ} 계량을 재구성

    λ > 0이면 u'의 첫 영점 T에서 멈춘다 (구면 닫힘). λ <= 0이면 t_max까지 적분하고 T = inf.

    Args:
        prob: IVP 파라미터
        n: 재구성 계량 차원 (>= 2)
        t_max: 적분 상한 (기본값: λ > 0이면 2π/√(2λ), 아니면 DEFAULT_WINDOW)
        rtol, atol: 적분 허용치
        points: 궤적 테이블 점 개수

    Raises:
        InvalidProblem: n < 2 또는 닫힘 이벤트를 찾지 못한 경우
        StepSizeUnderflow, NonFiniteState: 적분 실패
    """
    if n < 2:
        raise InvalidProblem(f"reconstructed metric needs n >= 2, got {n}")
    lam = prob.lam
    if t_max is None:
        t_max = 2.0 * math.pi / math.sqrt(2.0 * lam) if lam > 0 else DEFAULT_WINDOW

    def rhs(t, y):
        return [y[1], prob.kappa - 2.0 * lam * y[0]]

    events = [_closing_event(prob)] if lam > 0 else None
    trajectory = integrate_ode(rhs, [prob.xi, 0.0], (0.0, t_max), rtol=rtol, atol=atol, events=events)

    if lam > 0:
        T = trajectory.first_event(0)
        if T is None:
            raise InvalidProblem(f"no closing time found before t={t_max} for lambda={lam}")
        end = T
    else:
        T = math.inf
        end = trajectory.t_end

    ts = np.linspace(0.0, end, points)
    states = trajectory.sol(ts)
    u, uprime = states[0], states[1]
    warp = -uprime / prob.source_value
    table = build_trajectory_table(ts, u, uprime, warp)
    closed_error = float(np.max(np.abs(u - prob.closed_form(ts))))

    fiber_metric = conformal_space_form_metric(1.0, n - 1)

    def metric_fn(pts: np.ndarray) -> np.ndarray:
        t = pts[..., 0]
        w = -np.asarray(trajectory.sol(t.ravel())[1]).reshape(t.shape) / prob.source_value
        g = np.zeros(pts.shape[:-1] + (n, n))
        g[..., 0, 0] = 1.0
        g[..., 1:, 1:] = (w ** 2)[..., None, None] * fiber_metric(pts[..., 1:])
        return g

    chart = ChartMetric(
        n,
        metric_fn,
        ((0.0, end),) + tuple((-math.inf, math.inf) for _ in range(n - 1)),
        coord_names=("t",) + tuple(f"x{i + 1}" for i in range(n - 1)),
        name=f"obata(lambda={lam:g}, kappa={prob.kappa:g}, xi={prob.xi:g})",
    )
    logger.info(f"obata IVP: T={T}, closed-form error {closed_error:.3e}")
    return ObataSolution(prob, n, T, end, trajectory, table, chart, closed_error)
