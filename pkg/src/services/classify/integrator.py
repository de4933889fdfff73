"""
ODE Integrator
scipy solve_ivp (DOP853) 래퍼: 조밀 출력, 이벤트 검출, 실패를 예외 계층으로 변환
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from services.helpers.errors import NonFiniteState, StepSizeUnderflow

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-12

EventFn = Callable[[float, np.ndarray], float]


@dataclass
class Trajectory:
    """
    적분 결과

    Attributes:
        t, y: 허용된 스텝의 시간과 상태 (y는 (state, steps) 모양)
        sol: 조밀 출력 보간 함수 (sol(t) -> 상태)
        t_events, y_events: 이벤트별 검출 시각/상태 목록
        terminated: terminal 이벤트로 종료되었는지 여부
    """

    t: np.ndarray
    y: np.ndarray
    sol: Callable[[np.ndarray], np.ndarray]
    t_events: List[np.ndarray] = field(default_factory=list)
    y_events: List[np.ndarray] = field(default_factory=list)
    terminated: bool = False

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    def first_event(self, index: int = 0) -> Optional[float]:
        """index번째 이벤트의 첫 검출 시각 (없으면 None)"""
        if index >= len(self.t_events) or len(self.t_events[index]) == 0:
            return None
        return float(self.t_events[index][0])


def _guarded(rhs: Callable[[float, np.ndarray], Sequence[float]]) -> Callable[[float, np.ndarray], np.ndarray]:
    def wrapped(t, y):
        dy = np.asarray(rhs(t, y), dtype=float)
        if not np.all(np.isfinite(dy)):
            raise NonFiniteState(f"non-finite derivative at t={t}: {dy}")
        return dy

    return wrapped


def integrate_ode(
    rhs: Callable[[float, np.ndarray], Sequence[float]],
    y0: Sequence[float],
    t_span: Tuple[float, float],
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    events: Optional[Sequence[EventFn]] = None,
    max_step: float = np.inf,
) -> Trajectory:
    """
    적응형 명시적 적분 (DOP853, 조밀 출력)

    이벤트 함수에는 solve_ivp 규약대로 terminal / direction 속성을 붙일 수 있다.

    Args:
        rhs: 상태공간 벡터장 (t, y) -> y'
        y0: 초기 상태
        t_span: (t0, t1)
        rtol, atol: 스텝별 국소 오차 허용치
        events: 이벤트 함수 목록
        max_step: 최대 스텝 크기

    Returns:
        Trajectory: 적분 결과

    Raises:
        StepSizeUnderflow: 스텝 크기가 붕괴한 경우
        NonFiniteState: 상태 또는 도함수에 NaN/inf가 나타난 경우
    """
    y0 = np.asarray(y0, dtype=float)
    if not np.all(np.isfinite(y0)):
        raise NonFiniteState(f"non-finite initial state {y0}")

    result = solve_ivp(
        _guarded(rhs),
        t_span,
        y0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=list(events) if events else None,
        max_step=max_step,
    )
    if result.status == -1:
        message = str(result.message)
        if "step size" in message.lower():
            raise StepSizeUnderflow(f"integration stopped at t={result.t[-1]}: {message}")
        raise NonFiniteState(f"integration failed at t={result.t[-1]}: {message}")
    if not np.all(np.isfinite(result.y)):
        raise NonFiniteState("non-finite state in accepted steps")

    t_events = list(result.t_events) if result.t_events is not None else []
    y_events = list(result.y_events) if result.y_events is not None else []
    logger.debug(
        f"integrate_ode: {len(result.t)} steps over [{t_span[0]}, {result.t[-1]}], "
        f"events={[len(te) for te in t_events]}"
    )
    return Trajectory(
        t=result.t,
        y=result.y,
        sol=result.sol,
        t_events=t_events,
        y_events=y_events,
        terminated=result.status == 1,
    )
