"""
Numeric Helpers
1차원 유한차분, 구간/샘플 생성, 출력 포맷팅 등 공통 유틸리티
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np

# ==============================================================================
# 1-D finite differences (7-point centered)
# ==============================================================================

_FIRST_7PT = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])
_SECOND_7PT = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
_OFFSETS_7PT = np.arange(-3, 4, dtype=float)

# 2차 도함수는 반올림 오차가 h^-2로 커지므로 스텝을 넓게 잡음
FIRST_DERIVATIVE_STEP = 1e-4
SECOND_DERIVATIVE_STEP = 1e-3


def derivative_1d(
    fn: Callable[[np.ndarray], np.ndarray],
    t,
    order: int = 1,
    rel_step: Optional[float] = None,
) -> np.ndarray:
    """
    7점 중심 차분으로 1차원 함수의 1계/2계 도함수 계산

    Args:
        fn: 배열을 받아 같은 모양의 배열을 반환하는 함수
        t: 평가 지점 (스칼라 또는 배열)
        order: 1 또는 2
        rel_step: 상대 스텝 (h = rel_step * max(1, |t|))

    Returns:
        np.ndarray: t와 같은 모양의 도함수 값
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    t = np.asarray(t, dtype=float)
    if rel_step is None:
        rel_step = FIRST_DERIVATIVE_STEP if order == 1 else SECOND_DERIVATIVE_STEP
    h = rel_step * np.maximum(1.0, np.abs(t))
    grid = t[..., None] + _OFFSETS_7PT * h[..., None]
    values = np.asarray(fn(grid), dtype=float)
    weights = _FIRST_7PT if order == 1 else _SECOND_7PT
    return (values @ weights) / h ** order


# ==============================================================================
# Interval / sample helpers
# ==============================================================================


def shrink_interval(
    lower: float, upper: float, margin: float, window: float
) -> Tuple[float, float]:
    """
    열린 구간을 유한 창으로 자르고 양 끝을 margin만큼 줄임

    무한 끝점은 반대쪽 끝(또는 0)에서 window 길이로 자른다.
    """
    if math.isinf(lower) and math.isinf(upper):
        lower, upper = -window, window
    elif math.isinf(lower):
        lower = upper - window
    elif math.isinf(upper):
        upper = lower + window
    lo, hi = lower + margin, upper - margin
    if not lo < hi:
        raise ValueError(f"interval ({lower}, {upper}) is too short for margin {margin}")
    return lo, hi


def interior_samples(lower: float, upper: float, count: int, fraction: float = 0.8) -> np.ndarray:
    """구간 중앙 fraction 비율 안에서 균등 간격 샘플 생성"""
    mid = 0.5 * (lower + upper)
    half = 0.5 * fraction * (upper - lower)
    return np.linspace(mid - half, mid + half, count)


def geometric_approach(endpoint: float, start: float, count: int, ratio: float = 0.5) -> np.ndarray:
    """끝점에 기하급수적으로 다가가는 샘플 (start에서 출발)"""
    distance = abs(start - endpoint)
    direction = 1.0 if start > endpoint else -1.0
    return endpoint + direction * distance * ratio ** np.arange(count)


# ==============================================================================
# Norms / formatting
# ==============================================================================


def sup_abs(values) -> float:
    """배열 전체의 최대 절대값 (빈 배열이면 0)"""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


def format_float(value: float) -> str:
    """17자리 유효숫자 고정 포맷 (inf/nan은 문자열)"""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def sign_changes(values: np.ndarray, dead_band: float = 1e-9) -> List[int]:
    """
    dead-band 밖의 값들 사이에서 엄격한 부호 변화 위치 목록 반환

    dead-band 안의 값은 건너뛰므로 접하는 영점은 한 번만 센다.
    """
    changes = []
    last_sign = 0
    for idx, value in enumerate(np.asarray(values, dtype=float)):
        if abs(value) <= dead_band:
            continue
        sign = 1 if value > 0 else -1
        if last_sign and sign != last_sign:
            changes.append(idx)
        last_sign = sign
    return changes
