"""
Error Hierarchy
SMMS 검증 엔진 전역에서 사용하는 커스텀 예외 모음
"""

from typing import Optional, Sequence


class SMMSError(Exception):
    """SMMS 엔진 관련 최상위 커스텀 예외"""
    pass


# ==============================================================================
# Geometry / numeric errors
# ==============================================================================


class GeometryError(SMMSError):
    """수치 기하 계산 중 발생하는 예외"""
    pass


class DomainError(GeometryError):
    """스텐실 또는 평가점이 차트 영역을 벗어났을 때의 예외"""

    def __init__(self, message: str, point: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.point = None if point is None else tuple(float(x) for x in point)


class SingularMetric(GeometryError):
    """평가점에서 계량이 양의 정부호가 아닐 때의 예외"""

    def __init__(self, message: str, point: Sequence[float], min_eigenvalue: float):
        super().__init__(message)
        self.point = tuple(float(x) for x in point)
        self.min_eigenvalue = float(min_eigenvalue)


class RankMismatch(GeometryError):
    """텐서 계수(rank) 또는 차원이 맞지 않을 때의 예외"""
    pass


class NonPositiveWarp(GeometryError):
    """워핑 함수 φ(t)가 양수가 아닐 때의 예외"""
    pass


class NonIntegerM(GeometryError):
    """형식적 워프곱에 정수가 아닌 m이 주어졌을 때의 예외"""
    pass


class UnrealizableFiber(GeometryError):
    """파이버 실현(realization)이 β 또는 차원과 맞지 않을 때의 예외"""
    pass


# ==============================================================================
# Contract / catalog errors
# ==============================================================================


class InsufficientSamples(SMMSError):
    """샘플 점이 3개 미만일 때의 예외"""
    pass


class ParamConstraintViolation(SMMSError):
    """카탈로그 파라미터 제약 조건 위반 예외"""

    def __init__(self, clause: str, family: str = ""):
        prefix = f"{family}: " if family else ""
        super().__init__(f"{prefix}parameter constraint violated ({clause})")
        self.clause = clause
        self.family = family


class UnknownFamily(SMMSError):
    """등록되지 않은 패밀리 식별자 예외"""
    pass


class PreconditionFailed(SMMSError):
    """연산의 사전 조건을 만족하지 않을 때의 예외"""
    pass


class Indeterminate(SMMSError):
    """분기 판정이 불가능할 때의 예외 (두 결손값을 함께 보관)"""

    def __init__(self, message: str, einstein_defect: float, branch2_defect: float):
        super().__init__(message)
        self.einstein_defect = float(einstein_defect)
        self.branch2_defect = float(branch2_defect)


# ==============================================================================
# ODE integration errors
# ==============================================================================


class IntegrationError(SMMSError):
    """ODE 적분 관련 예외"""
    pass


class StepSizeUnderflow(IntegrationError):
    """적응 스텝 크기가 하한 아래로 떨어졌을 때의 예외"""
    pass


class NonFiniteState(IntegrationError):
    """적분 상태에 NaN/inf가 나타났을 때의 예외"""
    pass


class InvalidProblem(IntegrationError):
    """Obata 초기값 문제에서 f(ξ)=0일 때의 예외"""
    pass
