"""
런타임 설정 파일
환경변수(.env 포함)를 통해 허용 오차, 샘플 수, 유한차분 스텝, 로그 레벨을 제어
"""

import os

from dotenv import load_dotenv

load_dotenv()

# ==============================================================================
# 실행 모드 플래그
# ==============================================================================

# 환경변수 ENVIRONMENT로 제어
# 사용법:
#   개발 모드: ENVIRONMENT=dev scripts/start.sh verify --family weighted-sphere
#   프로덕션: ENVIRONMENT=prod scripts/start.sh verify --family weighted-sphere
ENVIRONMENT = os.getenv("ENVIRONMENT", "dev").lower()
DEV_MODE = ENVIRONMENT in ("dev", "development")

# ==============================================================================
# 검증 설정
# ==============================================================================

# SMMS_TOL이 CLI 기본 허용 오차를 덮어씀
DEFAULT_TOL = float(os.getenv("SMMS_TOL", "1e-6"))
DEFAULT_SAMPLES = int(os.getenv("SMMS_SAMPLES", "17"))

# CLI 실행용 유한차분 상대 스텝 (라이브러리 FDConfig 기본값은 1e-3)
FD_REL_STEP = float(os.getenv("SMMS_FD_REL_STEP", "5e-3"))

# 샘플별 병렬 평가 폭 (1이면 순차 실행)
N_JOBS = int(os.getenv("SMMS_N_JOBS", "1"))

LOG_LEVEL = os.getenv("SMMS_LOG_LEVEL", "DEBUG" if DEV_MODE else "WARNING").upper()

# ==============================================================================
# 고정 허용치 / 영역 설정
# ==============================================================================

ORACLE_REL_TOL = 1e-5  # 닫힌 형식 vs 유한차분 오라클
GOLDEN_ABS_TOL = 1e-4  # 골든 성분값 비교
DOMAIN_MARGIN = 1e-3  # 열린 구간 끝점에서 줄이는 폭
DEFAULT_WINDOW = 5.0  # 무한 구간을 자르는 길이
WEYL_HARMONIC_TOL = 1e-4  # Einstein 분기의 비가중 ‖δW‖, ‖ι_∇f W‖


def get_tolerance(override: float = None) -> float:
    """CLI/서비스에서 사용할 허용 오차 반환"""
    tol = DEFAULT_TOL if override is None else float(override)
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return tol


def get_sample_count(override: int = None) -> int:
    """검증 샘플 수 반환 (최소 3)"""
    samples = DEFAULT_SAMPLES if override is None else int(override)
    if samples < 3:
        raise ValueError(f"samples must be >= 3, got {samples}")
    return samples


def get_fd_config(rel_step: float = None):
    """CLI 실행용 FDConfig 생성"""
    from services.geometry.tensor_core import FDConfig

    return FDConfig(rel_step=FD_REL_STEP if rel_step is None else float(rel_step))
