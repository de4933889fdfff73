"""
Tables Module
리포트/궤적/프로파일 pandas 테이블 생성기
"""

from services.tables.report_tables import (
    BLOWUP_COLUMNS,
    ORACLE_COLUMNS,
    PROFILE_COLUMNS,
    SAMPLE_RESIDUAL_COLUMNS,
    TRAJECTORY_COLUMNS,
    build_blowup_table,
    build_oracle_table,
    build_profile_table,
    build_sample_table,
    build_trajectory_table,
)

__all__ = [
    "BLOWUP_COLUMNS",
    "ORACLE_COLUMNS",
    "PROFILE_COLUMNS",
    "SAMPLE_RESIDUAL_COLUMNS",
    "TRAJECTORY_COLUMNS",
    "build_blowup_table",
    "build_oracle_table",
    "build_profile_table",
    "build_sample_table",
    "build_trajectory_table",
]
