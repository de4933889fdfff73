"""
Report Tables
샘플별 잔차, 프로파일, Obata 궤적, blowup 적합 결과를 pandas DataFrame으로 구성
"""

from typing import Dict, List, Mapping, Sequence

import numpy as np
import pandas as pd

# ==============================================================================
# 컬럼 정의
# ==============================================================================

SAMPLE_RESIDUAL_COLUMNS = [
    "sample", "f", "J", "Y", "trace_P_over_n", "alpha", "kappa",
    "einstein", "harmonic", "cotton", "ricci_einstein", "gqe", "weyl", "identity",
]

PROFILE_COLUMNS = ["t", "phi", "dphi", "ddphi", "f", "df", "ddf", "v", "r1", "r2", "r3"]

TRAJECTORY_COLUMNS = ["t", "u", "uprime", "warp"]

BLOWUP_COLUMNS = ["distance", "ricci_tt", "log_distance", "log_abs_ricci_tt"]

ORACLE_COLUMNS = ["t", "quantity", "closed_form", "oracle", "rel_error"]


def build_sample_table(rows: List[Dict], coord_names: Sequence[str]) -> pd.DataFrame:
    """
    condition_report 샘플별 잔차 테이블 생성

    Args:
        rows: 샘플별 dict ("point" 튜플 포함)
        coord_names: 좌표 이름 (점 좌표를 개별 컬럼으로 펼침)

    Returns:
        pd.DataFrame: 좌표 컬럼 + SAMPLE_RESIDUAL_COLUMNS
    """
    records = []
    for row in rows:
        record = {name: float(x) for name, x in zip(coord_names, row["point"])}
        record.update({col: row[col] for col in SAMPLE_RESIDUAL_COLUMNS})
        records.append(record)
    df = pd.DataFrame(records, columns=list(coord_names) + SAMPLE_RESIDUAL_COLUMNS)
    df["sample"] = df["sample"].astype(int)
    return df


def build_profile_table(profile: Mapping[str, np.ndarray]) -> pd.DataFrame:
    """워프곱 프로파일 (φ, f, v 및 ODE 잔차) 테이블"""
    columns = [col for col in PROFILE_COLUMNS if col in profile]
    return pd.DataFrame({col: np.asarray(profile[col], dtype=float) for col in columns})


def build_trajectory_table(t, u, uprime, warp) -> pd.DataFrame:
    """Obata 초기값 문제 궤적 테이블 (t, u, uprime, warp)"""
    return pd.DataFrame({
        "t": np.asarray(t, dtype=float),
        "u": np.asarray(u, dtype=float),
        "uprime": np.asarray(uprime, dtype=float),
        "warp": np.asarray(warp, dtype=float),
    }, columns=TRAJECTORY_COLUMNS)


def build_blowup_table(distance, ricci_tt) -> pd.DataFrame:
    """끝점까지 거리 vs ρ(∂t,∂t) 테이블 (로그-로그 적합 입력)"""
    distance = np.asarray(distance, dtype=float)
    ricci_tt = np.asarray(ricci_tt, dtype=float)
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(ricci_tt))
    return pd.DataFrame({
        "distance": distance,
        "ricci_tt": ricci_tt,
        "log_distance": np.log(distance),
        "log_abs_ricci_tt": log_abs,
    }, columns=BLOWUP_COLUMNS)


def build_oracle_table(records: List[Dict]) -> pd.DataFrame:
    """닫힌 형식 vs 유한차분 오라클 비교 테이블"""
    df = pd.DataFrame(records, columns=ORACLE_COLUMNS[:-1])
    scale = np.maximum(1.0, np.abs(df["closed_form"].to_numpy()))
    df["rel_error"] = np.abs(df["oracle"].to_numpy() - df["closed_form"].to_numpy()) / scale
    return df
