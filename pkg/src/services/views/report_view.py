"""
Report View
검증 결과의 JSON / text 렌더링과 CSV 출력
"""

import json
import math
from typing import Any, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from services.helpers.utils import format_float
from services.verification.verification_service import VerificationResult

CSV_FLOAT_FORMAT = "%.17g"


def _jsonable(value: Any) -> Any:
    """
    json.dumps 입력으로 변환

    float은 17자리 유효숫자로 고정하고, ±inf는 문자열 "inf"/"-inf", NaN은 None(null)으로 바꾼다.
    numpy 스칼라는 파이썬 값으로 풀고, 튜플은 리스트가 된다.
    """
    if isinstance(value, Mapping):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return format_float(value)
        return float(format_float(value))
    return value


def _dumps(value: Any) -> str:
    return json.dumps(_jsonable(value), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def result_to_mapping(result: VerificationResult) -> dict:
    """JSON 스키마 순서의 dict"""
    return {
        "family": result.family,
        "params": {key: float(value) if key != "n" else int(value) for key, value in result.params.items()},
        "lambda_fit": float(result.lambda_fit),
        "kappa": float(result.kappa),
        "kappa_spread": float(result.kappa_spread),
        "residuals": {key: float(result.residuals[key]) for key in ("einstein", "harmonic", "cotton", "obata")},
        "branch": result.branch,
        "global_case": result.global_case,
        "golden_checks": [
            {
                "name": check.name,
                "expected": float(check.expected),
                "actual": float(check.actual),
                "pass": bool(check.passed),
            }
            for check in result.golden_checks
        ],
    }


def render_json(result: VerificationResult) -> str:
    """결정적 JSON 텍스트 (같은 입력이면 바이트 단위로 동일)"""
    return _dumps(result_to_mapping(result))


def render_text(result: VerificationResult) -> str:
    """정렬된 key/value 목록"""
    rows: List[Tuple[str, str]] = [
        ("family", result.family),
        ("params", " ".join(f"{k}={format_float(v)}" for k, v in result.params.items())),
        ("lambda_fit", format_float(result.lambda_fit)),
        ("kappa", format_float(result.kappa)),
        ("kappa_spread", format_float(result.kappa_spread)),
    ]
    rows += [(f"residual.{key}", format_float(value)) for key, value in result.residuals.items()]
    rows += [("branch", result.branch), ("global_case", result.global_case or "-")]
    if result.weyl_harmonicity is not None:
        delta_w, interior_w = result.weyl_harmonicity
        rows += [("weyl.delta", format_float(delta_w)), ("weyl.interior_grad_f", format_float(interior_w))]
    for check in result.golden_checks:
        status = "pass" if check.passed else "FAIL"
        rows.append((f"golden.{check.name}", f"{format_float(check.actual)} (expected {format_float(check.expected)}) {status}"))
    rows.append(("status", "PASS" if result.passed else "FAIL"))
    return render_key_values(rows)


def render_key_values(rows: Sequence[Tuple[str, str]]) -> str:
    width = max((len(key) for key, _ in rows), default=0)
    return "\n".join(f"{key.ljust(width)}  {value}" for key, value in rows) + "\n"


def render_table(df: pd.DataFrame) -> str:
    """DataFrame 텍스트 출력 (17자리 유효숫자)"""
    return df.to_string(index=False, float_format=lambda x: format(x, ".17g")) + "\n"


def write_csv(df: pd.DataFrame, path: Optional[str] = None) -> Optional[str]:
    """
    CSV 출력 ('.' 소수점, '\\n' 줄바꿈, 17자리 유효숫자)

    Args:
        df: 출력할 테이블
        path: 파일 경로 (None이면 문자열 반환)
    """
    return df.to_csv(path, index=False, lineterminator="\n", float_format=CSV_FLOAT_FORMAT)


def render_mapping(mapping: Mapping[str, Any]) -> str:
    """임의 dict의 결정적 JSON 텍스트"""
    return _dumps(mapping)
