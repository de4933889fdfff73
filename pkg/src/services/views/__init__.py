"""
Views Module
검증 리포트 렌더링 함수 모음
"""

from services.views.report_view import (
    render_json,
    render_key_values,
    render_mapping,
    render_table,
    render_text,
    result_to_mapping,
    write_csv,
)

__all__ = [
    "render_json",
    "render_key_values",
    "render_mapping",
    "render_table",
    "render_text",
    "result_to_mapping",
    "write_csv",
]
