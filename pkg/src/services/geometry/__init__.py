"""
Geometry Module
좌표 차트 곡률 오라클, SMMS 가중 곡률, 워프곱 닫힌 형식
"""

from services.geometry.tensor_core import ChartMetric, FDConfig, TensorValue
from services.geometry.warped_closed import WarpedSMMS, warped_chart
from services.geometry.weighted import Branch, ConditionReport, SMMSChart, condition_report

__all__ = [
    "Branch",
    "ChartMetric",
    "ConditionReport",
    "FDConfig",
    "SMMSChart",
    "TensorValue",
    "WarpedSMMS",
    "condition_report",
    "warped_chart",
]
