"""
Classify Module
분기 판정, 일반화 Obata 검증/재구성, 전역 모델 대응
"""

from services.classify.branch import BranchVerdict, classify_branch
from services.classify.global_match import (
    BlowupFit,
    GlobalCase,
    GlobalVerdict,
    blowup_probe,
    count_critical_points,
    match_global,
)
from services.classify.integrator import Trajectory, integrate_ode
from services.classify.obata import ObataProblem, ObataSolution, obata_residual, solve_obata_ivp

__all__ = [
    "BlowupFit",
    "BranchVerdict",
    "GlobalCase",
    "GlobalVerdict",
    "ObataProblem",
    "ObataSolution",
    "Trajectory",
    "blowup_probe",
    "classify_branch",
    "count_critical_points",
    "integrate_ode",
    "match_global",
    "obata_residual",
    "solve_obata_ivp",
]
