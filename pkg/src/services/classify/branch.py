"""
Branch Classification
워프곱 SMMS의 이분법 판정: Einstein 분기 또는 φ = A(Bt)^{1/(n−1)}, f = −log(Bt) 분기
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from services.geometry.warped_closed import (
    BranchProbe,
    WarpedSMMS,
    branch_probe,
    lambda_from_warp,
    ode_residuals,
)
from services.geometry.weighted import Branch
from services.helpers.errors import Indeterminate
from services.helpers.utils import sup_abs

logger = logging.getLogger(__name__)

DEFAULT_BRANCH_TOL = 1e-6


@dataclass(frozen=True)
class BranchVerdict:
    """
    분기 판정 결과와 근거

    Attributes:
        branch: EINSTEIN 또는 NON_EINSTEIN_EXAMPLE12
        lambda_fit: 판정에 쓰인 λ
        ode_residual: ODE 시스템 잔차의 sup
        probe: 두 분기의 결손값
        einstein_constant: Einstein 분기일 때 ρ = 2(n−1)λ g 의 상수
        forced: 두 번째 분기에서 강제되는 데이터 (m, μ, β, λ)
        fitted: 두 번째 분기에서 적합한 (A, B)
        fit_residual: 적합 후 sup 불일치
    """

    branch: Branch
    lambda_fit: float
    ode_residual: float
    probe: BranchProbe
    einstein_constant: Optional[float] = None
    forced: Dict[str, float] = field(default_factory=dict)
    fitted: Dict[str, float] = field(default_factory=dict)
    fit_residual: float = math.nan


def fit_example12(w: WarpedSMMS, ts: Sequence[float]) -> tuple:
    """
    φ = A(Bt)^{1/(n−1)}, f = −log(Bt) 의 (A, B) 적합

    두 점 닫힌 형식 역산으로 초기화하고 로그 변환된 잔차로 최소제곱 적합한다.

    Returns:
        tuple: (A, B, fit_residual)
    """
    ts = np.asarray(ts, dtype=float)
    k = 1.0 / (w.n - 1)
    phi = w.phi(ts)
    f = w.f(ts)

    def residuals(x):
        log_a, log_b = x
        log_bt = log_b + np.log(ts)
        return np.concatenate([np.log(phi) - (log_a + k * log_bt), f + log_bt])

    log_b0 = -f[0] - math.log(ts[0])
    log_a0 = math.log(phi[0]) - k * (log_b0 + math.log(ts[0]))
    result = least_squares(residuals, [log_a0, log_b0], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    A, B = math.exp(result.x[0]), math.exp(result.x[1])
    fit_residual = sup_abs(residuals(result.x))
    logger.debug(f"{w.name}: example-1-2 fit A={A:.12g} B={B:.12g} residual={fit_residual:.3e}")
    return A, B, fit_residual


def classify_branch(
    w: WarpedSMMS,
    ts: Sequence[float],
    tol: float = DEFAULT_BRANCH_TOL,
    lam: Optional[float] = None,
) -> BranchVerdict:
    """
    이분법 판정

    ODE 잔차가 허용치 이내일 때만 판정한다. Einstein 결손이 작으면 Einstein 분기,
    두 번째 분기 결손이 작으면 강제 데이터 m = 1/2, μ = 0, β = 0, λ = 0을 확인하고 (A, B)를 적합한다.

    Args:
        w: 워프곱 SMMS
        ts: 3개 이상의 내부 t 샘플
        tol: 판정 허용치
        lam: 주어지지 않으면 r1으로부터 추정

    Raises:
        Indeterminate: ODE 잔차 실패, 두 결손 모두 크거나 모두 작은 경우, 강제 데이터 불일치
        InsufficientSamples: 샘플 3개 미만
    """
    ts = np.asarray(ts, dtype=float)
    lam = lambda_from_warp(w, ts) if lam is None else float(lam)
    probe = branch_probe(w, lam, ts)
    residual = ode_residuals(w, lam, ts).sup()
    logger.info(
        f"{w.name}: lambda={lam:.6g} ode={residual:.3e} "
        f"einstein_defect={probe.einstein_defect:.3e} branch2_defect={probe.branch2_defect:.3e}"
    )

    if residual > tol:
        raise Indeterminate(
            f"{w.name}: ODE residual {residual:.3e} above tolerance {tol:.1e}",
            probe.einstein_defect,
            probe.branch2_defect,
        )
    einstein = probe.einstein_defect <= tol
    second = probe.branch2_defect <= tol
    if einstein == second:
        reason = "both branch defects vanish" if einstein else "neither branch defect vanishes"
        raise Indeterminate(f"{w.name}: {reason}", probe.einstein_defect, probe.branch2_defect)

    if einstein:
        return BranchVerdict(
            branch=Branch.EINSTEIN,
            lambda_fit=lam,
            ode_residual=residual,
            probe=probe,
            einstein_constant=2.0 * (w.n - 1) * lam,
        )

    forced = {"m": w.m, "mu": w.mu, "beta": w.fiber.beta, "lambda": lam}
    if not (math.isclose(w.m, 0.5) and w.mu == 0 and w.fiber.beta == 0 and abs(lam) <= tol):
        raise Indeterminate(
            f"{w.name}: second branch without forced data m=1/2, mu=0, beta=0, lambda=0 ({forced})",
            probe.einstein_defect,
            probe.branch2_defect,
        )
    A, B, fit_residual = fit_example12(w, ts)
    return BranchVerdict(
        branch=Branch.NON_EINSTEIN_EXAMPLE12,
        lambda_fit=lam,
        ode_residual=residual,
        probe=probe,
        forced={"m": 0.5, "mu": 0.0, "beta": 0.0, "lambda": 0.0},
        fitted={"A": A, "B": B},
        fit_residual=fit_residual,
    )
