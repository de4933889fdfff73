"""
Verification Service Module
패밀리 생성부터 조건 리포트, 골든 성분 비교, Obata 잔차, 분기/전역 판정까지 묶는 서비스 클래스
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import pandas as pd

from services.catalog.families import (
    FamilyExpected,
    FamilyParams,
    GoldenComponent,
    build_family,
    family_expected,
    family_samples,
    resolve_params,
)
from services.classify.branch import BranchVerdict, classify_branch
from services.classify.global_match import GlobalVerdict, match_global
from services.classify.obata import obata_residual
from services.config.catalog_config import FamilyId, family_from_slug, slug_for_family
from services.config.runtime_config import (
    GOLDEN_ABS_TOL,
    N_JOBS,
    ORACLE_REL_TOL,
    WEYL_HARMONIC_TOL,
    get_fd_config,
    get_sample_count,
    get_tolerance,
)
from services.geometry.tensor_core import FDConfig, curvature_bundle, schouten_weyl
from services.geometry.warped_closed import WarpedSMMS, oracle_compare, sample_times, warped_chart
from services.geometry.weighted import (
    Branch,
    ConditionReport,
    SMMSChart,
    condition_report,
    unweighted_weyl_harmonicity,
    weighted_weyl,
    weighted_weyl_divergence,
)
from services.helpers.errors import Indeterminate, PreconditionFailed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GoldenCheck:
    name: str
    expected: float
    actual: float
    passed: bool
    source: str = ""


@dataclass
class VerificationResult:
    """
    CLI 리포트 한 건 (JSON 스키마 순서와 같은 필드 순서)

    residuals 키: einstein, harmonic, cotton, obata (계산하지 않은 값은 NaN)
    weyl_harmonicity: Einstein 분기 판정에서만 채워지는 (‖δW‖, ‖ι_∇f W‖), JSON에는 쓰지 않음
    """

    family: str
    params: Dict[str, float]
    lambda_fit: float
    kappa: float
    kappa_spread: float
    residuals: Dict[str, float]
    branch: str
    global_case: Optional[str]
    golden_checks: List[GoldenCheck]
    passed: bool
    weyl_harmonicity: Optional[Tuple[float, float]] = None
    table: Optional[pd.DataFrame] = field(default=None, repr=False)


class VerificationService:
    """
    패밀리 하나에 대한 검증 서비스

    - 패밀리 생성과 기대값 레코드
    - condition_report (캐시)
    - 골든 성분 비교, Obata 잔차
    - 분기 판정과 전역 모델 대응
    """

    def __init__(
        self,
        family: FamilyId,
        params: FamilyParams,
        samples: int,
        tol: float,
        cfg: FDConfig,
        n_jobs: int = N_JOBS,
    ):
        """
        VerificationService 초기화

        Args:
            family: 패밀리 식별자
            params: 해석된 파라미터
            samples: 샘플 수 (>= 3)
            tol: 판정 허용치
            cfg: 유한차분 설정
            n_jobs: 샘플별 병렬 폭

        Raises:
            ParamConstraintViolation: 파라미터 제약 위반
        """
        self.family = family
        self.params = params
        self.samples = samples
        self.tol = tol
        self.cfg = cfg
        self.n_jobs = n_jobs
        self.built: Union[WarpedSMMS, SMMSChart] = build_family(family, params)
        self.smms: SMMSChart = warped_chart(self.built) if isinstance(self.built, WarpedSMMS) else self.built

        # 캐시용 변수
        self._expected: Optional[FamilyExpected] = None
        self._report: Optional[ConditionReport] = None
        self._golden: Optional[List[GoldenCheck]] = None
        self._obata: Optional[float] = None
        self._branch: Optional[Union[BranchVerdict, Indeterminate]] = None
        self._global: Optional[GlobalVerdict] = None
        self._weyl: Optional[Tuple[float, float]] = None

    @property
    def slug(self) -> str:
        return slug_for_family(self.family)

    @property
    def is_warped(self) -> bool:
        return isinstance(self.built, WarpedSMMS)

    def expected(self) -> FamilyExpected:
        if self._expected is None:
            self._expected = family_expected(self.family, self.params)
        return self._expected

    def sample_points(self) -> List[tuple]:
        return family_samples(self.built, self.samples)

    def condition_report(self) -> ConditionReport:
        """가중 조건 리포트 (캐시)"""
        if self._report is not None:
            return self._report
        self._report = condition_report(
            self.smms, self.sample_points(), self.cfg, tol=self.tol, n_jobs=self.n_jobs
        )
        return self._report

    def _golden_value(self, golden: GoldenComponent) -> float:
        point = np.asarray(golden.point, dtype=float)
        if golden.tensor == "W":
            return float(weighted_weyl(self.smms, point, self.cfg)[golden.index])
        if golden.tensor == "W_unweighted":
            return float(schouten_weyl(self.smms.chart, point, self.cfg)[1][golden.index])
        if golden.tensor == "delta_f_W":
            return float(weighted_weyl_divergence(self.smms, point, self.cfg)[golden.index])
        if golden.tensor == "scalar":
            return curvature_bundle(self.smms.chart, point, self.cfg).scalar
        raise ValueError(f"unknown golden tensor {golden.tensor!r}")

    def golden_checks(self) -> List[GoldenCheck]:
        """골든 성분과 오라클 값 비교 (허용치 GOLDEN_ABS_TOL · max(1, |기대값|))"""
        if self._golden is not None:
            return self._golden
        checks = []
        for golden in self.expected().golden_components:
            actual = self._golden_value(golden)
            passed = abs(actual - golden.value) <= GOLDEN_ABS_TOL * max(1.0, abs(golden.value))
            checks.append(GoldenCheck(golden.name, golden.value, actual, passed, golden.source))
            logger.debug(f"{self.slug}: golden {golden.name} expected={golden.value:.10g} actual={actual:.10g}")
        self._golden = checks
        return checks

    def obata_check(self) -> float:
        """Obata 잔차 (전제조건 불만족이면 NaN)"""
        if self._obata is not None:
            return self._obata
        report = self.condition_report()
        try:
            self._obata = obata_residual(
                self.smms, report.lambda_fit, report.kappa, report.sample_points,
                self.cfg, tol=self.tol, report=report,
            )
        except PreconditionFailed as exc:
            logger.info(f"{self.slug}: obata residual skipped ({exc})")
            self._obata = math.nan
        return self._obata

    def branch_verdict(self) -> Union[BranchVerdict, Indeterminate]:
        """워프곱 분기 판정 (Indeterminate는 값으로 반환)"""
        if self._branch is not None:
            return self._branch
        if not self.is_warped:
            raise PreconditionFailed(f"{self.slug}: branch classification needs a warped family")
        try:
            self._branch = classify_branch(self.built, sample_times(self.built, self.samples), tol=self.tol)
        except Indeterminate as exc:
            logger.info(f"{self.slug}: branch indeterminate ({exc})")
            self._branch = exc
        return self._branch

    def weyl_harmonicity(self) -> Tuple[float, float]:
        """
        비가중 Weyl 텐서의 (sup ‖δW‖, sup ‖ι_∇f W‖)

        Einstein 분기에서 두 값이 각각 WEYL_HARMONIC_TOL 이하여야 한다.
        """
        if self._weyl is None:
            self._weyl = unweighted_weyl_harmonicity(self.smms, self.sample_points(), self.cfg)
            logger.debug(f"{self.slug}: unweighted delta W={self._weyl[0]:.3e} i_grad_f W={self._weyl[1]:.3e}")
        return self._weyl

    def global_verdict(self) -> GlobalVerdict:
        if self._global is None:
            self._global = match_global(self.built, self.condition_report(), tol=self.tol)
        return self._global

    def oracle_table(self) -> pd.DataFrame:
        """
        닫힌 형식 vs 오라클 비교 테이블

        Raises:
            PreconditionFailed: 차트 전용 패밀리
        """
        if not self.is_warped:
            raise PreconditionFailed(f"{self.slug}: oracle comparison needs a warped family")
        return oracle_compare(self.built, sample_times(self.built, self.samples), self.cfg)

    def oracle_passed(self, table: pd.DataFrame) -> bool:
        return float(table["rel_error"].max()) <= ORACLE_REL_TOL

    # ==========================================================================
    # Reports
    # ==========================================================================

    def _result(
        self,
        branch: str,
        global_case: Optional[str],
        passed: bool,
        weyl: Optional[Tuple[float, float]] = None,
    ) -> VerificationResult:
        report = self.condition_report()
        return VerificationResult(
            family=self.slug,
            params=self.params.to_dict(),
            lambda_fit=report.lambda_fit,
            kappa=report.kappa,
            kappa_spread=report.kappa_spread,
            residuals={
                "einstein": report.einstein_residual,
                "harmonic": report.harmonic_residual,
                "cotton": report.cotton_residual,
                "obata": self.obata_check(),
            },
            branch=branch,
            global_case=global_case,
            golden_checks=self.golden_checks(),
            passed=passed,
            weyl_harmonicity=weyl,
            table=report.table,
        )

    def verify(self) -> VerificationResult:
        """
        가중 Einstein / 가중 조화 검증

        통과 조건: einstein, harmonic 잔차 <= tol, Obata 잔차 (계산된 경우) <= tol, 골든 성분 모두 일치
        """
        report = self.condition_report()
        obata = self.obata_check()
        passed = (
            report.einstein_residual <= self.tol
            and report.harmonic_residual <= self.tol
            and (math.isnan(obata) or obata <= self.tol)
            and all(check.passed for check in self.golden_checks())
        )
        logger.info(f"{self.slug}: verify passed={passed}")
        return self._result(report.branch.value, None, passed)

    def classify(self) -> VerificationResult:
        """
        분기 판정과 전역 모델 대응

        판정 불가면 실패. Einstein 분기는 비가중 δW, ι_∇f W가 각각 WEYL_HARMONIC_TOL 이하여야 통과한다.
        """
        report = self.condition_report()
        if self.is_warped:
            verdict = self.branch_verdict()
            decided = not isinstance(verdict, Indeterminate)
            branch = verdict.branch.value if decided else "indeterminate"
        else:
            branch = report.branch.value
            decided = branch != "indeterminate"
        weyl = None
        passed = decided
        if branch == Branch.EINSTEIN.value:
            weyl = self.weyl_harmonicity()
            passed = passed and max(weyl) <= WEYL_HARMONIC_TOL
        global_case = self.global_verdict().label
        logger.info(f"{self.slug}: branch={branch} global={global_case} passed={passed}")
        return self._result(branch, global_case, passed, weyl)


def get_verification_service(
    family: Union[str, FamilyId],
    overrides: Optional[Mapping[str, object]] = None,
    samples: Optional[int] = None,
    tol: Optional[float] = None,
    rel_step: Optional[float] = None,
    n_jobs: Optional[int] = None,
) -> VerificationService:
    """
    VerificationService 인스턴스 생성 팩토리 함수

    Args:
        family: 패밀리 slug 또는 FamilyId
        overrides: CLI 파라미터 값 (None 항목은 무시)
        samples, tol, rel_step, n_jobs: 설정 덮어쓰기 (None이면 환경변수 기본값)

    Returns:
        VerificationService: 서비스 인스턴스

    Raises:
        UnknownFamily: 알 수 없는 slug
        ParamConstraintViolation: 파라미터 제약 위반
        ValueError: 샘플 수 또는 허용치가 범위를 벗어난 경우
    """
    family_id = family if isinstance(family, FamilyId) else family_from_slug(family)
    params = resolve_params(family_id, overrides)
    return VerificationService(
        family_id,
        params,
        samples=get_sample_count(samples),
        tol=get_tolerance(tol),
        cfg=get_fd_config(rel_step),
        n_jobs=N_JOBS if n_jobs is None else int(n_jobs),
    )
