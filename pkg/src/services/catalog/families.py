"""
Family Catalog
명시적 예시/정리 패밀리의 생성자, 파라미터 제약 검증, 기대값(골든 성분) 기록
"""

import logging
import math
from dataclasses import asdict, dataclass, fields
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from services.config.catalog_config import (
    CHART_ONLY_FAMILIES,
    FAMILY_SLUGS,
    FamilyId,
    slug_for_family,
    title_for_family,
)
from services.config.runtime_config import DEFAULT_WINDOW, DOMAIN_MARGIN
from services.geometry.tensor_core import ChartMetric
from services.geometry.warped_closed import (
    FiberRealization,
    FiberSpec,
    Profile1D,
    WarpedSMMS,
    chart_samples,
    density_from_v,
    sample_times,
)
from services.geometry.weighted import SMMSChart
from services.helpers.errors import ParamConstraintViolation

logger = logging.getLogger(__name__)

Built = Union[WarpedSMMS, SMMSChart]

# ==============================================================================
# Parameter records
# ==============================================================================


@dataclass(frozen=True)
class FamilyParams:
    """
    패밀리 파라미터 레코드 (해당 없는 항목은 None)

    incomplete_ok: WeightedSphere의 A>|B| 조건 완화 (v > 0인 열린 집합 위의 불완비 예시)
    quasi_einstein_choice: Thm41 계열에서 scale 0이 되는 적분상수 선택
    """

    n: int = 4
    m: float = 2.0
    lam: float = 0.0
    mu: Optional[float] = None
    A: Optional[float] = None
    B: Optional[float] = None
    C: Optional[float] = None
    c1: Optional[float] = None
    c2: Optional[float] = None
    c3: Optional[float] = None
    c4: Optional[float] = None
    xi: Optional[float] = None
    incomplete_ok: bool = False
    quasi_einstein_choice: bool = False

    def to_dict(self) -> Dict[str, float]:
        """None이 아닌 수치 파라미터 (CLI 기호 이름, 고정 순서)"""
        out: Dict[str, float] = {}
        for key, value in asdict(self).items():
            if value is None or isinstance(value, bool):
                continue
            out["lambda" if key == "lam" else key] = value
        return out

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "FamilyParams":
        """CLI 기호 이름 매핑에서 생성 (kappa 등 패밀리 외 항목은 무시)"""
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in mapping.items():
            name = "lam" if key == "lambda" else key
            if value is None or name not in known:
                continue
            kwargs[name] = value
        if "n" in kwargs:
            kwargs["n"] = int(kwargs["n"])
        return cls(**kwargs)


# 패밀리별 기본 파라미터 (CLI 플래그로 덮어씀)
DEFAULT_PARAMS: Dict[FamilyId, Dict[str, float]] = {
    FamilyId.EXAMPLE12: {"n": 4, "m": 0.5, "lambda": 0.0, "mu": 0.0, "A": 1.0, "B": 1.0},
    FamilyId.WEIGHTED_SPHERE: {"n": 3, "m": 2.0, "lambda": 0.5, "A": 2.0, "B": 1.0},
    FamilyId.WEIGHTED_EUCLIDEAN: {"n": 3, "m": 2.0, "lambda": 0.0, "A": 1.0, "B": 1.0},
    FamilyId.WEIGHTED_HYPERBOLIC: {"n": 3, "m": 2.0, "lambda": -0.5, "A": 1.0, "B": 1.0},
    FamilyId.COUNTEREXAMPLE31: {"n": 4, "m": 1.0, "lambda": 0.0, "mu": 0.0},
    FamilyId.COUNTEREXAMPLE32: {"n": 3, "m": 0.5, "lambda": 0.0, "mu": 0.0},
    FamilyId.THM41_POSITIVE: {"n": 4, "m": 2.0, "lambda": 0.5, "c1": 1.0, "c2": 0.0, "c3": 2.0, "c4": 1.0},
    FamilyId.THM41_ZERO: {"n": 4, "m": 2.0, "lambda": 0.0, "c1": 1.0, "c2": 1.0, "c3": 1.0, "c4": 0.2},
    FamilyId.THM41_NEGATIVE: {"n": 4, "m": 2.0, "lambda": -0.5, "c1": 1.0, "c2": 1.0, "c3": 2.0, "c4": 0.3},
    FamilyId.EXAMPLE43: {"n": 5, "m": 2.0, "lambda": 0.5, "c1": 1.0, "c2": 0.0, "c3": 2.0, "c4": 1.0},
    FamilyId.THM14_3B: {"n": 5, "m": 2.0, "lambda": -0.5, "A": 1.0, "B": 2.0, "C": 1.0},
}


def resolve_params(family: FamilyId, overrides: Optional[Mapping[str, object]] = None) -> FamilyParams:
    """패밀리 기본값에 사용자 값을 덮어쓴 FamilyParams 생성"""
    merged: Dict[str, object] = dict(DEFAULT_PARAMS[family])
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return FamilyParams.from_mapping(merged)


# ==============================================================================
# Expected-value records
# ==============================================================================


@dataclass(frozen=True)
class GoldenComponent:
    """
    골든 성분값

    tensor: "W" (가중 Weyl), "W_unweighted", "delta_f_W", "scalar"
    source: 값의 출처 공식 식별자
    """

    tensor: str
    index: Tuple[int, ...]
    point: Tuple[float, ...]
    value: float
    source: str

    @property
    def name(self) -> str:
        return f"{self.tensor}{self.index}@{self.point[0]:g}"


@dataclass(frozen=True)
class FamilyExpected:
    kappa: Optional[float] = None
    mu_forced: Optional[float] = None
    beta_forced: Optional[float] = None
    lambda_expected: Optional[float] = None
    golden_components: Tuple[GoldenComponent, ...] = ()
    weighted_einstein: bool = True
    weighted_harmonic: bool = True
    sub_case: Optional[str] = None
    complete: Optional[bool] = None
    global_case: Optional[str] = None


# ==============================================================================
# Validation helpers
# ==============================================================================


def _require(condition: bool, clause: str, family: FamilyId) -> None:
    if not condition:
        raise ParamConstraintViolation(clause, FAMILY_SLUGS[family])


def _need(value: Optional[float], name: str, family: FamilyId) -> float:
    _require(value is not None, f"{name} required", family)
    return float(value)


def _rate(lam: float) -> float:
    """s = √|2λ|"""
    return math.sqrt(abs(2.0 * lam))


def _mu(p: FamilyParams, forced: float) -> float:
    """m = 1이면 μ는 자유 (읽히지 않음), 아니면 강제값"""
    if math.isclose(p.m, 1.0):
        return 0.0 if p.mu is None else float(p.mu)
    return forced


def _positive_window(
    funcs: Sequence[Callable[[np.ndarray], np.ndarray]],
    lower: float = -DEFAULT_WINDOW,
    upper: float = DEFAULT_WINDOW,
    center: float = 0.0,
    points: int = 20001,
) -> Tuple[float, float]:
    """center를 포함하고 모든 함수가 양수인 최대 구간 (격자 탐색, margin 축소)"""
    grid = np.linspace(lower, upper, points)
    ok = np.ones_like(grid, dtype=bool)
    for fn in funcs:
        ok &= np.asarray(fn(grid), dtype=float) > 0
    idx = int(np.argmin(np.abs(grid - center)))
    if not ok[idx]:
        raise ParamConstraintViolation("phi, v > 0 at the window center")
    lo = idx
    while lo > 0 and ok[lo - 1]:
        lo -= 1
    hi = idx
    while hi < len(grid) - 1 and ok[hi + 1]:
        hi += 1
    return float(grid[lo]) + DOMAIN_MARGIN, float(grid[hi]) - DOMAIN_MARGIN


def _space_form_fiber(n: int, curvature: float) -> FiberSpec:
    return FiberSpec(n - 1, (n - 2) * curvature, FiberRealization.SPACE_FORM)


# ==============================================================================
# Family constructors
# ==============================================================================


def _example12(p: FamilyParams, fid: FamilyId) -> WarpedSMMS:
    A, B = _need(p.A, "A", fid), _need(p.B, "B", fid)
    _require(A > 0 and B > 0, "A, B > 0", fid)
    _require(math.isclose(p.m, 0.5), "m = 1/2", fid)
    _require(p.mu is None or p.mu == 0, "mu = 0", fid)
    _require(p.lam == 0, "lambda = 0", fid)
    n = p.n
    k = 1.0 / (n - 1)
    phi = Profile1D(
        lambda t: A * (B * t) ** k,
        lambda t: A * (B * t) ** k * k / t,
        lambda t: A * (B * t) ** k * k * (k - 1.0) / t ** 2,
        name="phi",
    )
    f = Profile1D(lambda t: -np.log(B * t), lambda t: -1.0 / t, lambda t: 1.0 / t ** 2, name="f")
    return WarpedSMMS(
        n, (0.0, math.inf), phi, f, FiberSpec(n - 1, 0.0, FiberRealization.FLAT),
        m=0.5, mu=0.0, lambda_target=0.0, name=FAMILY_SLUGS[fid],
    )


def _weighted_sphere(p: FamilyParams, fid: FamilyId) -> WarpedSMMS:
    lam, A, B = p.lam, _need(p.A, "A", fid), _need(p.B, "B", fid)
    _require(lam > 0, "lambda > 0", fid)
    _require(B != 0, "B != 0", fid)
    if p.incomplete_ok:
        _require(A >= 0 and A + B > 0, "A >= 0, A + B > 0", fid)
    else:
        _require(A > 0, "A > 0", fid)
        _require(A > abs(B), "A>|B|", fid)
    s = _rate(lam)
    v = Profile1D(
        lambda t: A + B * np.cos(s * t),
        lambda t: -B * s * np.sin(s * t),
        lambda t: -B * s ** 2 * np.cos(s * t),
        name="v",
    )
    phi = Profile1D(
        lambda t: np.sin(s * t) / s,
        lambda t: np.cos(s * t),
        lambda t: -s * np.sin(s * t),
        name="phi",
    )
    upper = math.pi / s
    if p.incomplete_ok and A <= abs(B):
        upper = _positive_window([v], lower=0.0, upper=math.pi / s, center=1e-6 * upper)[1]
    return WarpedSMMS(
        p.n, (0.0, upper), phi, density_from_v(v, p.m), _space_form_fiber(p.n, 1.0),
        m=p.m, mu=_mu(p, 2.0 * lam * (B ** 2 - A ** 2)), lambda_target=lam,
        name=FAMILY_SLUGS[fid], v_profile=v,
    )


def _weighted_euclidean(p: FamilyParams, fid: FamilyId) -> WarpedSMMS:
    A, B = _need(p.A, "A", fid), _need(p.B, "B", fid)
    _require(A > 0 and B > 0, "A, B > 0", fid)
    _require(p.lam == 0, "lambda = 0", fid)
    v = Profile1D(lambda t: A + B * t ** 2, lambda t: 2.0 * B * t, lambda t: 2.0 * B + 0.0 * t, name="v")
    phi = Profile1D(lambda t: t, lambda t: 1.0 + 0.0 * t, lambda t: 0.0 * t, name="phi")
    return WarpedSMMS(
        p.n, (0.0, math.inf), phi, density_from_v(v, p.m), _space_form_fiber(p.n, 1.0),
        m=p.m, mu=_mu(p, -4.0 * A * B), lambda_target=0.0, name=FAMILY_SLUGS[fid], v_profile=v,
    )


def _weighted_hyperbolic(p: FamilyParams, fid: FamilyId) -> WarpedSMMS:
    lam, A, B = p.lam, _need(p.A, "A", fid), _need(p.B, "B", fid)
    _require(lam < 0, "lambda < 0", fid)
    _require(B > 0, "B > 0", fid)
    _require(A > -B, "A > -B", fid)
    s = _rate(lam)
    v = Profile1D(
        lambda t: A + B * np.cosh(s * t),
        lambda t: B * s * np.sinh(s * t),
        lambda t: B * s ** 2 * np.cosh(s * t),
        name="v",
    )
    phi = Profile1D(
        lambda t: np.sinh(s * t) / s,
        lambda t: np.cosh(s * t),
        lambda t: s * np.sinh(s * t),
        name="phi",
    )
    return WarpedSMMS(
        p.n, (0.0, math.inf), phi, density_from_v(v, p.m), _space_form_fiber(p.n, 1.0),
        m=p.m, mu=_mu(p, 2.0 * lam * (B ** 2 - A ** 2)), lambda_target=lam,
        name=FAMILY_SLUGS[fid], v_profile=v,
    )


def _conformal_power_chart(n: int, exponent: float, density_coeff: float, m: float, name: str) -> SMMSChart:
    """g = x1^{exponent} δ, f = density_coeff · log x1 인 차트 SMMS"""

    def metric_fn(points):
        x1 = points[..., 0]
        return (x1 ** exponent)[..., None, None] * np.eye(n)

    def density(points):
        return density_coeff * np.log(points[..., 0])

    domain = ((0.0, math.inf),) + tuple((-math.inf, math.inf) for _ in range(n - 1))
    chart = ChartMetric(n, metric_fn, domain, name=name)
    return SMMSChart(chart, density, m, 0.0, name=name)


def _counterexample31(p: FamilyParams, fid: FamilyId) -> SMMSChart:
    _require(p.n == 4, "n = 4", fid)
    _require(p.m > 0, "m > 0", fid)
    _require(p.mu is None or p.mu == 0, "mu = 0", fid)
    m = float(p.m)
    return _conformal_power_chart(4, 2.0 * m, -2.0 * m * (m + 1.0), m, FAMILY_SLUGS[fid])


def _counterexample32(p: FamilyParams, fid: FamilyId) -> SMMSChart:
    _require(p.n == 3, "n = 3", fid)
    _require(math.isclose(p.m, 0.5), "m = 1/2", fid)
    _require(p.mu is None or p.mu == 0, "mu = 0", fid)
    exponent = (2.0 / 3.0) * (3.0 - math.sqrt(6.0))
    return _conformal_power_chart(3, exponent, -math.sqrt(2.0 / 3.0), 0.5, FAMILY_SLUGS[fid])


@dataclass(frozen=True)
class _Thm41Data:
    phi: Profile1D
    v: Profile1D
    beta: float
    mu: float


def _thm41_constants(p: FamilyParams, fid: FamilyId) -> Tuple[float, float, float, float]:
    lam = p.lam
    c1, c2, c4 = _need(p.c1, "c1", fid), _need(p.c2, "c2", fid), _need(p.c4, "c4", fid)
    if p.quasi_einstein_choice:
        if lam > 0:
            c3 = c2 * c4
        elif lam < 0:
            c3 = c4 * (c2 - c1)
        else:
            c1 = 0.0
            c3 = _need(p.c3, "c3", fid)
    else:
        c3 = _need(p.c3, "c3", fid)
    return c1, c2, c3, c4


def _thm41_data(p: FamilyParams, fid: FamilyId) -> _Thm41Data:
    lam, n = p.lam, p.n
    c1, c2, c3, c4 = _thm41_constants(p, fid)
    _require(c4 != 0, "c4 != 0", fid)
    _require(c3 > 0, "c3 > 0", fid)
    if lam > 0:
        _require(c1 > 0, "c1 > 0", fid)
        s = _rate(lam)
        phi = Profile1D(
            lambda t: c1 * np.cos(s * t) + c2 * np.sin(s * t),
            lambda t: s * (-c1 * np.sin(s * t) + c2 * np.cos(s * t)),
            lambda t: -s ** 2 * (c1 * np.cos(s * t) + c2 * np.sin(s * t)),
            name="phi",
        )
        v = Profile1D(
            lambda t: c3 + c2 * c4 * (np.cos(s * t) - 1.0) - c1 * c4 * np.sin(s * t),
            lambda t: -s * c4 * (c2 * np.sin(s * t) + c1 * np.cos(s * t)),
            lambda t: -s ** 2 * c4 * (c2 * np.cos(s * t) - c1 * np.sin(s * t)),
            name="v",
        )
        beta = 2.0 * (c1 ** 2 + c2 ** 2) * (n - 2) * lam
        mu = 2.0 * (c1 ** 2 * c4 ** 2 + 2.0 * c2 * c3 * c4 - c3 ** 2) * lam
    elif lam == 0:
        _require(c2 > 0, "c2 > 0", fid)
        phi = Profile1D(lambda t: c1 * t + c2, lambda t: c1 + 0.0 * t, lambda t: 0.0 * t, name="phi")
        v = Profile1D(
            lambda t: c3 - c4 * (c1 * t ** 2 + 2.0 * c2 * t),
            lambda t: -c4 * (2.0 * c1 * t + 2.0 * c2),
            lambda t: -2.0 * c4 * c1 + 0.0 * t,
            name="v",
        )
        beta = c1 ** 2 * (n - 2)
        mu = 4.0 * c4 * (c1 * c3 + c2 ** 2 * c4)
    else:
        _require(c1 + c2 > 0, "c1 + c2 > 0", fid)
        s = _rate(lam)
        phi = Profile1D(
            lambda t: c1 * np.exp(s * t) + c2 * np.exp(-s * t),
            lambda t: s * (c1 * np.exp(s * t) - c2 * np.exp(-s * t)),
            lambda t: s ** 2 * (c1 * np.exp(s * t) + c2 * np.exp(-s * t)),
            name="phi",
        )
        v = Profile1D(
            lambda t: c3 + c2 * c4 * (np.exp(-s * t) - 1.0) - c1 * c4 * (np.exp(s * t) - 1.0),
            lambda t: -s * c4 * (c2 * np.exp(-s * t) + c1 * np.exp(s * t)),
            lambda t: s ** 2 * c4 * (c2 * np.exp(-s * t) - c1 * np.exp(s * t)),
            name="v",
        )
        beta = 8.0 * c1 * c2 * (n - 2) * lam
        mu = -2.0 * (2.0 * (c1 - c2) * c3 * c4 + (c1 + c2) ** 2 * c4 ** 2 + c3 ** 2) * lam
    return _Thm41Data(phi, v, beta, mu)


def _thm41(p: FamilyParams, fid: FamilyId) -> WarpedSMMS:
    data = _thm41_data(p, fid)
    interval = _positive_window([data.phi, data.v])
    fiber = FiberSpec(p.n - 1, data.beta, FiberRealization.SPACE_FORM)
    return WarpedSMMS(
        p.n, interval, data.phi, density_from_v(data.v, p.m), fiber,
        m=p.m, mu=_mu(p, data.mu), lambda_target=p.lam, name=FAMILY_SLUGS[fid], v_profile=data.v,
    )


def _example43(p: FamilyParams, fid: FamilyId) -> WarpedSMMS:
    _require(p.n == 5, "n = 5", fid)
    data = _thm41_data(p, fid)
    _require(data.beta != 0, "beta != 0", fid)
    interval = _positive_window([data.phi, data.v])
    fiber = FiberSpec(4, data.beta, FiberRealization.PRODUCT_OF_SURFACES, gauss=data.beta)
    return WarpedSMMS(
        5, interval, data.phi, density_from_v(data.v, p.m), fiber,
        m=p.m, mu=_mu(p, data.mu), lambda_target=p.lam, name=FAMILY_SLUGS[fid], v_profile=data.v,
    )


def _thm14_3b(p: FamilyParams, fid: FamilyId) -> WarpedSMMS:
    lam = p.lam
    A, B, C = _need(p.A, "A", fid), _need(p.B, "B", fid), _need(p.C, "C", fid)
    _require(lam < 0, "lambda < 0", fid)
    _require(A > 0 and B > 0 and C > 0, "A, B, C > 0", fid)
    _require(A * C <= B, "AC<=B", fid)
    s = _rate(lam)
    phi = Profile1D(
        lambda t: A * np.exp(s * t),
        lambda t: A * s * np.exp(s * t),
        lambda t: A * s ** 2 * np.exp(s * t),
        name="phi",
    )
    v = Profile1D(
        lambda t: B + A * C * (np.exp(s * t) - 1.0),
        lambda t: A * C * s * np.exp(s * t),
        lambda t: A * C * s ** 2 * np.exp(s * t),
        name="v",
    )
    return WarpedSMMS(
        p.n, (-math.inf, math.inf), phi, density_from_v(v, p.m),
        FiberSpec(p.n - 1, 0.0, FiberRealization.FLAT),
        m=p.m, mu=_mu(p, -2.0 * (B - A * C) ** 2 * lam), lambda_target=lam,
        name=FAMILY_SLUGS[fid], v_profile=v,
    )


_BUILDERS: Dict[FamilyId, Callable[[FamilyParams, FamilyId], Built]] = {
    FamilyId.EXAMPLE12: _example12,
    FamilyId.WEIGHTED_SPHERE: _weighted_sphere,
    FamilyId.WEIGHTED_EUCLIDEAN: _weighted_euclidean,
    FamilyId.WEIGHTED_HYPERBOLIC: _weighted_hyperbolic,
    FamilyId.COUNTEREXAMPLE31: _counterexample31,
    FamilyId.COUNTEREXAMPLE32: _counterexample32,
    FamilyId.THM41_POSITIVE: _thm41,
    FamilyId.THM41_ZERO: _thm41,
    FamilyId.THM41_NEGATIVE: _thm41,
    FamilyId.EXAMPLE43: _example43,
    FamilyId.THM14_3B: _thm14_3b,
}

_THM41_SIGN = {
    FamilyId.THM41_POSITIVE: ("lambda > 0", lambda lam: lam > 0),
    FamilyId.THM41_ZERO: ("lambda = 0", lambda lam: lam == 0),
    FamilyId.THM41_NEGATIVE: ("lambda < 0", lambda lam: lam < 0),
}


def build_family(family: FamilyId, params: FamilyParams) -> Built:
    """
    패밀리 객체 생성 (워프곱 또는 좌표 차트 SMMS)

    강제 파라미터 (μ, β)는 패밀리 공식에서 설치된다.

    Raises:
        ParamConstraintViolation: 제약 조건 위반 (위반 조항 포함)
    """
    if params.n < 3:
        raise ParamConstraintViolation("n >= 3", FAMILY_SLUGS[family])
    if not params.m > 0:
        raise ParamConstraintViolation("m > 0", FAMILY_SLUGS[family])
    if family in _THM41_SIGN:
        clause, check = _THM41_SIGN[family]
        _require(check(params.lam), clause, family)
    built = _BUILDERS[family](params, family)
    logger.info(f"built {FAMILY_SLUGS[family]} with {params.to_dict()}")
    return built


# ==============================================================================
# Expected values
# ==============================================================================


def family_expected(family: FamilyId, params: FamilyParams) -> FamilyExpected:
    """
    패밀리 기대값 레코드 (κ, 강제 μ/β, 골든 성분, 부분 사례 표시)

    Raises:
        ParamConstraintViolation: build_family와 같은 제약
    """
    built = build_family(family, params)
    p = params
    m_is_one = math.isclose(p.m, 1.0)
    mu_forced = None if m_is_one else getattr(built, "mu", None)

    if family is FamilyId.EXAMPLE12:
        n, A, B = p.n, float(p.A), float(p.B)
        phi1 = A * B ** (1.0 / (n - 1))
        point = (1.0,) + (0.0,) * (n - 1)
        golden = (
            GoldenComponent("W", (0, 1, 0, 1), point, (n - 2) * phi1 ** 2 / (n - 1) ** 2,
                            "example-1-2:W(dt,dx,dt,dx)=(n-2)phi^2/((n-1)^2 t^2)"),
            GoldenComponent("W", (1, 2, 1, 2), point, -phi1 ** 4 / (n - 1) ** 2,
                            "example-1-2:W(dxi,dxj,dxi,dxj)=-phi^4/((n-1)^2 t^2)"),
            GoldenComponent("scalar", (), point, (n - 2) / (n - 1),
                            "example-1-2:tau=(n-2)/((n-1)t^2)"),
        )
        return FamilyExpected(
            kappa=None, mu_forced=0.0, beta_forced=0.0, lambda_expected=0.0,
            golden_components=golden, complete=False, global_case="incomplete: ricci-blowup",
        )

    if family is FamilyId.WEIGHTED_SPHERE:
        A, B = float(p.A), float(p.B)
        sub_case = None
        if p.incomplete_ok and math.isclose(A, 1.0) and math.isclose(B, 1.0):
            sub_case = "standard-weighted-sphere"
        elif p.incomplete_ok and A == 0 and math.isclose(B, 1.0):
            sub_case = "positive-elliptic-gaussian"
        complete = A > abs(B)
        return FamilyExpected(
            kappa=2.0 * p.lam * A, mu_forced=mu_forced, beta_forced=float(p.n - 2),
            lambda_expected=p.lam, sub_case=sub_case, complete=complete,
            global_case="sphere" if complete else None,
        )

    if family is FamilyId.WEIGHTED_EUCLIDEAN:
        return FamilyExpected(
            kappa=2.0 * float(p.B), mu_forced=mu_forced, beta_forced=float(p.n - 2),
            lambda_expected=0.0, complete=True, global_case="euclidean",
        )

    if family is FamilyId.WEIGHTED_HYPERBOLIC:
        return FamilyExpected(
            kappa=2.0 * p.lam * float(p.A), mu_forced=mu_forced, beta_forced=float(p.n - 2),
            lambda_expected=p.lam, complete=True, global_case="hyperbolic",
        )

    if family is FamilyId.COUNTEREXAMPLE31:
        m = float(p.m)
        point = (1.0, 0.0, 0.0, 0.0)
        value = 2.0 * m * (2.0 * m ** 2 + m - 1.0)
        golden = (
            GoldenComponent("delta_f_W", (1, 0, 1), point, value,
                            "counterexample-3-1:delta_f W(dxi,dx1,dxi)=2m(2m^2+m-1)/x1^3"),
        )
        return FamilyExpected(
            kappa=None, mu_forced=0.0, lambda_expected=0.0, golden_components=golden,
            weighted_harmonic=math.isclose(m, 0.5),
        )

    if family is FamilyId.COUNTEREXAMPLE32:
        golden = (
            GoldenComponent("delta_f_W", (1, 0, 1), (1.0, 0.0, 0.0), 4.0 * (math.sqrt(6.0) - 3.0) / 9.0,
                            "counterexample-3-2:delta_f W(dxi,dx1,dxi)=4(sqrt6-3)/(9 x1^3)"),
        )
        return FamilyExpected(
            kappa=None, mu_forced=0.0, lambda_expected=0.0, golden_components=golden,
            weighted_harmonic=False,
        )

    if family is FamilyId.EXAMPLE43:
        w: WarpedSMMS = built
        beta = w.fiber.beta
        t0 = 0.5 * sum(w.finite_interval())
        phi2 = float(w.phi(t0)) ** 2
        y = (0.05, -0.03, 0.02, 0.04)
        q12 = 4.0 + beta * (y[0] ** 2 + y[1] ** 2)
        q34 = 4.0 + beta * (y[2] ** 2 + y[3] ** 2)
        point = (t0,) + y
        golden = (
            GoldenComponent("W_unweighted", (1, 2, 1, 2), point, 512.0 * beta * phi2 / (3.0 * q12 ** 4),
                            "example-4-3:W(dx1,dx2,dx1,dx2)=512 beta phi^2/(3(4+beta r12^2)^4)"),
            GoldenComponent("W_unweighted", (3, 4, 3, 4), point, 512.0 * beta * phi2 / (3.0 * q34 ** 4),
                            "example-4-3:W(dx3,dx4,dx3,dx4)=512 beta phi^2/(3(4+beta r34^2)^4)"),
            GoldenComponent("W_unweighted", (1, 3, 1, 3), point,
                            -256.0 * beta * phi2 / (3.0 * q12 ** 2 * q34 ** 2),
                            "example-4-3:W(dxi,dxj,dxi,dxj)=-256 beta phi^2/(3 q12^2 q34^2)"),
        )
        return FamilyExpected(
            kappa=None, mu_forced=mu_forced, beta_forced=beta, lambda_expected=p.lam,
            golden_components=golden,
        )

    if family in (FamilyId.THM41_POSITIVE, FamilyId.THM41_ZERO, FamilyId.THM41_NEGATIVE):
        w = built
        return FamilyExpected(
            kappa=0.0 if p.quasi_einstein_choice else None,
            mu_forced=mu_forced, beta_forced=w.fiber.beta, lambda_expected=p.lam,
        )

    # THM14_3B
    return FamilyExpected(
        kappa=None, mu_forced=mu_forced, beta_forced=0.0, lambda_expected=p.lam,
        complete=True, global_case="warped-ricci-flat",
    )


# ==============================================================================
# Sampling / listing
# ==============================================================================

# 차트 전용 패밀리 샘플의 x1 범위와 나머지 좌표 오프셋
CHART_SAMPLE_RANGE = (0.8, 1.6)
CHART_OFFSETS = (0.05, -0.03, 0.02)


def family_samples(built: Built, count: int) -> List[Tuple[float, ...]]:
    """condition_report용 샘플 점 목록"""
    if isinstance(built, WarpedSMMS):
        return chart_samples(built, sample_times(built, count))
    n = built.n
    offsets = tuple(CHART_OFFSETS[i % len(CHART_OFFSETS)] for i in range(n - 1))
    return [(float(x1),) + offsets for x1 in np.linspace(*CHART_SAMPLE_RANGE, count)]


def random_params(family: FamilyId, rng: np.random.Generator) -> FamilyParams:
    """
    패밀리 제약을 만족하는 임의 파라미터 생성

    Thm41 계열과 가중 공간형만 지원한다.
    """
    n = int(rng.choice([3, 4]))
    m = float(rng.choice([1.5, 2.0, 3.0]))
    sign = 1.0 if rng.random() < 0.5 else -1.0
    if family is FamilyId.THM41_POSITIVE:
        return FamilyParams(
            n=n, m=m, lam=float(rng.uniform(0.2, 0.6)),
            c1=float(rng.uniform(0.5, 1.5)), c2=float(rng.uniform(-0.5, 0.5)),
            c3=float(rng.uniform(1.5, 3.0)), c4=sign * float(rng.uniform(0.3, 1.0)),
        )
    if family is FamilyId.THM41_ZERO:
        return FamilyParams(
            n=n, m=m, lam=0.0,
            c1=float(rng.uniform(-0.5, 0.5)), c2=float(rng.uniform(0.5, 1.5)),
            c3=float(rng.uniform(1.0, 2.0)), c4=sign * float(rng.uniform(0.1, 0.3)),
        )
    if family is FamilyId.THM41_NEGATIVE:
        return FamilyParams(
            n=n, m=m, lam=-float(rng.uniform(0.2, 0.6)),
            c1=float(rng.uniform(0.3, 1.2)), c2=float(rng.uniform(0.3, 1.2)),
            c3=float(rng.uniform(1.5, 3.0)), c4=sign * float(rng.uniform(0.1, 0.4)),
        )
    if family is FamilyId.WEIGHTED_SPHERE:
        A = float(rng.uniform(1.5, 3.0))
        return FamilyParams(n=n, m=m, lam=float(rng.uniform(0.2, 0.6)), A=A, B=sign * float(rng.uniform(0.2, 1.0)))
    if family is FamilyId.WEIGHTED_EUCLIDEAN:
        return FamilyParams(n=n, m=m, lam=0.0, A=float(rng.uniform(0.5, 2.0)), B=float(rng.uniform(0.2, 1.0)))
    if family is FamilyId.WEIGHTED_HYPERBOLIC:
        return FamilyParams(
            n=n, m=m, lam=-float(rng.uniform(0.2, 0.6)),
            A=float(rng.uniform(-0.5, 1.0)), B=float(rng.uniform(0.6, 1.5)),
        )
    raise ParamConstraintViolation("random draws unsupported", FAMILY_SLUGS[family])


def list_families() -> List[Tuple[str, str]]:
    """(slug, title) 목록"""
    return [(slug_for_family(fid), title_for_family(fid)) for fid in FamilyId]


def is_chart_only(family: FamilyId) -> bool:
    return family in CHART_ONLY_FAMILIES
