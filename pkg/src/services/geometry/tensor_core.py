"""
Tensor Core Module
좌표 차트 위 계량과 고차 유한차분 리만 기하 오라클 (Christoffel, 곡률, 공변미분, 발산)

모든 계량/스칼라장/텐서장은 (..., n) 모양의 점 배치를 받아 한 번에 평가된다.
중첩 유한차분 스텐실도 하나의 벡터화 호출로 계산된다.
"""

import logging
import string
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from services.helpers.errors import DomainError, RankMismatch, SingularMetric

logger = logging.getLogger(__name__)

EIGENVALUE_FLOOR = 1e-12
RIEMANN_ASSEMBLY_RTOL = 1e-12

TensorField = Callable[[np.ndarray], np.ndarray]


# ==============================================================================
# Finite-difference configuration
# ==============================================================================


class Stencil(Enum):
    """중심 차분 스텐실 종류"""

    THREE_POINT = "3-point"
    FIVE_POINT = "5-point"


# (offsets, weights, order)
_STENCILS = {
    Stencil.THREE_POINT: (np.array([-1.0, 1.0]), np.array([-0.5, 0.5]), 2),
    Stencil.FIVE_POINT: (
        np.array([-2.0, -1.0, 1.0, 2.0]),
        np.array([1 / 12, -2 / 3, 2 / 3, -1 / 12]),
        4,
    ),
}


@dataclass(frozen=True)
class FDConfig:
    """
    유한차분 설정

    Attributes:
        rel_step: 좌표별 스텝 h_i = rel_step * max(1, |p_i|)
        stencil: 3점 또는 5점 중심 차분
        richardson: h, h/2 Richardson 외삽 사용 여부
        outer_step_factor: 이미 미분된 장(∇R, ∇P, δW)을 다시 미분할 때 스텝 배율
    """

    rel_step: float = 1e-3
    stencil: Stencil = Stencil.FIVE_POINT
    richardson: bool = True
    outer_step_factor: float = 10.0

    def __post_init__(self):
        if not self.rel_step > 0:
            raise ValueError(f"rel_step must be positive, got {self.rel_step}")
        if not self.outer_step_factor > 0:
            raise ValueError(f"outer_step_factor must be positive, got {self.outer_step_factor}")
        if isinstance(self.stencil, str):
            object.__setattr__(self, "stencil", Stencil(self.stencil))

    def outer(self) -> "FDConfig":
        """한 단계 바깥 미분용 설정 (스텝만 확대)"""
        return replace(self, rel_step=self.rel_step * self.outer_step_factor)


# ==============================================================================
# Tensor values
# ==============================================================================


class SymmetryTag(Enum):
    NONE = "none"
    SYM2 = "sym2"
    RIEMANN_LIKE = "riemann-like"


def riemann_project(arr: np.ndarray) -> np.ndarray:
    """(0,4) 배열을 리만형 대칭 공간으로 사영 (반대칭 ab, cd 후 쌍 교환 대칭)"""
    arr = 0.5 * (arr - np.swapaxes(arr, -4, -3))
    arr = 0.5 * (arr - np.swapaxes(arr, -2, -1))
    pair_swapped = np.swapaxes(np.swapaxes(arr, -4, -2), -3, -1)
    return 0.5 * (arr + pair_swapped)


def symmetrize2(arr: np.ndarray) -> np.ndarray:
    return 0.5 * (arr + np.swapaxes(arr, -1, -2))


@dataclass(frozen=True, eq=False)
class TensorValue:
    """
    한 점에서의 공변 텐서 성분값

    sym2는 대칭화해서 저장하고 riemann-like는 대칭 사영 후 저장한다.
    """

    components: np.ndarray
    symmetry_tag: SymmetryTag = SymmetryTag.NONE

    def __post_init__(self):
        comps = np.array(self.components, dtype=float)
        if comps.ndim > 0 and len(set(comps.shape)) != 1:
            raise RankMismatch(f"tensor components must be n x ... x n, got {comps.shape}")
        if not np.all(np.isfinite(comps)):
            raise ValueError("tensor components must be finite")
        if self.symmetry_tag is SymmetryTag.SYM2:
            if comps.ndim != 2:
                raise RankMismatch(f"sym2 requires rank 2, got rank {comps.ndim}")
            comps = symmetrize2(comps)
        elif self.symmetry_tag is SymmetryTag.RIEMANN_LIKE:
            if comps.ndim != 4:
                raise RankMismatch(f"riemann-like requires rank 4, got rank {comps.ndim}")
            projected = riemann_project(comps)
            scale = max(1.0, float(np.max(np.abs(comps))) if comps.size else 1.0)
            drift = float(np.max(np.abs(projected - comps))) if comps.size else 0.0
            if drift > RIEMANN_ASSEMBLY_RTOL * scale:
                logger.debug(f"riemann-like projection moved components by {drift:.3e}")
            comps = projected
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @property
    def rank(self) -> int:
        return self.components.ndim

    @property
    def dim(self) -> int:
        return self.components.shape[0] if self.rank else 0

    def __getitem__(self, index):
        return self.components[index]


# ==============================================================================
# Charts and scalar fields
# ==============================================================================


def _first_outside(points: np.ndarray, bounds: np.ndarray) -> Optional[np.ndarray]:
    """박스 밖(또는 비유한) 첫 점 반환, 모두 안이면 None"""
    flat = points.reshape(-1, points.shape[-1])
    inside = np.all((flat > bounds[:, 0]) & (flat < bounds[:, 1]), axis=-1)
    if np.all(inside):
        return None
    return flat[np.argmin(inside)]


@dataclass(frozen=True)
class ChartMetric:
    """
    축 정렬 열린 박스 위의 좌표 차트와 계량 성분 함수

    Attributes:
        dim: 차원 n
        metric_fn: (..., n) 점 배치 -> (..., n, n) 계량 성분
        domain: 좌표별 열린 구간 (무한 허용)
        coord_names: 좌표 이름
        name: 로그/리포트용 이름
    """

    dim: int
    metric_fn: Callable[[np.ndarray], np.ndarray]
    domain: Tuple[Tuple[float, float], ...]
    coord_names: Tuple[str, ...] = ()
    name: str = "chart"
    _bounds: np.ndarray = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 2:
            raise RankMismatch(f"chart dimension must be >= 2, got {self.dim}")
        if len(self.domain) != self.dim:
            raise RankMismatch(f"domain has {len(self.domain)} intervals for dimension {self.dim}")
        names = tuple(self.coord_names) or tuple(f"x{i + 1}" for i in range(self.dim))
        if len(names) != self.dim:
            raise RankMismatch(f"{len(names)} coordinate names for dimension {self.dim}")
        object.__setattr__(self, "coord_names", names)
        object.__setattr__(self, "_bounds", np.array(self.domain, dtype=float))

    def check_domain(self, points: np.ndarray) -> None:
        """모든 점이 열린 박스 안에 있는지 확인"""
        outside = _first_outside(points, self._bounds)
        if outside is not None:
            raise DomainError(f"{self.name}: point {outside.tolist()} outside chart domain", outside)

    def metric(self, points) -> np.ndarray:
        """
        점 배치에서 계량 성분 평가 (영역 및 양의 정부호 검사 포함)

        Raises:
            DomainError: 박스 밖의 점
            SingularMetric: 최소 고유값 <= 1e-12
        """
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise RankMismatch(f"{self.name}: expected points of dimension {self.dim}")
        self.check_domain(points)
        g = symmetrize2(np.asarray(self.metric_fn(points), dtype=float))
        if not np.all(np.isfinite(g)):
            flat = g.reshape(-1, self.dim * self.dim)
            bad = points.reshape(-1, self.dim)[np.argmin(np.all(np.isfinite(flat), axis=-1))]
            raise DomainError(f"{self.name}: metric not finite at {bad.tolist()}", bad)
        eig_min = np.linalg.eigvalsh(g)[..., 0]
        if np.any(eig_min <= EIGENVALUE_FLOOR):
            idx = np.unravel_index(np.argmin(eig_min), eig_min.shape)
            bad = points[idx]
            raise SingularMetric(
                f"{self.name}: metric not positive definite at {bad.tolist()}",
                bad,
                float(eig_min[idx]),
            )
        return g

    def __call__(self, points) -> np.ndarray:
        return self.metric(points)


@dataclass(frozen=True)
class ScalarFieldFn:
    """박스 위의 스칼라 함수 (밀도 f, 워핑 φ, v, u 등)"""

    fn: Callable[[np.ndarray], np.ndarray]
    domain: Optional[Tuple[Tuple[float, float], ...]] = None
    name: str = "scalar"

    def eval(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.domain is not None:
            outside = _first_outside(points, np.array(self.domain, dtype=float))
            if outside is not None:
                raise DomainError(f"{self.name}: point {outside.tolist()} outside domain", outside)
        values = np.asarray(self.fn(points), dtype=float)
        if not np.all(np.isfinite(values)):
            raise DomainError(f"{self.name}: non-finite value on declared domain")
        return values

    def __call__(self, points) -> np.ndarray:
        return self.eval(points)


def conformal_space_form_metric(curvature: float, dim: int) -> Callable[[np.ndarray], np.ndarray]:
    """
    곡률 c 공간형의 등각 평탄 좌표 계량 h(c)_ij = δ_ij / (1 + (c/4)|y|²)²

    c < 0이면 |y|² >= -4/c 에서 DomainError.
    """

    def metric_fn(points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        denom = 1.0 + 0.25 * curvature * np.sum(points ** 2, axis=-1)
        if np.any(denom <= 0):
            bad = points.reshape(-1, dim)[np.argmin(denom.reshape(-1))]
            raise DomainError(f"|y|^2 >= -4/c for space form of curvature {curvature}", bad)
        return (1.0 / denom ** 2)[..., None, None] * np.eye(dim)

    return metric_fn


def space_form_chart(curvature: float, dim: int, name: str = "space-form") -> ChartMetric:
    """곡률 c 공간형의 등각 평탄 차트 (c < 0이면 공 안에 내접한 박스)"""
    if curvature < 0:
        half = 0.999 * np.sqrt(-4.0 / curvature / dim)
        domain = tuple((-half, half) for _ in range(dim))
    else:
        domain = tuple((-np.inf, np.inf) for _ in range(dim))
    return ChartMetric(dim, conformal_space_form_metric(curvature, dim), domain, name=name)


# ==============================================================================
# Finite-difference engine
# ==============================================================================


def partial_derivatives(fn: Callable[[np.ndarray], np.ndarray], points, cfg: FDConfig) -> np.ndarray:
    """
    배치 점에서 좌표 편미분 계산

    변위점 배열 (..., S, K, n, n)을 만들어 fn을 한 번만 호출한다.

    Args:
        fn: (..., n) -> (..., *vshape)
        points: (..., n) 점 배치
        cfg: 유한차분 설정

    Returns:
        np.ndarray: (..., n, *vshape), 인덱스 [..., c, ...] = ∂_c fn
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[-1]
    nbatch = points.ndim - 1
    offsets, weights, order = _STENCILS[cfg.stencil]
    scales = np.array([1.0, 0.5]) if cfg.richardson else np.array([1.0])

    h = cfg.rel_step * np.maximum(1.0, np.abs(points))  # (..., n)
    pattern = scales[:, None, None, None] * offsets[None, :, None, None] * np.eye(n)[None, None]
    displaced = points[..., None, None, None, :] + pattern * h[..., None, None, :, None]

    values = np.asarray(fn(displaced), dtype=float)  # (..., S, K, n, *vshape)
    vdims = values.ndim - nbatch - 3
    stacked = np.moveaxis(values, nbatch + 1, -1) @ weights  # (..., S, n, *vshape)
    step = scales[:, None] * h[..., None, :]  # (..., S, n)
    deriv = stacked / step.reshape(step.shape + (1,) * vdims)

    if cfg.richardson:
        factor = 2.0 ** order
        coarse = np.take(deriv, 0, axis=nbatch)
        fine = np.take(deriv, 1, axis=nbatch)
        return (factor * fine - coarse) / (factor - 1.0)
    return np.take(deriv, 0, axis=nbatch)


# ==============================================================================
# Batched geometric arrays
# ==============================================================================


@dataclass(frozen=True)
class CurvatureArrays:
    """점 배치에서의 계량/곡률 배열 묶음"""

    g: np.ndarray
    ginv: np.ndarray
    christoffel: np.ndarray  # (..., k, i, j) = Γ^k_ij
    riemann: np.ndarray  # (..., a, b, c, d) 공변
    ricci: np.ndarray
    scalar: np.ndarray


def christoffel_array(chart: ChartMetric, points, cfg: FDConfig) -> np.ndarray:
    """Γ^k_ij 배치 계산, (..., k, i, j)"""
    g = chart.metric(points)
    ginv = np.linalg.inv(g)
    dg = partial_derivatives(chart.metric, points, cfg)  # (..., c, a, b) = ∂_c g_ab
    lower = 0.5 * (
        np.einsum("...ikj->...kij", dg)
        + np.einsum("...jki->...kij", dg)
        - dg
    )
    gamma = np.einsum("...lk,...kij->...lij", ginv, lower)
    return symmetrize2(gamma)


def curvature_arrays(chart: ChartMetric, points, cfg: FDConfig) -> CurvatureArrays:
    """
    리만/리치/스칼라 곡률 배치 계산

    R^a_bcd = ∂_cΓ^a_db − ∂_dΓ^a_cb + Γ^a_ceΓ^e_db − Γ^a_deΓ^e_cb, R_abcd = g_ae R^e_bcd
    이 규약에서 곡률 c 공간형은 R = (c/2) g⊘g를 만족한다.
    """
    points = np.asarray(points, dtype=float)
    g = chart.metric(points)
    ginv = np.linalg.inv(g)
    gamma = christoffel_array(chart, points, cfg)
    dgamma = partial_derivatives(lambda pts: christoffel_array(chart, pts, cfg), points, cfg)

    r_up = (
        np.einsum("...cadb->...abcd", dgamma)
        - np.einsum("...dacb->...abcd", dgamma)
        + np.einsum("...ace,...edb->...abcd", gamma, gamma)
        - np.einsum("...ade,...ecb->...abcd", gamma, gamma)
    )
    riemann = riemann_project(np.einsum("...ae,...ebcd->...abcd", g, r_up))
    ricci = symmetrize2(np.einsum("...ac,...abcd->...bd", ginv, riemann))
    scalar = np.einsum("...bd,...bd->...", ginv, ricci)
    return CurvatureArrays(g, ginv, gamma, riemann, ricci, scalar)


@dataclass(frozen=True)
class ScalarArrays:
    differential: np.ndarray  # (..., n) = ∂_i s
    grad: np.ndarray  # (..., n) = g^ij ∂_j s
    hess: np.ndarray
    laplacian: np.ndarray
    grad_norm_sq: np.ndarray


def scalar_calculus_array(chart: ChartMetric, s: Callable, points, cfg: FDConfig) -> ScalarArrays:
    """스칼라장의 미분, 기울기, 헤시안, 라플라시안 배치 계산"""
    points = np.asarray(points, dtype=float)
    g = chart.metric(points)
    ginv = np.linalg.inv(g)
    gamma = christoffel_array(chart, points, cfg)
    ds = partial_derivatives(s, points, cfg)
    dds = symmetrize2(partial_derivatives(lambda pts: partial_derivatives(s, pts, cfg), points, cfg))
    hess = symmetrize2(dds - np.einsum("...kij,...k->...ij", gamma, ds))
    grad = np.einsum("...ij,...j->...i", ginv, ds)
    return ScalarArrays(
        differential=ds,
        grad=grad,
        hess=hess,
        laplacian=np.einsum("...ij,...ij->...", ginv, hess),
        grad_norm_sq=np.maximum(np.einsum("...i,...i->...", ds, grad), 0.0),
    )


def kulkarni_nomizu_array(S: np.ndarray, T: np.ndarray) -> np.ndarray:
    """(T⊘S)_abcd = T_ac S_bd + T_bd S_ac − T_ad S_bc − T_bc S_ad"""
    return (
        np.einsum("...ac,...bd->...abcd", T, S)
        + np.einsum("...bd,...ac->...abcd", T, S)
        - np.einsum("...ad,...bc->...abcd", T, S)
        - np.einsum("...bc,...ad->...abcd", T, S)
    )


def _slot_letters(rank: int) -> str:
    letters = string.ascii_lowercase[1:25]  # 'a'는 미분 슬롯, 'z'는 더미
    if rank > len(letters) - 1:
        raise RankMismatch(f"rank {rank} too large")
    return letters[:rank]


def covariant_derivative_array(
    chart: ChartMetric, tensor_field: TensorField, points, cfg: FDConfig
) -> np.ndarray:
    """
    공변 텐서장의 공변미분 (∇가 첫 슬롯)

    ∇_a T_{b..} = ∂_a T_{b..} − Σ_j Γ^z_{a b_j} T_{..z..}
    """
    points = np.asarray(points, dtype=float)
    nbatch = points.ndim - 1
    values = np.asarray(tensor_field(points), dtype=float)
    rank = values.ndim - nbatch
    dvalues = partial_derivatives(tensor_field, points, cfg)
    if rank == 0:
        return dvalues
    gamma = christoffel_array(chart, points, cfg)
    slots = _slot_letters(rank)
    result = dvalues
    for j, slot in enumerate(slots):
        t_sub = slots[:j] + "z" + slots[j + 1:]
        result = result - np.einsum(f"...za{slot},...{t_sub}->...a{slots}", gamma, values)
    return result


def orthonormal_frame_array(g: np.ndarray, order: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    좌표 기저에 대한 g-Gram–Schmidt 정규직교 틀 (..., i, a) = E_i^a

    order로 좌표 순서를 바꿀 수 있다 (틀 독립성 검사용).
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[-1]
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise RankMismatch(f"order {order} is not a permutation of range({n})")
    batch = g.shape[:-2]
    frame = np.zeros(batch + (n, n))
    for i, coord in enumerate(order):
        vec = np.zeros(batch + (n,))
        vec[..., coord] = 1.0
        for j in range(i):
            proj = np.einsum("...a,...ab,...b->...", vec, g, frame[..., j, :])
            vec = vec - proj[..., None] * frame[..., j, :]
        norm = np.sqrt(np.einsum("...a,...ab,...b->...", vec, g, vec))
        frame[..., i, :] = vec / norm[..., None]
    return frame


def frame_components_array(tensor: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """공변 텐서의 정규직교 틀 성분 T(E_i, E_j, ...)"""
    tensor = np.asarray(tensor, dtype=float)
    rank = tensor.ndim - (frame.ndim - 2)
    slots = _slot_letters(rank)
    result = tensor
    for _ in range(rank):
        # 첫 슬롯을 틀 성분으로 바꾸고 맨 뒤로 보냄
        result = np.einsum(f"...z{slots[0]},...{slots}->...{slots[1:]}z", frame, result)
    return result


def divergence_array(
    chart: ChartMetric,
    tensor_field: TensorField,
    points,
    cfg: FDConfig,
    order: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """
    첫 슬롯 축약 발산 δT(⋯) = Σ_i (∇_{E_i}T)(E_i, ⋯)

    E_i는 평가점에서 Gram–Schmidt로 만든 정규직교 틀이다.
    """
    points = np.asarray(points, dtype=float)
    nabla = covariant_derivative_array(chart, tensor_field, points, cfg)
    rank = nabla.ndim - (points.ndim - 1) - 1
    if rank < 1:
        raise RankMismatch("divergence requires a tensor field of rank >= 1")
    frame = orthonormal_frame_array(chart.metric(points), order)
    inverse_from_frame = np.einsum("...ia,...ib->...ab", frame, frame)
    rest = _slot_letters(rank + 1)[2:]
    return np.einsum(f"...ab,...ab{rest}->...{rest}", inverse_from_frame, nabla)


def interior_product_array(vector: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    """ι_X T(⋯) = T(X, ⋯)"""
    vector = np.asarray(vector, dtype=float)
    tensor = np.asarray(tensor, dtype=float)
    rank = tensor.ndim - vector.ndim + 1
    slots = _slot_letters(rank)
    return np.einsum(f"...{slots[0]},...{slots}->...{slots[1:]}", vector, tensor)


def schouten_weyl_array(curv: CurvatureArrays) -> Tuple[np.ndarray, np.ndarray]:
    """비가중 Schouten P = (ρ − J g)/(n−2), J = τ/(2(n−1)), Weyl W = R − P⊘g"""
    n = curv.g.shape[-1]
    if n < 3:
        raise RankMismatch("Schouten tensor requires n >= 3")
    J = curv.scalar / (2.0 * (n - 1))
    P = (curv.ricci - J[..., None, None] * curv.g) / (n - 2)
    W = curv.riemann - kulkarni_nomizu_array(P, curv.g)
    return P, W


# ==============================================================================
# Single-point operations
# ==============================================================================


@dataclass(frozen=True)
class CurvatureBundle:
    riemann: TensorValue
    ricci: TensorValue
    scalar: float


@dataclass(frozen=True)
class ScalarCalculus:
    grad: TensorValue
    hess: TensorValue
    laplacian: float
    grad_norm_sq: float
    differential: TensorValue


def _as_point(chart: ChartMetric, p) -> np.ndarray:
    point = np.asarray(p, dtype=float).reshape(1, -1)
    if point.shape[-1] != chart.dim:
        raise RankMismatch(f"point has {point.shape[-1]} coordinates, chart has {chart.dim}")
    return point


def christoffel(chart: ChartMetric, p, cfg: FDConfig = FDConfig()) -> TensorValue:
    """
    한 점에서의 Christoffel 기호 Γ^k_ij

    Returns:
        TensorValue: rank 3, components[k, i, j] = Γ^k_ij
    """
    return TensorValue(christoffel_array(chart, _as_point(chart, p), cfg)[0])


def curvature_bundle(chart: ChartMetric, p, cfg: FDConfig = FDConfig()) -> CurvatureBundle:
    """한 점에서의 리만 (0,4), 리치, 스칼라 곡률"""
    curv = curvature_arrays(chart, _as_point(chart, p), cfg)
    return CurvatureBundle(
        riemann=TensorValue(curv.riemann[0], SymmetryTag.RIEMANN_LIKE),
        ricci=TensorValue(curv.ricci[0], SymmetryTag.SYM2),
        scalar=float(curv.scalar[0]),
    )


def scalar_calculus(chart: ChartMetric, s: Callable, p, cfg: FDConfig = FDConfig()) -> ScalarCalculus:
    """한 점에서의 기울기(벡터), 헤시안, 라플라시안, |∇s|²"""
    arrs = scalar_calculus_array(chart, s, _as_point(chart, p), cfg)
    return ScalarCalculus(
        grad=TensorValue(arrs.grad[0]),
        hess=TensorValue(arrs.hess[0], SymmetryTag.SYM2),
        laplacian=float(arrs.laplacian[0]),
        grad_norm_sq=float(arrs.grad_norm_sq[0]),
        differential=TensorValue(arrs.differential[0]),
    )


def kulkarni_nomizu(S: TensorValue, T: TensorValue) -> TensorValue:
    """
    Kulkarni–Nomizu 곱

    Raises:
        RankMismatch: rank 2가 아니거나 차원이 다른 경우
    """
    if S.rank != 2 or T.rank != 2:
        raise RankMismatch(f"Kulkarni-Nomizu product needs rank-2 tensors, got {S.rank} and {T.rank}")
    if S.dim != T.dim:
        raise RankMismatch(f"dimension mismatch: {S.dim} vs {T.dim}")
    return TensorValue(kulkarni_nomizu_array(S.components, T.components), SymmetryTag.RIEMANN_LIKE)


def covariant_derivative(
    chart: ChartMetric, tensor_field: TensorField, p, cfg: FDConfig = FDConfig()
) -> TensorValue:
    """배치 텐서장 T의 공변미분 ∇T (rank r+1, ∇가 첫 슬롯)"""
    point = _as_point(chart, p)
    rank = np.asarray(tensor_field(point)).ndim - 1
    if rank > 4:
        raise RankMismatch(f"covariant derivative supports rank <= 4, got {rank}")
    return TensorValue(covariant_derivative_array(chart, tensor_field, point, cfg)[0])


def divergence(
    chart: ChartMetric,
    tensor_field: TensorField,
    p,
    cfg: FDConfig = FDConfig(),
    order: Optional[Sequence[int]] = None,
) -> TensorValue:
    """정규직교 틀로 첫 슬롯을 축약한 발산 δT (rank r−1)"""
    return TensorValue(divergence_array(chart, tensor_field, _as_point(chart, p), cfg, order)[0])


def interior_product(X: TensorValue, T: TensorValue) -> TensorValue:
    """
    내부곱 ι_X T

    Raises:
        RankMismatch: X가 벡터가 아니거나 T가 rank 0인 경우, 또는 차원 불일치
    """
    if X.rank != 1 or T.rank < 1:
        raise RankMismatch(f"interior product needs a vector and a tensor of rank >= 1")
    if X.dim != T.dim:
        raise RankMismatch(f"dimension mismatch: {X.dim} vs {T.dim}")
    return TensorValue(interior_product_array(X.components, T.components))


def raise_index(g, covector) -> np.ndarray:
    """g^{-1}로 코벡터의 첨자를 올림"""
    g = np.asarray(g, dtype=float)
    return np.einsum("...ij,...j->...i", np.linalg.inv(g), np.asarray(covector, dtype=float))


def orthonormal_frame(g, order: Optional[Sequence[int]] = None) -> np.ndarray:
    return orthonormal_frame_array(g, order)


def frame_components(tensor, frame) -> np.ndarray:
    """TensorValue 또는 배열의 정규직교 틀 성분"""
    comps = tensor.components if isinstance(tensor, TensorValue) else np.asarray(tensor, dtype=float)
    return frame_components_array(comps, np.asarray(frame, dtype=float))


def schouten_weyl(chart: ChartMetric, p, cfg: FDConfig = FDConfig()) -> Tuple[TensorValue, TensorValue]:
    """한 점에서의 비가중 Schouten 텐서와 Weyl 텐서"""
    curv = curvature_arrays(chart, _as_point(chart, p), cfg)
    P, W = schouten_weyl_array(curv)
    return TensorValue(P[0], SymmetryTag.SYM2), TensorValue(W[0], SymmetryTag.RIEMANN_LIKE)
