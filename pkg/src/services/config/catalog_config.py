"""
Catalog Configuration
모델 패밀리 식별자, CLI slug, 제목, 파라미터 플래그 설정
"""

from enum import Enum
from typing import Dict, List, Tuple

from services.helpers.errors import UnknownFamily

# ==============================================================================
# Family Identifiers
# ==============================================================================


class FamilyId(Enum):
    """카탈로그에 등록된 명시적 패밀리"""

    EXAMPLE12 = "Example12"
    WEIGHTED_SPHERE = "WeightedSphere"
    WEIGHTED_EUCLIDEAN = "WeightedEuclidean"
    WEIGHTED_HYPERBOLIC = "WeightedHyperbolic"
    COUNTEREXAMPLE31 = "Counterexample31"
    COUNTEREXAMPLE32 = "Counterexample32"
    THM41_POSITIVE = "Thm41Positive"
    THM41_ZERO = "Thm41Zero"
    THM41_NEGATIVE = "Thm41Negative"
    EXAMPLE43 = "Example43"
    THM14_3B = "Thm14_3b"


# CLI에서 사용하는 안정적인 문자열 식별자
FAMILY_SLUGS: Dict[FamilyId, str] = {
    FamilyId.EXAMPLE12: "example-1-2",
    FamilyId.WEIGHTED_SPHERE: "weighted-sphere",
    FamilyId.WEIGHTED_EUCLIDEAN: "weighted-euclidean",
    FamilyId.WEIGHTED_HYPERBOLIC: "weighted-hyperbolic",
    FamilyId.COUNTEREXAMPLE31: "counterexample-3-1",
    FamilyId.COUNTEREXAMPLE32: "counterexample-3-2",
    FamilyId.THM41_POSITIVE: "thm-4-1-positive",
    FamilyId.THM41_ZERO: "thm-4-1-zero",
    FamilyId.THM41_NEGATIVE: "thm-4-1-negative",
    FamilyId.EXAMPLE43: "example-4-3",
    FamilyId.THM14_3B: "thm-1-4-3b",
}

FAMILY_TITLES: Dict[FamilyId, str] = {
    FamilyId.EXAMPLE12: "Non-Einstein weighted Einstein warped product (m=1/2, flat fiber)",
    FamilyId.WEIGHTED_SPHERE: "m-weighted n-sphere",
    FamilyId.WEIGHTED_EUCLIDEAN: "m-weighted n-Euclidean space",
    FamilyId.WEIGHTED_HYPERBOLIC: "m-weighted n-hyperbolic space",
    FamilyId.COUNTEREXAMPLE31: "Conformally flat weighted Einstein chart, Weyl not weighted harmonic",
    FamilyId.COUNTEREXAMPLE32: "Three-dimensional weighted Einstein chart, Weyl not weighted harmonic",
    FamilyId.THM41_POSITIVE: "Einstein warped product with Einstein fiber, lambda > 0",
    FamilyId.THM41_ZERO: "Einstein warped product with Einstein fiber, lambda = 0",
    FamilyId.THM41_NEGATIVE: "Einstein warped product with Einstein fiber, lambda < 0",
    FamilyId.EXAMPLE43: "Warped product over a product of two constant-curvature surfaces",
    FamilyId.THM14_3B: "Warped product of a Ricci-flat fiber, exponential warp",
}

# 워프곱(WarpedSMMS)으로 구성되는 패밀리 / 좌표 차트로만 구성되는 패밀리
CHART_ONLY_FAMILIES: Tuple[FamilyId, ...] = (
    FamilyId.COUNTEREXAMPLE31,
    FamilyId.COUNTEREXAMPLE32,
)

# ==============================================================================
# Parameter Flags
# ==============================================================================

# CLI 플래그 이름 (기호 이름 그대로 사용)
PARAM_FLAGS: List[str] = [
    "n", "m", "lambda", "mu", "A", "B", "C", "c1", "c2", "c3", "c4", "xi", "kappa",
]

# 정수로 해석할 플래그
INTEGER_FLAGS: List[str] = ["n"]


# ==============================================================================
# Lookup Functions
# ==============================================================================


def family_from_slug(slug: str) -> FamilyId:
    """
    CLI slug 또는 Enum 값으로 FamilyId 조회

    Args:
        slug: "weighted-sphere" 같은 slug 또는 "WeightedSphere" 같은 식별자

    Returns:
        FamilyId: 대응하는 패밀리

    Raises:
        UnknownFamily: 등록되지 않은 식별자
    """
    key = slug.strip()
    for family, family_slug in FAMILY_SLUGS.items():
        if key == family_slug or key == family.value:
            return family
    raise UnknownFamily(f"unknown family '{slug}' (try `smms list`)")


def slug_for_family(family: FamilyId) -> str:
    """FamilyId의 CLI slug 반환"""
    return FAMILY_SLUGS[family]


def title_for_family(family: FamilyId) -> str:
    return FAMILY_TITLES[family]
