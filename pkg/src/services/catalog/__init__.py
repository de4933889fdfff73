"""
Catalog Module
명시적 패밀리 생성자와 기대값 레코드
"""

from services.catalog.families import (
    DEFAULT_PARAMS,
    FamilyExpected,
    FamilyParams,
    GoldenComponent,
    build_family,
    family_expected,
    family_samples,
    list_families,
    random_params,
    resolve_params,
)

__all__ = [
    "DEFAULT_PARAMS",
    "FamilyExpected",
    "FamilyParams",
    "GoldenComponent",
    "build_family",
    "family_expected",
    "family_samples",
    "list_families",
    "random_params",
    "resolve_params",
]
