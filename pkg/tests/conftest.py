"""공통 fixture: 유한차분 설정, 대표 차트, 카탈로그 패밀리"""

import numpy as np
import pytest

from services.catalog.families import build_family, resolve_params
from services.config.catalog_config import FamilyId
from services.geometry.tensor_core import ChartMetric, FDConfig, space_form_chart


@pytest.fixture
def cfg():
    return FDConfig()


@pytest.fixture
def unit_sphere_3d():
    return space_form_chart(1.0, 3, name="S3")


@pytest.fixture
def bumpy_chart():
    """g = e^{2u} δ, u = 0.3 x1 + 0.1 x2² − 0.05 x1 x3 (상수 곡률이 아닌 3차원 차트)"""

    def metric_fn(points):
        x = np.asarray(points, dtype=float)
        u = 0.3 * x[..., 0] + 0.1 * x[..., 1] ** 2 - 0.05 * x[..., 0] * x[..., 2]
        return np.exp(2.0 * u)[..., None, None] * np.eye(3)

    domain = tuple((-np.inf, np.inf) for _ in range(3))
    return ChartMetric(3, metric_fn, domain, name="bumpy")


@pytest.fixture
def family():
    """패밀리 id와 덮어쓸 값으로 생성"""

    def make(fid: FamilyId, **overrides):
        return build_family(fid, resolve_params(fid, overrides))

    return make
