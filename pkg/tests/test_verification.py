"""VerificationService: Einstein 분기의 Weyl 조화성 검사와 JSON 렌더링"""

import json
import math

import numpy as np
import pytest

from services.config.runtime_config import WEYL_HARMONIC_TOL
from services.verification.verification_service import get_verification_service
from services.views.report_view import render_json, render_mapping


def _service(slug, **overrides):
    return get_verification_service(slug, overrides, samples=3, tol=1e-4, rel_step=1e-3)


@pytest.mark.parametrize("slug", ["weighted-sphere", "thm-4-1-positive"])
def test_einstein_branch_checks_unweighted_weyl_harmonicity(slug):
    result = _service(slug).classify()
    assert result.branch == "einstein"
    assert result.passed
    delta_w, interior_w = result.weyl_harmonicity
    assert delta_w <= WEYL_HARMONIC_TOL
    assert interior_w <= WEYL_HARMONIC_TOL


def test_weyl_harmonicity_failure_fails_classification(monkeypatch):
    service = _service("weighted-sphere")
    monkeypatch.setattr(service, "weyl_harmonicity", lambda: (1e-3, 0.0))
    result = service.classify()
    assert result.branch == "einstein"
    assert not result.passed


def test_non_einstein_branch_skips_the_weyl_check():
    result = _service("example-1-2").classify()
    assert result.branch == "non-einstein-example-1-2"
    assert result.weyl_harmonicity is None


def test_weyl_harmonicity_stays_out_of_the_json_report():
    result = _service("weighted-sphere").classify()
    assert "weyl_harmonicity" not in json.loads(render_json(result))


def test_mapping_encoding_handles_non_finite_and_numpy_values():
    text = render_mapping({
        "nan": math.nan,
        "inf": -math.inf,
        "numpy": np.float64(0.1),
        "count": np.int64(3),
        "pair": (1.0, 2.5),
    })
    assert text.endswith("\n")
    decoded = json.loads(text)
    assert list(decoded) == ["nan", "inf", "numpy", "count", "pair"]
    assert decoded["nan"] is None
    assert decoded["inf"] == "-inf"
    assert decoded["numpy"] == 0.1
    assert decoded["count"] == 3
    assert decoded["pair"] == [1.0, 2.5]
