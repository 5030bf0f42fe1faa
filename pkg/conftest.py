"""
Shared fixtures for the milnorlab test suite.
"""
import json
from pathlib import Path

import pytest

from milnorlab.polycore import parse_polynomial

ROOT = Path(__file__).parent
GOLDEN_DIR = ROOT / "golden"

# worked examples used across the suites
EXAMPLES = {
    "ex1": ("x^3+y^2", "x^2+y^2"),
    "still_ok": ("x^3-y^2", "x^2-y^3"),
    "third": ("xy^2+x^4+y^4", "x^2y+y^4+x^4"),
    "quintic": ("x^5+x^2y^2+y^6", "x^6+x^2y^2+y^5"),
    "homogeneous": ("x^2+xy+y^2", "x^2-xy+y^2"),
}

THIRD_JACOBIAN = "-3x^2y^2+4y^5+4x^5-8x^4y-8xy^4"
QUINTIC_CORE = "-10x^5-25x^3y^3-10y^5+12x^6+36x^4y^4+12y^6"


def xy(text):
    return parse_polynomial(text, ["x", "y"])


@pytest.fixture
def poly():
    """Parser bound to the variables (x, y)."""
    return xy


@pytest.fixture(params=sorted(EXAMPLES))
def example_pair(request):
    f, g = EXAMPLES[request.param]
    return request.param, xy(f), xy(g)


def assert_subset(expected, actual, path="$"):
    """Every field of `expected` must appear in `actual` with the same value."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict), f"{path}: expected an object, got {actual!r}"
        for key, value in expected.items():
            assert key in actual, f"{path}.{key} missing"
            assert_subset(value, actual[key], f"{path}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list) and len(actual) == len(expected), f"{path}: list mismatch"
        for i, (e, a) in enumerate(zip(expected, actual)):
            assert_subset(e, a, f"{path}[{i}]")
    elif isinstance(expected, float):
        assert actual == pytest.approx(expected, rel=1e-9, abs=1e-12), f"{path}: {actual} != {expected}"
    else:
        assert actual == expected, f"{path}: {actual!r} != {expected!r}"


def load_golden(name):
    return json.loads((GOLDEN_DIR / f"{name}.json").read_text(encoding="utf-8"))
