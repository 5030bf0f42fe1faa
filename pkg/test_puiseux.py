"""
Tests for Newton-Puiseux branches of plane curve germs.
"""
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from conftest import QUINTIC_CORE, THIRD_JACOBIAN, xy
from milnorlab.corpus import random_plane_germ
from milnorlab.errors import ConstantTermError, DimensionError, InputError
from milnorlab.newton import newton_boundary
from milnorlab.polycore import parse_polynomial, to_complex
from milnorlab.puiseux import branches, verify_branch


def test_cusp_single_branch():
    """y^2 = x^3 is parametrised by (t^2, t^3)."""
    found = branches(xy("y^2-x^3"))
    assert len(found) == 1
    b = found[0]
    assert b.ramification == 2
    assert tuple(b.normal) == (2, 3)
    assert b.y_series.order == 3
    assert b.y_series.coefficient(3) == 1
    assert b.is_exact
    assert b.verified_to >= b.truncation


def test_axis_branches_come_first():
    found = branches(xy("x*y*(y-x^2)"))
    assert [b.axis for b in found[:2]] == ["x=0", "y=0"]
    assert len(found) == 3
    last = found[2]
    assert last.y_series.coefficient(2) == 1
    assert last.to_json()["x"] == "t"


def test_only_axis_branches():
    found = branches(xy("6x^2y-4xy"))
    assert [b.rooted_at for b in found] == ["x=0", "y=0"]
    assert found[0].to_json()["x"] == "0"


def test_third_example_leading_terms():
    """On the face (2,3): y = (2/sqrt(3)) t^3 - (4/3) t^4 + ..."""
    found = branches(xy(THIRD_JACOBIAN))
    assert len(found) == 2
    first = found[0]
    assert tuple(first.normal) == (2, 3)
    assert first.edge_root == Fraction(4, 3)
    assert first.ramification == 2
    assert to_complex(first.y_series.coefficient(3)) == pytest.approx(2 * np.sqrt(3) / 3, abs=1e-9)
    assert to_complex(first.y_series.coefficient(4)) == pytest.approx(-4 / 3, abs=1e-9)
    assert tuple(found[1].normal) == (3, 2)
    assert found[1].ramification == 3


def test_quintic_core_has_five_smooth_branches():
    found = branches(xy(QUINTIC_CORE))
    assert len(found) == 5
    assert all(tuple(b.normal) == (1, 1) and b.ramification == 1 for b in found)
    for b in found:
        assert abs(abs(to_complex(b.alpha)) - 1.0) < 1e-9
        assert verify_branch(xy(QUINTIC_CORE), b) >= b.truncation


def test_quintic_real_branch_is_exact():
    """The real branch is y = -x + (49/50) x^2 + ... with rational coefficients."""
    real = branches(xy(QUINTIC_CORE))[0]
    assert real.alpha == -1
    assert real.is_exact
    assert real.y_series.coefficient(1) == -1
    assert real.y_series.coefficient(2) == Fraction(49, 50)


def test_full_jacobian_of_the_quintic_pair():
    J = xy("10x^6y+25x^4y^4+10xy^6-12x^7y-36x^5y^5-12xy^7")
    found = branches(J)
    assert len(found) == 7
    assert [b.axis for b in found[:2]] == ["x=0", "y=0"]


def test_repeated_root_is_resolved():
    """(y - x^2)^2 - x^5 has a double root on its edge and one ramified branch."""
    k = xy("(y-x^2)^2-x^5")
    found = branches(k)
    assert sum(b.ramification for b in found) == 2
    assert all(b.root_multiplicity == 2 for b in found)
    for b in found:
        assert verify_branch(k, b) >= b.truncation


def test_truncation_controls_series_length():
    b = branches(xy("y^2-x^3"), N=6)[0]
    assert b.truncation == 3 + 6 + 1


def test_branches_reject_bad_input():
    with pytest.raises(ConstantTermError):
        branches(xy("1+x+y"))
    with pytest.raises(InputError):
        branches(xy("y^2-x^3"), N=3)
    with pytest.raises(DimensionError):
        branches(parse_polynomial("x^2+y^2+z^2", ["x", "y", "z"]))


def test_json_form():
    doc = branches(xy("y^2-x^3"))[0].to_json()
    assert doc["x"] == "t^2"
    assert doc["P"] == [2, 3]
    assert doc["y"][0] == {"ord": 3, "re": 1.0, "im": 0.0, "exact": "1"}


def test_random_germs_verify():
    """Every branch of 20 random germs satisfies k(x(t), y(t)) = O(t^T)."""
    rng = np.random.default_rng(2024)
    for _ in range(20):
        k = random_plane_germ(rng)
        found = branches(k)
        assert found
        for b in found:
            assert verify_branch(k, b) >= b.truncation, str(k)


def test_leading_data_match_the_edges():
    """Branches rooted on an edge carry its normal; their count matches the edge roots."""
    rng = np.random.default_rng(11)
    for _ in range(10):
        k = random_plane_germ(rng)
        found = branches(k)
        per_edge = Counter(tuple(b.normal) for b in found if b.normal is not None)
        for edge in newton_boundary(k).edges:
            # a non-degenerate edge of lattice length L yields L branches, each of ramification p
            branches_on_edge = [b for b in found if b.normal == edge.normal]
            lattice = (edge.lattice_points[0][0] - edge.lattice_points[-1][0]) // edge.normal.q
            assert per_edge[tuple(edge.normal)] == lattice
            assert sum(b.ramification for b in branches_on_edge) == lattice * edge.normal.p
