"""
Tests for Newton boundaries, non-degeneracy and the multiplicity condition.
"""
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from conftest import EXAMPLES, xy
from milnorlab.corpus import generate_germ_corpus
from milnorlab.errors import ConstantTermError, InputError, NonConvenientError
from milnorlab.newton import (
    face_function,
    gamma_minus_area,
    multiplicity_condition,
    newton_boundary,
    newton_number_2d,
    nondegeneracy_2d,
    pair_nondegeneracy_2d,
    weighted_degree,
)
from milnorlab.polycore import Polynomial, differentiate, parse_polynomial

XYZ = ["x", "y", "z"]


def test_quintic_edges():
    """x^5 + x^2y^2 + y^6 has two edges, ordered from the x-axis end."""
    data = newton_boundary(xy("x^5+x^2y^2+y^6"))
    assert [tuple(e.normal) for e in data.edges] == [(2, 3), (2, 1)]
    assert [e.degree for e in data.edges] == [10, 6]
    assert data.boundary_vertices == ((5, 0), (2, 2), (0, 6))
    assert data.intercepts == (5, 6)
    assert data.convenient


def test_edge_polynomial_and_lattice_length():
    ff = face_function(xy("x^5+x^2y^2+y^6"), (2, 1))
    assert ff.edge_polynomial == (1, 0, 1)
    assert ff.lattice_length == 2
    assert ff.distinct_roots() == 2


def test_cusp_face_function():
    ff = face_function(xy("y^2-x^3"), (2, 3))
    assert ff.degree == 6
    assert ff.edge_polynomial == (-1, 1)


def test_interior_points_do_not_change_the_boundary():
    plain = newton_boundary(xy("x^4+y^4"))
    extra = newton_boundary(xy("x^4+y^4+x^3y^3"))
    assert [tuple(e.normal) for e in plain.edges] == [tuple(e.normal) for e in extra.edges]


def test_non_convenient_boundary():
    data = newton_boundary(xy("x^2y+y^3"))
    assert data.intercepts == (None, 3)
    assert not data.convenient
    with pytest.raises(NonConvenientError):
        newton_number_2d(xy("x^2y+y^3"))


def test_constant_term_is_rejected():
    with pytest.raises(ConstantTermError):
        newton_boundary(xy("1+x^2+y^2"))


def test_weighted_degree():
    f = xy("x^3+y^2")
    assert weighted_degree((2, 3), f) == 6
    assert weighted_degree((1, 1), f) == 2
    with pytest.raises(InputError):
        weighted_degree((1, 1, 1), f)


def test_area_and_newton_number():
    f = xy("x^5+x^2y^2+y^6")
    assert gamma_minus_area(f) == Fraction(11)
    assert newton_number_2d(f) == 12


def test_newton_number_of_a_brieskorn_curve():
    # (a-1)(b-1)
    assert newton_number_2d(xy("x^4+y^7")) == 18


def test_degenerate_edge_is_detected():
    check = nondegeneracy_2d(xy("(x+y)^2+x^5"))
    assert not check
    assert tuple(check.face) == (1, 1)
    assert nondegeneracy_2d(xy("x^2+y^2"))


def test_pair_degeneracy_on_shared_edge():
    check = pair_nondegeneracy_2d(xy("x^2-y^2"), xy("x^3+x^2y-xy^2-y^3"))
    assert not check
    assert pair_nondegeneracy_2d(xy("x^2+y^2"), xy("x^5+y^5"))


def test_three_variable_faces_are_compact():
    data = newton_boundary(parse_polynomial("x^2+y^3+z^4", XYZ))
    assert len(data.facets) == 1
    assert tuple(data.facets[0].normal) == (6, 4, 3)
    assert data.intercepts == (2, 3, 4)
    assert len(data.faces) == 1 + 3 + 3


def test_multiplicity_condition_holds():
    verdict = multiplicity_condition(xy("x^3+y^3"), xy("x^2+y^2"))
    assert verdict.satisfied
    assert verdict.direction == "f_above"
    assert verdict.witness is None


def test_multiplicity_condition_mirrored():
    verdict = multiplicity_condition(xy("x^2+y^2"), xy("x^5+y^5"))
    assert verdict.satisfied
    assert verdict.direction == "g_above"


@pytest.mark.parametrize("name,witness", [
    ("ex1", (1, 1)),
    ("quintic", (2, 3)),
    ("homogeneous", (1, 2)),
])
def test_multiplicity_witness(name, witness):
    """The witness equalises the weighted degrees."""
    f, g = (xy(t) for t in EXAMPLES[name])
    verdict = multiplicity_condition(f, g)
    assert not verdict.satisfied
    assert tuple(verdict.witness) == witness
    assert weighted_degree(verdict.witness, f) == weighted_degree(verdict.witness, g)


def test_multiplicity_witness_in_three_variables():
    f = parse_polynomial("x^2+y^2+z^2", XYZ)
    g = parse_polynomial("x^2+y^3+z^3", XYZ)
    verdict = multiplicity_condition(f, g)
    assert not verdict.satisfied
    assert weighted_degree(verdict.witness, f) == weighted_degree(verdict.witness, g)


def test_multiplicity_condition_needs_convenient_germs():
    with pytest.raises(NonConvenientError):
        multiplicity_condition(xy("x^2y+y^3"), xy("x^2+y^2"))


def test_corpus_newton_number_is_positive():
    """Every corpus germ is convenient with a positive Newton number."""
    corpus = generate_germ_corpus(n_samples=30, seed=7)
    assert len(corpus) == 30
    assert (corpus["newton_number"] >= 1).all()
    assert corpus["germ_id"].is_unique


def _random_germ3(rng):
    """Convenient germ in (x, y, z): three axis terms plus a few mixed ones."""
    terms = {}
    for axis in range(3):
        exponent = [0, 0, 0]
        exponent[axis] = int(rng.integers(1, 7))
        terms[tuple(exponent)] = int(rng.integers(1, 4))
    for _ in range(int(rng.integers(0, 4))):
        exponent = tuple(int(a) for a in rng.integers(0, 4, size=3))
        if sum(exponent) > 0:
            terms[exponent] = 1
    return Polynomial(XYZ, terms)


def test_axis_vertices_separate_in_three_variables():
    """z^6 + x + y: one triangle, three edges, three vertices."""
    data = newton_boundary(parse_polynomial("z^6+x+y", XYZ))
    assert set(data.boundary_vertices) == {(1, 0, 0), (0, 1, 0), (0, 0, 6)}
    assert len(data.edges) == 3
    assert [tuple(face.normal) for face in data.facets] == [(6, 6, 1)]


def test_three_variable_violation_is_detected():
    f = parse_polynomial("z^6+x+y", XYZ)
    g = parse_polynomial("xyz^3+y^5+x^4+z^2", XYZ)
    assert weighted_degree((2, 2, 1), f) == weighted_degree((2, 2, 1), g) == 2
    verdict = multiplicity_condition(f, g)
    assert not verdict.satisfied
    assert weighted_degree(verdict.witness, f) == weighted_degree(verdict.witness, g)


def test_three_variable_verdicts_agree_with_a_weight_scan():
    """Satisfied verdicts keep one sign of d(P;f) - d(P;g) over a grid of weights."""
    rng = np.random.default_rng(5)
    grid = list(product(range(1, 7), repeat=3))
    for _ in range(25):
        f, g = _random_germ3(rng), _random_germ3(rng)
        verdict = multiplicity_condition(f, g)
        if verdict.satisfied:
            sign = 1 if verdict.direction == "f_above" else -1
            for P in grid:
                assert sign * (weighted_degree(P, f) - weighted_degree(P, g)) > 0, (str(f), str(g), P)
        else:
            assert weighted_degree(verdict.witness, f) == weighted_degree(verdict.witness, g)


@pytest.mark.parametrize("text", ["x^5+x^2y^2+y^6", "x^4+x^2y+y^3", "y^2-x^3"])
def test_face_functions_satisfy_the_euler_identity(text):
    """p x ∂f_P/∂x + q y ∂f_P/∂y = d f_P on every edge."""
    f = xy(text)
    x, y = Polynomial.variable("x", ["x", "y"]), Polynomial.variable("y", ["x", "y"])
    for edge in newton_boundary(f).edges:
        face = face_function(f, edge.normal)
        fp = face.polynomial
        lhs = x * differentiate(fp, "x") * edge.normal.p + y * differentiate(fp, "y") * edge.normal.q
        assert lhs == fp * face.degree
