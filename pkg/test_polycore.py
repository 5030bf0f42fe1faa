"""
Tests for polynomial parsing, exact root finding and truncated series.
"""
from fractions import Fraction

import numpy as np
import pytest

from milnorlab.errors import InputError, ParseError, RootFindingError, TruncationError, UnknownVariableError
from milnorlab.polycore import (
    ComplexSeries,
    Polynomial,
    arith,
    complex_roots,
    compose_series,
    differentiate,
    evaluate_complex,
    evaluate_many,
    exact_root,
    format_factored,
    monomial_content,
    parse_polynomial,
    polynomial_gcd,
    squarefree_part,
)

XY = ["x", "y"]


def test_parse_implicit_products():
    """Juxtaposed single-letter variables multiply."""
    p = parse_polynomial("x^5+x^2y^2+y^6", XY)
    assert p.terms == {(5, 0): 1, (2, 2): 1, (0, 6): 1}


def test_parse_rational_coefficients_and_powers():
    p = parse_polynomial("49/50*x^2 - (x+y)^2", XY)
    assert p.coefficient((2, 0)) == Fraction(49, 50) - 1
    assert p.coefficient((1, 1)) == -2
    assert p.coefficient((0, 2)) == -1


def test_parse_cancellation_drops_terms():
    p = parse_polynomial("x*y - y*x + x^2", XY)
    assert p.terms == {(2, 0): 1}


def test_canonical_form_reparses():
    text = "-3x^2y^2+4y^5+4x^5-8x^4y-8xy^4"
    p = parse_polynomial(text, XY)
    assert str(p) == "4*x^5 - 8*x^4*y - 8*x*y^4 + 4*y^5 - 3*x^2*y^2"
    assert parse_polynomial(str(p), XY) == p


def test_parse_rejects_unknown_variable():
    with pytest.raises(UnknownVariableError):
        parse_polynomial("x^2 + w", XY)


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_polynomial("x^2 +* y", XY)


def test_parse_rejects_duplicate_variables():
    with pytest.raises(InputError):
        parse_polynomial("x", ["x", "x"])


def test_differentiate_and_evaluate():
    p = parse_polynomial("x^3+y^2", XY)
    assert differentiate(p, "x") == parse_polynomial("3x^2", XY)
    assert evaluate_complex(p, [1j, 2]) == pytest.approx(-1j + 4)


def test_format_factored():
    p = parse_polynomial("6x^2y - 4xy", XY)
    assert format_factored(p) == "2*x*y*(3*x - 2)"
    assert format_factored(parse_polynomial("-9x^2y^2+4xy", XY)) == "x*y*(-9*x*y + 4)"


def test_polynomial_gcd():
    f = parse_polynomial("x^2 - y^2", XY)
    g = parse_polynomial("x^2 + 2xy + y^2", XY)
    assert polynomial_gcd(f, g).degree == 1
    assert polynomial_gcd(parse_polynomial("x^3+y^2", XY), parse_polynomial("x^2+y^2", XY)).degree == 0


def test_squarefree_part_counts_distinct_roots():
    # (s - 1)^2 (s + 2)
    coeffs, degree = squarefree_part([2, -3, 0, 1])
    assert degree == 2


def test_complex_roots_rational():
    assert complex_roots([-1, 0, 1]) == [(Fraction(-1), 1), (Fraction(1), 1)]
    assert complex_roots([1, -2, 1]) == [(Fraction(1), 2)]


def test_complex_roots_irrational_are_polished():
    roots = complex_roots([-2, 0, 1])
    assert [m for _, m in roots] == [1, 1]
    assert sorted(complex(r).real for r, _ in roots) == pytest.approx([-2 ** 0.5, 2 ** 0.5], abs=1e-12)


def test_complex_roots_fifth_roots_of_minus_one():
    roots = complex_roots([1, 0, 0, 0, 0, 1])
    assert len(roots) == 5
    assert roots[0] == (Fraction(-1), 1)
    for r, _ in roots:
        assert abs(complex(r) ** 5 + 1) < 1e-10


def test_complex_roots_certifies_a_float_quadruple_root():
    a = 2 ** 0.5 / 4
    coeffs = [complex(c) for c in (a ** 4, -4 * a ** 3, 6 * a ** 2, -4 * a, 1)]
    roots = complex_roots(coeffs)
    assert len(roots) == 1
    root, multiplicity = roots[0]
    assert multiplicity == 4
    assert root == pytest.approx(a, abs=1e-6)


def test_complex_roots_of_complex_coefficients_have_small_residuals():
    expected = [1 + 2j, -0.5j, 3.0, -2 + 1j]
    coeffs = [complex(c) for c in np.poly(expected)[::-1]]
    roots = complex_roots(coeffs)
    assert [m for _, m in roots] == [1, 1, 1, 1]
    for r, _ in roots:
        assert abs(np.polyval(coeffs[::-1], complex(r))) < 1e-9
    assert sorted(complex(r).real for r, _ in roots) == pytest.approx(sorted(z.real for z in expected), abs=1e-9)


def test_complex_roots_refuses_an_unresolved_near_double_root():
    # roots 1 and 1 + 1e-4: too close to split, too far apart to merge
    coeffs = [complex(1 + 1e-4), complex(-(2 + 1e-4)), 1 + 0j]
    with pytest.raises(RootFindingError):
        complex_roots(coeffs)


def test_complex_roots_rejects_constant():
    with pytest.raises(InputError):
        complex_roots([3])


def test_exact_root():
    assert exact_root(Fraction(4, 9), 2) == Fraction(2, 3)
    assert exact_root(Fraction(-8, 27), 3) == Fraction(-2, 3)
    assert exact_root(Fraction(4, 3), 2) is None
    assert exact_root(Fraction(-1), 2) is None


def test_series_inverse():
    s = ComplexSeries.build(0, [1, 1], 5)
    inv = s.inverse()
    assert [inv.coefficient(i) for i in range(5)] == [1, -1, 1, -1, 1]
    assert inv.is_exact


def test_series_product_truncation():
    a = ComplexSeries.build(2, [1, 1], 6)
    b = ComplexSeries.build(1, [2], 4)
    c = a * b
    assert c.order == 3
    assert c.truncation == min(6 + 1, 4 + 2)


def test_series_zero_has_order_equal_to_truncation():
    z = ComplexSeries.zero(7)
    assert z.is_zero and z.order == 7
    with pytest.raises(TruncationError):
        z.leading


def test_series_strips_negligible_float_head():
    s = ComplexSeries.build(0, [1e-15, 2.0 + 0j], 4)
    assert s.order == 1
    assert s.leading == 2.0


def test_polynomial_requires_matching_variables():
    p = Polynomial(["x", "y"], {(1, 0): 1})
    q = Polynomial(["u", "v"], {(1, 0): 1})
    with pytest.raises(InputError):
        p + q


def test_arith_matches_the_parser():
    p, q = parse_polynomial("x+y", XY), parse_polynomial("x-y", XY)
    assert arith(p, q, "mul") == parse_polynomial("x^2-y^2", XY)
    assert arith(p, q, "sub") == parse_polynomial("2y", XY)
    with pytest.raises(InputError):
        arith(p, q, "div")


def test_monomial_content():
    content, mono, cofactor = monomial_content(parse_polynomial("6x^2y-4xy", XY))
    assert content == 2
    assert mono == (1, 1)
    assert cofactor == parse_polynomial("3x-2", XY)


def test_vectorised_evaluation_matches_pointwise():
    p = parse_polynomial("x^3+2xy-1/3*y^2", XY)
    points = np.array([[0.5 + 1j, -2.0, 0.1j], [1.0, 0.25 - 0.5j, 3.0]])
    values = evaluate_many(p, points)
    for k in range(points.shape[1]):
        assert values[k] == pytest.approx(evaluate_complex(p, points[:, k]), abs=1e-12)


def test_compose_along_the_cusp():
    """x^3 + y^2 along (t^2, t^3) is 2 t^6; the cusp itself vanishes."""
    branch = [ComplexSeries.monomial(2, 1, 10), ComplexSeries.monomial(3, 1, 10)]
    series = compose_series(parse_polynomial("x^3+y^2", XY), branch, 10)
    assert series.order == 6
    assert series.leading == 2
    cusp = parse_polynomial("y^2-x^3", XY)
    assert compose_series(cusp, branch, 10, require_leading=False).is_zero
    with pytest.raises(TruncationError):
        compose_series(cusp, branch, 10)


def test_differentiate_is_linear_and_obeys_leibniz():
    p = parse_polynomial("x^3y+2xy^2-y", XY)
    q = parse_polynomial("x^2-3y^3+xy", XY)
    for var in XY:
        assert differentiate(p + q, var) == differentiate(p, var) + differentiate(q, var)
        assert differentiate(p * q, var) == differentiate(p, var) * q + p * differentiate(q, var)


def test_composition_is_multiplicative():
    branch = [ComplexSeries.monomial(2, 1, 12), ComplexSeries.build(3, [1, 2], 12)]
    p = parse_polynomial("x^2+y", XY)
    q = parse_polynomial("x-y^2+xy", XY)
    lhs = compose_series(p * q, branch, 12)
    rhs = (compose_series(p, branch, 12) * compose_series(q, branch, 12)).truncate(12)
    assert rhs.truncation == 12
    assert [lhs.coefficient(i) for i in range(12)] == [rhs.coefficient(i) for i in range(12)]
