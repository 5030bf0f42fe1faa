"""
Tests for monodromy zeta functions of plane germs, their products and mixed
pairs, and of homogeneous pairs in three variables.
"""
import pytest

from conftest import xy
from milnorlab.corpus import generate_germ_corpus
from milnorlab.errors import (
    DegenerateFaceError,
    DimensionError,
    EqualDegreeError,
    HomogeneityError,
    MultiplicityConditionError,
    NonConvenientError,
)
from milnorlab.newton import gamma_minus_area, newton_number_2d
from milnorlab.polycore import parse_polynomial
from milnorlab.zeta import (
    ZetaFactored,
    homog3_data,
    milnor_from_zeta,
    plane_zeta_from_newton,
    zeta_mixed_homog3,
    zeta_mixed_plane,
    zeta_plane,
    zeta_plane_product,
)

Z123 = ["z1", "z2", "z3"]


def z3(text):
    return parse_polynomial(text, Z123)


def test_factored_form_is_normalised():
    z = ZetaFactored.from_factors([(4, 1), (2, -2), (4, -2), (6, 0), (3, 1)])
    assert z.factors == ((2, -2), (3, 1), (4, -1))
    assert z.degree == -4 + 3 - 4
    assert milnor_from_zeta(z) == 6


def test_cusp():
    z = zeta_plane(xy("x^2+y^3"))
    assert z.factors == ((2, 1), (3, 1), (6, -1))
    assert z.milnor == 2


def test_quintic_zeta_matches_newton_number():
    f = xy("x^5+x^2y^2+y^6")
    z = zeta_plane(f)
    assert z.factors == ((5, 1), (6, -1), (10, -1))
    assert z.milnor == 12 == newton_number_2d(f)


def test_homogeneous_cubic():
    z = zeta_plane(xy("x^3+y^3"))
    assert z.factors == ((3, -1),)
    assert z.milnor == 4


def test_zeta_plane_rejects_degenerate_germ():
    with pytest.raises(DegenerateFaceError):
        zeta_plane(xy("(x+y)^2+x^5"))


def test_zeta_plane_rejects_non_convenient_germ():
    with pytest.raises(NonConvenientError):
        zeta_plane(xy("x^2y+y^3"))


def test_zeta_plane_needs_two_variables():
    with pytest.raises(DimensionError):
        zeta_plane(z3("z1^2+z2^2+z3^2"))


def test_product_of_circles():
    z = zeta_plane_product(xy("x^2+y^2"), xy("x^3+y^3"))
    assert z.factors == ((5, -3),)
    assert z.milnor == 16


def test_product_with_transverse_edges():
    z = zeta_plane_product(xy("x^2+y^3"), xy("x^3+y^2"))
    assert z.factors == ((5, 2), (10, -2))
    assert z.milnor == 11


def test_mixed_zeta_f_above_g():
    z = zeta_mixed_plane(xy("x^5+x^2y^2+y^6"), xy("x^2+y^2"))
    # (1-t^3)(1-t^4)(1-t^6)^-1 (1-t^2)^-2 (1-t^4)^-2
    assert z.factors == ((2, -2), (3, 1), (4, -1), (6, -1))
    assert z.milnor == 1 - (-4 + 3 - 4 - 6)


def test_mixed_zeta_mirrored_display():
    z = zeta_mixed_plane(xy("x^2+y^2"), xy("x^5+y^5"))
    assert z.factors == ((3, -5),)


def test_mixed_zeta_requires_multiplicity_condition():
    with pytest.raises(MultiplicityConditionError) as info:
        zeta_mixed_plane(xy("x^3+y^2"), xy("x^2+y^2"))
    assert str(info.value) == "Newton multiplicity condition violated; witness P=(1,1)"
    assert info.value.witness == (1, 1)


def test_homog3_quadric_and_plane():
    data = homog3_data(z3("z1^2+z2^2+z3^2"), z3("z1+z2+z3"))
    assert (data.chi_f, data.chi_g, data.intersections) == (2, 2, 2)
    assert data.chi_exceptional == 1
    assert data.zeta.factors == ((1, -1),)
    assert data.warnings == ()


def test_homog3_cubic_and_plane():
    z = zeta_mixed_homog3(z3("z1^3+z2^3+z3^3"), z3("z1+z2+z3"))
    assert z.factors == ((2, -4),)


def test_homog3_equal_degrees():
    with pytest.raises(EqualDegreeError):
        homog3_data(z3("z1^2+z2^2+z3^2"), z3("z1^2-z2^2+2z3^2"))


def test_homog3_needs_homogeneous_input():
    with pytest.raises(HomogeneityError):
        homog3_data(z3("z1^2+z2^3"), z3("z1+z2+z3"))


def test_homog3_warns_on_shared_component():
    data = homog3_data(z3("z1*(z1^2+z2^2+z3^2)"), z3("z1"))
    assert any("common" in w for w in data.warnings)


def test_corpus_milnor_number_equals_newton_number():
    """ζ-derived μ agrees with Kouchnirenko's number on 30 random germs."""
    corpus = generate_germ_corpus(n_samples=30, seed=42)
    for row in corpus.itertuples():
        f = xy(row.expression)
        z = zeta_plane(f)
        assert z.milnor == row.newton_number, row.expression
        assert z.degree <= 0
        # edge factors carry twice the area under the Newton polygon
        assert int(row.a_x) + int(row.a_y) - z.degree == 2 * gamma_minus_area(f)


@pytest.mark.parametrize("expr", ["x^5+x^2y^2+y^6", "x^4+x^2y+y^3", "x^2+y^2"])
def test_plane_assembler_without_g_is_plane_zeta(expr):
    f = xy(expr)
    assert plane_zeta_from_newton(f, None).factors == zeta_plane(f).factors


@pytest.mark.parametrize(
    "f_expr, g_expr",
    [("x^2+y^2", "x^3+y^3"), ("x^2+y^3", "x^3+y^2"), ("x^4+x^2y+y^3", "x^2+y^5")],
)
def test_product_zeta_matches_newton_number_of_product(f_expr, g_expr):
    f, g = xy(f_expr), xy(g_expr)
    assert zeta_plane_product(f, g).milnor == newton_number_2d(f * g)


def test_homog3_warns_on_singular_curve():
    data = homog3_data(z3("z1^2*z3-z2^3"), z3("z1+z2+z3"))
    assert "C_f is singular" in data.warnings


def test_homog3_warns_on_reducible_cubic():
    data = homog3_data(z3("z1*z2*z3"), z3("z1+2z2+3z3"))
    assert "C_f is singular" in data.warnings


def test_homog3_warns_on_tangent_line():
    # z1 = z3 meets the conic only at (1:0:1), with multiplicity two
    data = homog3_data(z3("z1^2+z2^2-z3^2"), z3("z1-z3"))
    assert data.warnings == ("C_f and C_g do not meet transversally",)


def test_homog3_smooth_transversal_pair_is_clean():
    data = homog3_data(z3("z1^3+z2^3+z3^3"), z3("z1-2z2"))
    assert data.warnings == ()
