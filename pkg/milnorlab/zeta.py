"""
Monodromy zeta functions in factored form.

Plane-curve formulas for ζ_f, ζ_h (h = fg) and ζ_H (H = f·ḡ) read off the
Newton polygons, the Milnor number from the zeta degree, and the blow-up
computation for a homogeneous pair in three variables.

Sign convention: corner factors carry exponent +1 and edge factors carry
exponent -ℓ, so that μ = 1 - deg ζ holds.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import sympy

from .config import ZETA_CONVENTION
from .errors import (
    DegenerateFaceError,
    DimensionError,
    EqualDegreeError,
    HomogeneityError,
    InputError,
    MultiplicityConditionError,
    NonConvenientError,
    PairDegeneracyError,
    PreconditionError,
)
from .newton import (
    NewtonData,
    WeightVector,
    face_function,
    multiplicity_condition,
    newton_boundary,
    nondegeneracy_2d,
    pair_nondegeneracy_2d,
    weighted_degree,
)
from .polycore import Polynomial, differentiate, polynomial_gcd, to_sympy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZetaFactored:
    """∏ (1 - t^d)^e, normalised: equal d merged, zero exponents dropped, sorted by d."""
    factors: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_factors(cls, pairs: Iterable[Tuple[int, int]]) -> "ZetaFactored":
        merged: Dict[int, int] = {}
        for d, e in pairs:
            if e == 0:
                continue
            if d < 1:
                raise InputError(f"zeta factor (1 - t^{d}) needs d >= 1")
            merged[d] = merged.get(d, 0) + e
        return cls(tuple((d, e) for d, e in sorted(merged.items()) if e != 0))

    @property
    def degree(self) -> int:
        return sum(d * e for d, e in self.factors)

    @property
    def milnor(self) -> int:
        return milnor_from_zeta(self)

    def __str__(self):
        if not self.factors:
            return "1"
        return "".join(f"(1-t^{d})" if e == 1 else f"(1-t^{d})^{e}" for d, e in self.factors)

    def to_json(self) -> dict:
        return {
            "factors": [{"d": d, "e": e} for d, e in self.factors],
            "degree": self.degree,
            "milnor": self.milnor,
            "convention": ZETA_CONVENTION,
        }


def milnor_from_zeta(z: ZetaFactored) -> int:
    """μ = 1 - deg ζ."""
    return 1 - z.degree


# ====================================================================
# plane curves
# ====================================================================

def _require_plane(p: Polynomial):
    if p.nvars != 2:
        raise DimensionError(f"plane zeta formulas need exactly 2 variables, got {p.nvars}")


def _checked_data(p: Polynomial, name: str) -> NewtonData:
    _require_plane(p)
    data = newton_boundary(p)
    if not data.convenient:
        raise NonConvenientError(f"{name} = {p} is not convenient")
    check = nondegeneracy_2d(p)
    if not check:
        raise DegenerateFaceError(f"{name} is degenerate: {check.detail}", check.face)
    return data


def _distinct_roots(p: Polynomial, data: NewtonData, normal: WeightVector) -> int:
    if data.face_for(normal) is None:
        return 0
    return face_function(p, normal).distinct_roots()


def plane_zeta_from_newton(
    f: Polynomial,
    g: Optional[Polynomial] = None,
    mode: str = "product",
    orientation: int = 1,
) -> ZetaFactored:
    """
    Shared assembler of the plane displays.

    mode "product" adds the data of g (ζ_h), mode "mixed" subtracts it (ζ_H),
    multiplied by `orientation` (+1 when f lies above g, -1 for the mirrored
    display). g = None stands for the empty germ: zero intercepts, no faces.
    """
    if mode not in ("product", "mixed"):
        raise InputError(f"unknown zeta mode '{mode}'")
    sign = 1 if mode == "product" else -1
    data_f = newton_boundary(f)
    a_x, a_y = data_f.intercepts
    normals = {edge.normal for edge in data_f.edges}
    if g is None:
        data_g, (b_x, b_y) = None, (0, 0)
    else:
        data_g = newton_boundary(g)
        b_x, b_y = data_g.intercepts
        normals |= {edge.normal for edge in data_g.edges}

    factors = [
        (orientation * (a_x + sign * b_x), 1),
        (orientation * (a_y + sign * b_y), 1),
    ]
    for normal in sorted(normals, key=lambda P: P.p / P.q):
        ell = _distinct_roots(f, data_f, normal)
        m = 0 if g is None else _distinct_roots(g, data_g, normal)
        d = weighted_degree(normal, f) + (0 if g is None else sign * weighted_degree(normal, g))
        factors.append((orientation * d, -(ell + m)))
        logger.debug(f"face P={normal}: d={orientation * d}, l={ell}, m={m}")
    return ZetaFactored.from_factors(factors)


def zeta_plane(f: Polynomial) -> ZetaFactored:
    """
    Monodromy zeta function of a convenient non-degenerate plane germ.

    Parameters:
    -----------
    f : Polynomial
        Two-variable germ

    Returns:
    --------
    ZetaFactored
        (a_x, +1), (a_y, +1) and (d(R;f), -ℓ) per edge R
    """
    _checked_data(f, "f")
    return plane_zeta_from_newton(f)


def _check_pair(f: Polynomial, g: Polynomial):
    if f.variables != g.variables:
        raise InputError(f"variable lists differ: {list(f.variables)} vs {list(g.variables)}")
    _checked_data(f, "f")
    _checked_data(g, "g")
    check = pair_nondegeneracy_2d(f, g)
    if not check:
        raise PairDegeneracyError(f"pair (f, g) is degenerate: {check.detail}", check.face)


def zeta_plane_product(f: Polynomial, g: Polynomial) -> ZetaFactored:
    """ζ_h for h = fg over the union of edge normals of Γ(f) and Γ(g)."""
    _check_pair(f, g)
    return plane_zeta_from_newton(f, g, mode="product")


def zeta_mixed_plane(f: Polynomial, g: Polynomial) -> ZetaFactored:
    """
    ζ_H for H = f·ḡ under the Newton multiplicity condition.

    The display is taken with f - g when Γ(f) lies above Γ(g) and mirrored
    otherwise; every corner and edge exponent difference is then positive.
    """
    _check_pair(f, g)
    verdict = multiplicity_condition(f, g)
    if not verdict.satisfied:
        raise MultiplicityConditionError(verdict.witness)
    orientation = 1 if verdict.direction == "f_above" else -1
    (a_x, a_y), (b_x, b_y) = newton_boundary(f).intercepts, newton_boundary(g).intercepts
    corners = (orientation * (a_x - b_x), orientation * (a_y - b_y))
    if min(corners) <= 0:
        raise PreconditionError(
            f"corner differences {corners} are not positive under the containment {verdict.direction}"
        )
    return plane_zeta_from_newton(f, g, mode="mixed", orientation=orientation)


# ====================================================================
# homogeneous pairs in three variables
# ====================================================================

@dataclass(frozen=True)
class Homog3Data:
    """Euler-characteristic bookkeeping of the blow-up at the origin."""
    d_f: int
    d_g: int
    chi_f: int
    chi_g: int
    intersections: int
    chi_exceptional: int
    zeta: ZetaFactored
    warnings: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "d_f": self.d_f,
            "d_g": self.d_g,
            "chi_C_f": self.chi_f,
            "chi_C_g": self.chi_g,
            "intersections": self.intersections,
            "chi_E_prime": self.chi_exceptional,
            "zeta": self.zeta.to_json(),
            "warnings": list(self.warnings),
        }


def _euler_smooth_plane_curve(d: int) -> int:
    # degree-genus: 2 - (d-1)(d-2)
    return 2 - (d - 1) * (d - 2)


def _no_projective_zero(polys: List[Polynomial]) -> bool:
    """
    True when homogeneous polynomials in three variables share no zero in P^2.

    The common zero set is the origin alone exactly when every variable has a
    pure power among the leading monomials of a Groebner basis.
    """
    nonzero = [to_sympy(p) for p in polys if not p.is_zero]
    if not nonzero:
        return False
    gens = nonzero[0].gens
    basis = sympy.groebner([q.as_expr() for q in nonzero], *gens, order="grevlex")
    leading = [poly.monoms(order="grevlex")[0] for poly in basis.polys]
    if any(sum(m) == 0 for m in leading):
        return True
    return all(any(m[i] > 0 and sum(m) == m[i] for m in leading) for i in range(len(gens)))


def curve_check(f: Polynomial, g: Polynomial) -> List[str]:
    """
    Exact check of the smooth / transversal precondition on C_f and C_g.

    Looks for a common component (gcd), a singular point of either curve
    (common zero of its partials) and a non-transversal intersection (common
    zero of f, g and the 2x2 minors of their Jacobian matrix). Problems are
    returned (and logged) as warnings, never raised.
    """
    warnings: List[str] = []
    if polynomial_gcd(f, g).degree > 0:
        warnings.append("f and g share a common factor; C_f and C_g have a common component")
    gradients = {}
    for name, p in (("f", f), ("g", g)):
        gradients[name] = [differentiate(p, v) for v in p.variables]
        if not _no_projective_zero(gradients[name]):
            warnings.append(f"C_{name} is singular")
    df, dg = gradients["f"], gradients["g"]
    minors = [df[i] * dg[j] - df[j] * dg[i] for i in range(3) for j in range(i + 1, 3)]
    if not _no_projective_zero([f, g] + minors):
        warnings.append("C_f and C_g do not meet transversally")
    for message in warnings:
        logger.warning(message)
    return warnings


def homog3_data(f: Polynomial, g: Polynomial) -> Homog3Data:
    if f.nvars != 3 or g.nvars != 3:
        raise DimensionError("the homogeneous blow-up formula needs exactly 3 variables")
    if f.variables != g.variables:
        raise InputError(f"variable lists differ: {list(f.variables)} vs {list(g.variables)}")
    for name, p in (("f", f), ("g", g)):
        if p.is_zero or not p.is_homogeneous() or p.degree < 1:
            raise HomogeneityError(f"{name} = {p} is not a homogeneous polynomial of positive degree")
    d_f, d_g = f.degree, g.degree
    if d_f == d_g:
        raise EqualDegreeError(f"f and g both have degree {d_f}; the polar degree vanishes")

    chi_f, chi_g = _euler_smooth_plane_curve(d_f), _euler_smooth_plane_curve(d_g)
    intersections = d_f * d_g
    chi_exceptional = 3 - (chi_f + chi_g - intersections)
    zeta = ZetaFactored.from_factors([(abs(d_f - d_g), -chi_exceptional)])
    warnings = curve_check(f, g)
    return Homog3Data(d_f, d_g, chi_f, chi_g, intersections, chi_exceptional, zeta, tuple(warnings))


def zeta_mixed_homog3(f: Polynomial, g: Polynomial) -> ZetaFactored:
    """ζ_H = (1 - t^{|d_f - d_g|})^{-χ(E')} for homogeneous f, g in three variables."""
    return homog3_data(f, g).zeta
