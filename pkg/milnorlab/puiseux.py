"""
Newton-Puiseux branches of a plane curve germ k(x, y) = 0.

Every branch is a parametrisation x = t^e, y = sum c_i t^i, rooted at a root of
an edge polynomial of Γ(k). Multiple roots are resolved by substituting
y = x^{q/p}(α + y1) and recursing; simple roots are extended by Newton
iteration on power series. Coordinate-axis components are split off exactly.
"""
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb, log2, ceil
from typing import Dict, List, Optional, Tuple

from joblib import Parallel, delayed

from .errors import (
    BranchSeparationError,
    ConstantTermError,
    DimensionError,
    InputError,
    TruncationError,
)
from .newton import Face, WeightVector, plane_edges
from .polycore import (
    ComplexSeries,
    Number,
    Polynomial,
    complex_roots,
    compose_series,
    compose_terms,
    exact_root,
    format_number,
    is_exact,
    number_to_json,
    series_ratio,
    to_complex,
)

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 12
MAX_DEPTH = 16
SNAP_TOL = 1e-10
SNAP_DENOMINATOR = 10000
VERIFY_TOL = 1e-9

Terms = Dict[Tuple[int, int], Number]


@dataclass(frozen=True)
class PuiseuxBranch:
    """
    One branch of k = 0 through the origin.

    Axis branches (axis = "x=0" or "y=0") carry no face data. For the others
    x = t^e with e = p·r, and y_series starts at order q·r with coefficient α,
    where α^p = edge_root is a root of the edge polynomial of face P.
    """
    normal: Optional[WeightVector]
    edge_root: Optional[Number]
    alpha: Optional[Number]
    ramification: Optional[int]
    x_series: ComplexSeries
    y_series: ComplexSeries
    truncation: int
    root_multiplicity: int
    ramification_multiplier: Optional[int]
    component_multiplicity: int
    axis: Optional[str] = None
    verified_to: Optional[int] = None

    @property
    def coordinates(self) -> List[ComplexSeries]:
        return [self.x_series, self.y_series]

    @property
    def rooted_at(self) -> str:
        if self.axis is not None:
            return self.axis
        p, q = self.normal.components
        return f"(y^{p} - {format_number(self.edge_root)}*x^{q})^{self.root_multiplicity}"

    @property
    def is_exact(self) -> bool:
        return self.y_series.is_exact and self.x_series.is_exact

    def describe(self) -> str:
        if self.axis is not None:
            return self.axis
        return f"P={self.normal}, alpha={format_number(self.alpha)}"

    def to_json(self) -> dict:
        if self.axis == "x=0":
            x_text = "0"
        else:
            x_text = "t" if self.ramification == 1 else f"t^{self.ramification}"
        return {
            "x": x_text,
            "y": self.y_series.to_json(),
            "P": list(self.normal) if self.normal is not None else None,
            "alpha": number_to_json(self.alpha) if self.alpha is not None else None,
            "edge_root": number_to_json(self.edge_root) if self.edge_root is not None else None,
            "e": self.ramification,
            "r": self.ramification_multiplier,
            "root_multiplicity": self.root_multiplicity,
            "component_multiplicity": self.component_multiplicity,
            "rooted_at": self.rooted_at,
            "truncation": self.truncation,
            "verified_to": self.verified_to,
        }


# ====================================================================
# term-map helpers (coefficients may be complex below the top level)
# ====================================================================

def _clean(terms: Terms) -> Terms:
    scale = max((abs(c) for c in terms.values()), default=0)
    threshold = 1e-9 * max(1.0, float(scale))
    return {
        key: c for key, c in terms.items()
        if (c != 0 if is_exact(c) else abs(c) > threshold)
    }


def _edge_coefficients(terms: Terms, edge: Face) -> List[Number]:
    start = edge.lattice_points[0]
    end = edge.lattice_points[-1]
    p, q = edge.normal.components
    length = (start[0] - end[0]) // q
    return [terms.get((start[0] - i * q, start[1] + i * p), Fraction(0)) for i in range(length + 1)]


def _principal_root(value: Number, p: int) -> Number:
    if p == 1:
        return value
    if is_exact(value):
        exact = exact_root(Fraction(value), p)
        if exact is not None:
            return exact
    return to_complex(value) ** (1.0 / p)


def _substitute(terms: Terms, p: int, q: int, c: Number, degree: int) -> Terms:
    """K(t^p, t^q (c + w)) / t^degree as a term map in (t, w)."""
    out: Terms = {}
    for (i, j), coeff in terms.items():
        base = p * i + q * j - degree
        power = Fraction(1)
        binomial_terms = []
        for m in range(j, -1, -1):
            binomial_terms.append((m, comb(j, m) * power))
            power = power * c
        for m, factor in binomial_terms:
            key = (base, m)
            out[key] = out.get(key, Fraction(0)) + coeff * factor
    return _clean(out)


def _implicit_series(terms: Terms, need: int) -> ComplexSeries:
    """Power series w(t), w(0) = 0, with K(t, w(t)) = 0; requires K_w(0, 0) != 0."""
    derivative = {(i, j - 1): j * c for (i, j), c in terms.items() if j > 0}
    t = ComplexSeries.monomial(1, 1, need)
    w = ComplexSeries.zero(need)
    for _ in range(ceil(log2(max(need, 2))) + 2):
        residual = compose_terms(terms, [t, w], need, require_leading=False)
        if residual.is_zero:
            break
        slope = compose_terms(derivative, [t, w], need)
        w = (w - series_ratio(residual, slope, need)).truncate(need)
    return w


def _root_branches(
    terms: Terms, edge: Face, c: Number, multiplicity: int, need: int, depth: int
) -> List[Tuple[int, ComplexSeries, int]]:
    """(e, v, component multiplicity) with u = s^e, v = v(s) for one edge root."""
    p, q = edge.normal.components
    shifted = _substitute(terms, p, q, c, edge.degree)
    if multiplicity == 1:
        w = _implicit_series(shifted, need)
        return [(p, (w + c).shift(q), 1)]
    return [
        (p * e, (w + c).shift(q * e), mult)
        for e, w, mult in _expand(shifted, need, depth + 1)
    ]


def _expand(terms: Terms, need: int, depth: int) -> List[Tuple[int, ComplexSeries, int]]:
    if depth > MAX_DEPTH:
        raise BranchSeparationError("branches did not separate; the germ may have a repeated component", depth)
    found: List[Tuple[int, ComplexSeries, int]] = []
    lowest = min(j for _, j in terms)
    if lowest:
        # v divides K: the exact branch v = 0, counted `lowest` times
        found.append((1, ComplexSeries.zero(need), lowest))
        terms = {(i, j - lowest): c for (i, j), c in terms.items()}
    if (0, 0) in terms:
        return found
    for edge in plane_edges(terms):
        for root, multiplicity in complex_roots(_edge_coefficients(terms, edge)):
            c = _principal_root(root, edge.normal.p)
            logger.debug(f"depth {depth}: edge P={edge.normal}, root {format_number(root)} x{multiplicity}")
            found.extend(_root_branches(terms, edge, c, multiplicity, need, depth))
    return found


# ====================================================================
# snapping and verification
# ====================================================================

def _snap(series: ComplexSeries) -> ComplexSeries:
    coeffs = []
    for c in series.coefficients:
        if is_exact(c):
            coeffs.append(c)
            continue
        size = max(1.0, abs(c))
        if abs(c.imag) <= SNAP_TOL * size:
            candidate = Fraction(c.real).limit_denominator(SNAP_DENOMINATOR)
            if abs(float(candidate) - c.real) <= SNAP_TOL * size:
                coeffs.append(candidate)
                continue
        coeffs.append(c)
    return ComplexSeries.build(series.order, coeffs, series.truncation)


def _magnitude(series: ComplexSeries) -> ComplexSeries:
    return ComplexSeries(series.order, tuple(Fraction(abs(c)) if is_exact(c) else abs(c) for c in series.coefficients),
                         series.truncation)


def verify_branch(k: Polynomial, b: PuiseuxBranch) -> int:
    """
    Residual order ord_t k(x(t), y(t)); the branch passes iff it reaches b.truncation.

    Float coefficients count as zero when they are below VERIFY_TOL times the
    size of the terms that cancelled to produce them.
    """
    if b.truncation < 4:
        raise InputError(f"branch truncation {b.truncation} is below the minimum of 4")
    residual = compose_series(k, b.coordinates, b.truncation, require_leading=False)
    if residual.is_zero or residual.is_exact:
        return residual.order
    bound = compose_terms(
        {e: abs(c) for e, c in k.terms.items()},
        [_magnitude(s) for s in b.coordinates],
        b.truncation,
        require_leading=False,
    )
    for i in range(residual.order, min(b.truncation, residual.truncation)):
        size = float(abs(bound.coefficient(i))) if bound.order <= i < bound.truncation else 0.0
        if abs(residual.coefficient(i)) > VERIFY_TOL * max(1.0, size):
            return i
    return b.truncation


# ====================================================================
# public entry point
# ====================================================================

def _axis_branch(axis: str, multiplicity: int, N: int) -> PuiseuxBranch:
    truncation = N + 2
    t = ComplexSeries.monomial(1, 1, truncation)
    zero = ComplexSeries.zero(truncation)
    x, y = (zero, t) if axis == "x=0" else (t, zero)
    return PuiseuxBranch(
        normal=None,
        edge_root=None,
        alpha=None,
        ramification=None if axis == "x=0" else 1,
        x_series=x,
        y_series=y,
        truncation=truncation,
        root_multiplicity=multiplicity,
        ramification_multiplier=None,
        component_multiplicity=multiplicity,
        axis=axis,
        verified_to=truncation,
    )


def _finish(k: Polynomial, edge: Face, root: Number, alpha: Number, mu: int,
            e: int, y: ComplexSeries, mult: int, N: int) -> PuiseuxBranch:
    truncation = y.order + N + 1
    y = y.truncate(truncation)
    x = ComplexSeries.monomial(e, 1, truncation)
    draft = PuiseuxBranch(
        normal=edge.normal,
        edge_root=root,
        alpha=alpha,
        ramification=e,
        x_series=x,
        y_series=y,
        truncation=truncation,
        root_multiplicity=mu,
        ramification_multiplier=e // edge.normal.p,
        component_multiplicity=mult,
    )
    if not y.is_exact:
        snapped = replace(draft, y_series=_snap(y))
        if snapped.y_series != y and verify_branch(k, snapped) >= truncation:
            draft = snapped
        elif snapped.y_series != y:
            logger.warning(f"rational snap of branch {draft.describe()} rejected by re-verification")
    residual = verify_branch(k, draft)
    if residual < truncation:
        raise TruncationError(
            f"branch {draft.describe()} verified only to order {residual} < {truncation}"
        )
    return replace(draft, verified_to=residual)


def branches(k: Polynomial, N: int = DEFAULT_ORDER, n_jobs: int = 1) -> List[PuiseuxBranch]:
    """
    All branches of k = 0 at the origin, each verified by substitution.

    Parameters:
    -----------
    k : Polynomial
        Two-variable germ with k(0) = 0
    N : int
        Series orders beyond the leading term (>= 4)
    n_jobs : int
        Thread parallelism over the (edge, root) worklist

    Returns:
    --------
    list of PuiseuxBranch
        Axis branches first (x=0 then y=0), then by edge (increasing p/q)
        and root order.
    """
    if k.nvars != 2:
        raise DimensionError(f"Puiseux branches need exactly 2 variables, got {k.nvars}")
    if k.is_zero:
        raise InputError("the zero polynomial has no branches")
    if k.constant_term != 0:
        raise ConstantTermError(f"{k} does not vanish at the origin")
    if N < 4:
        raise InputError(f"truncation order must be at least 4, got {N}")

    a = min(e[0] for e in k.terms)
    b = min(e[1] for e in k.terms)
    found: List[PuiseuxBranch] = []
    if a:
        found.append(_axis_branch("x=0", a, N))
    if b:
        found.append(_axis_branch("y=0", b, N))
    core = k.divide_monomial((a, b))
    if core.constant_term != 0:
        logger.info(f"{k}: only axis branches")
        return found

    terms: Terms = dict(core.terms)
    worklist = []
    for edge in plane_edges(terms):
        for root, mu in complex_roots(_edge_coefficients(terms, edge)):
            worklist.append((edge, root, _principal_root(root, edge.normal.p), mu))

    expansions = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_root_branches)(terms, edge, alpha, mu, N + 1, 0)
        for edge, _, alpha, mu in worklist
    )
    for (edge, root, alpha, mu), raws in zip(worklist, expansions):
        for e, y, mult in raws:
            found.append(_finish(k, edge, root, alpha, mu, e, y, mult, N))
    logger.info(f"{k}: {len(found)} branches")
    return found
