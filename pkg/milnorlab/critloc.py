"""
Critical curves of the mixed function H = f·ḡ.

The Jacobian curve J(f, g) contains the critical locus of H off V(H). Each
Puiseux branch of J through the origin is tested with the ratio

    σ(t) = f_{z_j}(γ(t)) g(γ(t)) / (g_{z_j}(γ(t)) f(γ(t))),

whose limit modulus decides whether the branch carries a non-constant critical
curve. A numeric circle sampler corroborates the 2k-ray count.
"""
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import brentq

from .errors import (
    CommonFactorError,
    ComputationError,
    DimensionError,
    InconsistencyError,
    InputError,
    PreconditionError,
    RadiusError,
    SelectionError,
    TruncationError,
    VariableMismatchError,
)
from .newton import (
    MultiplicityVerdict,
    WeightVector,
    face_function,
    is_weighted_homogeneous,
    multiplicity_condition,
    newton_boundary,
    weighted_degree,
)
from .polycore import (
    ComplexSeries,
    Number,
    Polynomial,
    compose_series,
    differentiate,
    evaluate_many,
    format_factored,
    is_exact,
    number_to_json,
    polynomial_gcd,
    series_ratio,
    to_complex,
)
from .puiseux import DEFAULT_ORDER, PuiseuxBranch, branches

logger = logging.getLogger(__name__)

FIRST_TYPE = "first_type"
HIDDEN = "hidden"

CONSTANT_MODULUS = "critical_curve_constant_modulus"
TWO_K_RAYS = "critical_curve_2k_rays"
NO_CRITICAL_CURVE = "no_critical_curve"
UNDECIDED = "undecided"
CRITICAL_VERDICTS = (CONSTANT_MODULUS, TWO_K_RAYS)

NO_OBSTRUCTION_CAVEAT = (
    "no Jacobian branch carries a non-constant critical curve; the conclusion uses "
    "the inclusion C(H) ⊂ J(f,g) branch by branch and is not a full converse"
)


# ====================================================================
# Jacobian and faces
# ====================================================================

def _require_plane_pair(f: Polynomial, g: Polynomial):
    if f.variables != g.variables:
        raise VariableMismatchError(f"variable lists differ: {list(f.variables)} vs {list(g.variables)}")
    if f.nvars != 2:
        raise DimensionError(f"the Jacobian curve needs exactly 2 variables, got {f.nvars}")


def jacobian(f: Polynomial, g: Polynomial) -> Polynomial:
    """J = f_x g_y - f_y g_x, exact."""
    _require_plane_pair(f, g)
    x, y = f.variables
    return differentiate(f, x) * differentiate(g, y) - differentiate(f, y) * differentiate(g, x)


@dataclass(frozen=True)
class FaceClass:
    """
    An edge of Γ(J) labelled first_type or hidden.

    expected is d(P;f) + d(P;g) - (p + q), the degree J(f_P, g_P) has when it
    does not vanish.
    """
    normal: WeightVector
    kind: str
    d_J: int
    d_f: int
    d_g: int
    expected: int

    def to_json(self) -> dict:
        return {
            "P": list(self.normal),
            "kind": self.kind,
            "d_J": self.d_J,
            "d_f": self.d_f,
            "d_g": self.d_g,
            "expected": self.expected,
        }


def classify_faces(J: Polynomial, f: Polynomial, g: Polynomial) -> List[FaceClass]:
    """
    Label every edge of Γ(J) by two independent tests that must agree.

    Identity test: J_P == J(f_P, g_P) (first type) or J(f_P, g_P) == 0 (hidden).
    Degree test: d(P;J) == d(P;f) + d(P;g) - (p + q) (first type) or > (hidden).
    """
    if J.is_zero:
        raise InputError("the Jacobian vanishes identically; Γ(J) is undefined")
    _require_plane_pair(f, g)
    result = []
    for edge in newton_boundary(J).edges:
        P = edge.normal
        f_P = face_function(f, P).polynomial
        g_P = face_function(g, P).polynomial
        J_P = face_function(J, P).polynomial
        face_jacobian = jacobian(f_P, g_P)
        d_J, d_f, d_g = edge.degree, weighted_degree(P, f), weighted_degree(P, g)
        expected = d_f + d_g - (P.p + P.q)

        if face_jacobian == J_P:
            by_identity = FIRST_TYPE
        elif face_jacobian.is_zero:
            by_identity = HIDDEN
        else:
            by_identity = None
        by_degree = FIRST_TYPE if d_J == expected else (HIDDEN if d_J > expected else None)
        if by_identity is None or by_identity != by_degree:
            raise InconsistencyError(
                f"face P={P}: identity test gives {by_identity}, degree test gives {by_degree} "
                f"(d(P;J)={d_J}, expected {expected})"
            )
        logger.debug(f"face P={P} of Γ(J) is {by_identity}")
        result.append(FaceClass(P, by_identity, d_J, d_f, d_g, expected))
    return result


# ====================================================================
# the σ test on one branch
# ====================================================================

def _along(p: Polynomial, b: PuiseuxBranch) -> ComplexSeries:
    if p.is_zero:
        return ComplexSeries.zero(b.truncation)
    return compose_series(p, b.coordinates, b.truncation, require_leading=False)


def _select_index(g: Polynomial, b: PuiseuxBranch) -> str:
    """First variable z_j with g_{z_j} not vanishing along the branch."""
    for var in g.variables:
        if not _along(differentiate(g, var), b).is_zero:
            return var
    raise SelectionError(
        f"both partials of g vanish along branch {b.describe()} to truncation {b.truncation}"
    )


def sigma_series(f: Polynomial, g: Polynomial, b: PuiseuxBranch, var: str) -> ComplexSeries:
    """σ(t) = f_var·g / (g_var·f) along the branch, to its reliable truncation."""
    numerator = _along(differentiate(f, var), b) * _along(g, b)
    denominator = _along(differentiate(g, var), b) * _along(f, b)
    if denominator.is_zero:
        raise TruncationError(
            f"g_{var}·f vanishes along branch {b.describe()} to truncation {denominator.truncation}"
        )
    return series_ratio(numerator, denominator)


def _face_value(p: Polynomial, P: WeightVector, alpha: Number) -> Number:
    # f_P(1, α); exact when α is rational
    total = Fraction(0) if is_exact(alpha) else 0j
    for (_, j), c in face_function(p, P).polynomial.terms.items():
        total = total + c * alpha ** j
    return total


def _vanishes(value: Number, p: Polynomial, alpha: Number) -> bool:
    if is_exact(value):
        return value == 0
    scale = sum(float(abs(c)) * abs(alpha) ** e[1] for e, c in p.terms.items())
    return abs(value) <= 1e-9 * max(1.0, scale)


def _is_unit(value: Number, tol: float) -> bool:
    if is_exact(value):
        return value in (1, -1)
    return abs(abs(value) - 1.0) <= tol


@dataclass(frozen=True)
class BranchReport:
    branch: PuiseuxBranch
    in_VH: bool
    verdict: str
    reason: str
    instrument: str
    non_tangential: Optional[bool] = None
    face_kind: Optional[str] = None
    df: Optional[int] = None
    dg: Optional[int] = None
    sigma_index: Optional[str] = None
    sigma_order: Optional[int] = None
    sigma_leading: Optional[Number] = None
    sigma_leading_modulus: Optional[float] = None
    modulus_margin: Optional[float] = None
    k: Optional[int] = None
    circle: Optional["CircleSample"] = None

    @property
    def rays(self) -> Optional[int]:
        return 2 * self.k if self.verdict == TWO_K_RAYS else None

    @property
    def is_critical(self) -> bool:
        return self.verdict in CRITICAL_VERDICTS

    def to_json(self) -> dict:
        return {
            "branch": self.branch.to_json(),
            "in_VH": self.in_VH,
            "non_tangential": self.non_tangential,
            "face_kind": self.face_kind,
            "df": self.df,
            "dg": self.dg,
            "sigma_index": self.sigma_index,
            "sigma_order": self.sigma_order,
            "sigma_leading": number_to_json(self.sigma_leading) if self.sigma_leading is not None else None,
            "sigma_leading_modulus": self.sigma_leading_modulus,
            "modulus_margin": self.modulus_margin,
            "k": self.k,
            "rays": self.rays,
            "verdict": self.verdict,
            "reason": self.reason,
            "instrument": self.instrument,
            "circle": self.circle.to_json() if self.circle is not None else None,
        }


def branch_report(
    f: Polynomial,
    g: Polynomial,
    b: PuiseuxBranch,
    tol: float = 1e-9,
    faces: Optional[Sequence[FaceClass]] = None,
) -> BranchReport:
    """
    Decide whether a Jacobian branch carries a non-constant critical curve of H.

    Parameters:
    -----------
    f, g : Polynomial
        Plane germs defining H = f·ḡ
    b : PuiseuxBranch
        A verified branch of J(f, g)
    tol : float
        Unit-modulus tolerance for a floating σ(0)
    faces : list of FaceClass, optional
        classify_faces(J, f, g), computed when omitted

    Returns:
    --------
    BranchReport
        Verdict from the limit of σ; on a non-tangential branch of a
        first-type face it is cross-checked against d(P;f) = d(P;g).
    """
    _require_plane_pair(f, g)
    if _along(f, b).is_zero or _along(g, b).is_zero:
        return BranchReport(b, True, NO_CRITICAL_CURVE, "branch lies in V(H)", "in_V(H)")

    P = b.normal
    non_tangential = face_kind = df = dg = None
    if P is not None:
        df, dg = weighted_degree(P, f), weighted_degree(P, g)
        non_tangential = not (_vanishes(_face_value(f, P, b.alpha), f, b.alpha)
                              or _vanishes(_face_value(g, P, b.alpha), g, b.alpha))
        if faces is None:
            faces = classify_faces(jacobian(f, g), f, g)
        face_kind = next((face.kind for face in faces if face.normal == P), None)
    context = dict(non_tangential=non_tangential, face_kind=face_kind, df=df, dg=dg)

    var = _select_index(g, b)
    sigma = sigma_series(f, g, b, var)
    context["sigma_index"] = var
    if sigma.truncation <= 1:
        raise TruncationError(f"truncation {b.truncation} too small to determine σ beyond its constant term")
    if sigma.is_zero:
        return BranchReport(b, False, NO_CRITICAL_CURVE, "σ vanishes to truncation, limit 0",
                            "sigma-limit", sigma_order=sigma.truncation, **context)
    if sigma.order != 0:
        limit = "0" if sigma.order > 0 else "∞"
        return BranchReport(b, False, NO_CRITICAL_CURVE, f"σ has order {sigma.order}, limit {limit}",
                            "sigma-limit", sigma_order=sigma.order, **context)

    leading = sigma.leading
    modulus = abs(to_complex(leading))
    context.update(sigma_order=0, sigma_leading=leading, sigma_leading_modulus=modulus,
                   modulus_margin=abs(modulus - 1.0))
    cross_check = bool(non_tangential) and face_kind == FIRST_TYPE
    instrument = "sigma-limit+degree-test" if cross_check else "sigma-limit"

    if not _is_unit(leading, tol):
        report = BranchReport(b, False, NO_CRITICAL_CURVE, f"|σ(0)| = {modulus:.12g} ≠ 1",
                              instrument, **context)
    else:
        k = next((i for i in range(1, sigma.truncation) if not sigma.negligible(i)), None)
        if k is not None:
            report = BranchReport(b, False, TWO_K_RAYS,
                                  f"|σ(0)| = 1 and σ - σ(0) has order {k}: {2 * k} critical rays",
                                  instrument, k=k, **context)
        elif sigma.is_exact:
            report = BranchReport(b, False, CONSTANT_MODULUS, "σ is constant of unit modulus",
                                  instrument, **context)
        elif P is not None and df == dg and is_weighted_homogeneous(f, P) and is_weighted_homogeneous(g, P):
            report = BranchReport(b, False, CONSTANT_MODULUS,
                                  f"f and g are weighted homogeneous of equal degree {df} for P={P}",
                                  instrument, **context)
        else:
            return BranchReport(b, False, UNDECIDED,
                                f"σ is constant to truncation {sigma.truncation} only within floating error",
                                "sigma-limit", **context)

    if cross_check and report.is_critical != (df == dg):
        raise InconsistencyError(
            f"branch {b.describe()}: σ verdict {report.verdict} contradicts d(P;f)={df}, d(P;g)={dg}"
        )
    return report


# ====================================================================
# 2k crossings
# ====================================================================

def count_unit_circle_crossings(rho: ComplexSeries, r: float, tol: float = 1e-9) -> int:
    """
    Number of angles where |ρ(r e^{iθ})| = 1, read off the series.

    Requires |ρ(0)| = 1, ρ non-constant, and a radius small enough that
    |a_k| r^k is at least four times the remaining known tail.
    """
    if rho.is_zero or rho.order != 0 or not _is_unit(rho.leading, tol):
        raise PreconditionError("ρ(0) must have unit modulus")
    k = next((i for i in range(1, rho.truncation) if not rho.negligible(i)), None)
    if k is None:
        raise PreconditionError("ρ is constant to its truncation; the crossing count is undefined")
    head = abs(to_complex(rho.coefficient(k))) * r ** k
    tail = sum(abs(to_complex(rho.coefficient(i))) * r ** i for i in range(k + 1, rho.truncation))
    if head < 4 * tail:
        raise RadiusError(f"radius {r:g} too large: |a_{k}| r^{k} = {head:.3e} vs tail {tail:.3e}")
    return 2 * k


@dataclass(frozen=True)
class CrossingPoint:
    theta: float
    x: complex
    y: complex
    residual: float

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "x": number_to_json(self.x),
            "y": number_to_json(self.y),
            "residual": self.residual,
        }


@dataclass(frozen=True)
class CircleSample:
    radius: float
    samples: int
    constant_modulus: bool
    crossings: int
    points: Tuple[CrossingPoint, ...] = ()
    series_count: Optional[int] = None
    note: str = ""

    @property
    def max_residual(self) -> float:
        return max((p.residual for p in self.points), default=0.0)

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "samples": self.samples,
            "constant_modulus": self.constant_modulus,
            "crossings": self.crossings,
            "series_count": self.series_count,
            "max_residual": self.max_residual,
            "points": [p.to_json() for p in self.points],
            "note": self.note,
        }


def sample_circle(
    f: Polynomial,
    g: Polynomial,
    b: PuiseuxBranch,
    r: float = 1e-3,
    samples: int = 4096,
    tol: float = 1e-9,
) -> CircleSample:
    """
    Count the angles on |t| = r where |σ| = 1, by direct evaluation.

    Each sign change of |σ| - 1 is refined with brentq; at the refined point
    the residual min_{|a|=1} ‖conj(∂H) - a·∂̄H‖ / ‖∂H‖ is reported, which
    vanishes exactly at critical points of H.
    """
    _require_plane_pair(f, g)
    if samples < 256:
        raise InputError(f"at least 256 samples are required, got {samples}")
    var = _select_index(g, b)
    f_j, g_j = differentiate(f, var), differentiate(g, var)
    gradients = [(differentiate(f, v), differentiate(g, v)) for v in f.variables]

    def points_at(theta):
        t = r * np.exp(1j * np.asarray(theta, dtype=float))
        return np.vstack([b.x_series.evaluate(t), b.y_series.evaluate(t)])

    def gap(theta):
        z = points_at(theta)
        sigma = evaluate_many(f_j, z) * evaluate_many(g, z) / (evaluate_many(g_j, z) * evaluate_many(f, z))
        return np.abs(sigma) - 1.0

    grid = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    values = gap(grid)
    if np.max(np.abs(values)) <= tol:
        return CircleSample(r, samples, True, 0, note="|σ| = 1 on the whole circle")

    positive = values > 0
    changes = np.nonzero(positive != np.roll(positive, -1))[0]
    points = []
    for i in changes:
        lo = grid[i]
        hi = grid[i + 1] if i + 1 < samples else 2 * np.pi
        theta = brentq(lambda s: float(gap([s])[0]), lo, hi, xtol=1e-15)
        z = points_at([theta])
        fv, gv = evaluate_many(f, z)[0], evaluate_many(g, z)[0]
        a = np.array([np.conj(evaluate_many(fx, z)[0]) * gv for fx, _ in gradients])
        b_vec = np.array([fv * np.conj(evaluate_many(gx, z)[0]) for _, gx in gradients])
        norm_a = float(np.linalg.norm(a))
        squared = norm_a ** 2 + float(np.linalg.norm(b_vec)) ** 2 - 2 * abs(np.vdot(b_vec, a))
        residual = float(np.sqrt(max(0.0, squared))) / norm_a if norm_a else float("inf")
        points.append(CrossingPoint(float(theta), complex(z[0, 0]), complex(z[1, 0]), residual))
    logger.debug(f"circle r={r:g} on branch {b.describe()}: {len(points)} crossings")
    return CircleSample(r, samples, False, len(points), tuple(points))


def _corroborate(f: Polynomial, g: Polynomial, report: BranchReport, radius: float,
                 samples: int, tol: float) -> BranchReport:
    try:
        sample = sample_circle(f, g, report.branch, radius, samples, tol)
        sigma = sigma_series(f, g, report.branch, report.sigma_index)
        series_count = count_unit_circle_crossings(sigma, radius, tol)
        note = "" if series_count == sample.crossings else "sampled count differs from the series count"
    except ComputationError as exc:
        logger.warning(f"circle sampling skipped on branch {report.branch.describe()}: {exc}")
        return replace(report, circle=CircleSample(radius, samples, False, 0, note=str(exc)))
    sample = CircleSample(sample.radius, sample.samples, sample.constant_modulus, sample.crossings,
                          sample.points, series_count, note)
    return replace(report, circle=sample)


# ====================================================================
# overall verdict
# ====================================================================

@dataclass(frozen=True)
class FibrationReport:
    multiplicity: MultiplicityVerdict
    verdict: str
    instrument: str
    message: str
    jacobian: Optional[Polynomial] = None
    faces: Tuple[FaceClass, ...] = ()
    branches: Tuple[BranchReport, ...] = ()
    caveat: Optional[str] = None

    @property
    def inconclusive(self) -> bool:
        return self.verdict == "inconclusive"

    def to_json(self) -> dict:
        doc = {
            "multiplicity_condition": self.multiplicity.to_json(),
            "verdict": self.verdict,
            "instrument": self.instrument,
            "message": self.message,
            "jacobian": None,
            "faces": [face.to_json() for face in self.faces],
            "branches": [report.to_json() for report in self.branches],
            "caveat": self.caveat,
        }
        if self.jacobian is not None:
            doc["jacobian"] = {"expanded": str(self.jacobian), "factored": format_factored(self.jacobian)}
        return doc


def _safe_report(f, g, b, tol, faces) -> BranchReport:
    try:
        return branch_report(f, g, b, tol, faces)
    except ComputationError as exc:
        logger.info(f"branch {b.describe()} undecided: {exc}")
        return BranchReport(b, False, UNDECIDED, str(exc), "sigma-limit")


def fibration_verdict(
    f: Polynomial,
    g: Polynomial,
    order: int = DEFAULT_ORDER,
    tol: float = 1e-9,
    radius: float = 1e-3,
    samples: int = 4096,
    n_jobs: int = 1,
) -> FibrationReport:
    """
    Decide whether H = f·ḡ is obstructed from a tubular Milnor fibration.

    Returns:
    --------
    FibrationReport
        verdict is one of guaranteed (multiplicity condition holds),
        obstructed (a branch carries a critical curve), no-obstruction-found,
        or inconclusive (some branch is undecided and none is critical).
    """
    _require_plane_pair(f, g)
    if polynomial_gcd(f, g).degree > 0:
        raise CommonFactorError(f"f and g share the factor {polynomial_gcd(f, g)}")
    verdict = multiplicity_condition(f, g)
    if verdict.satisfied:
        logger.info(f"multiplicity condition holds ({verdict.direction})")
        return FibrationReport(verdict, "guaranteed", "multiplicity-condition",
                               "Milnor fibration guaranteed by the Newton multiplicity condition")

    J = jacobian(f, g)
    if J.is_zero:
        raise PreconditionError("the Jacobian of (f, g) vanishes identically")
    if J.constant_term != 0:
        return FibrationReport(verdict, "no-obstruction-found", "jacobian-branches",
                               "J(f,g) does not pass through the origin", J, caveat=NO_OBSTRUCTION_CAVEAT)

    faces = tuple(classify_faces(J, f, g))
    found = branches(J, order, n_jobs=n_jobs)
    reports = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_safe_report)(f, g, b, tol, faces) for b in found
    )
    reports = [
        _corroborate(f, g, report, radius, samples, tol) if report.verdict == TWO_K_RAYS else report
        for report in reports
    ]

    critical = [r for r in reports if r.is_critical]
    undecided = [r for r in reports if r.verdict == UNDECIDED]
    if critical:
        first = critical[0]
        result = ("obstructed", "jacobian-branches",
                  f"non-constant critical curve found on branch {first.branch.describe()} ({first.verdict})", None)
    elif undecided:
        result = ("inconclusive", "jacobian-branches",
                  f"{len(undecided)} Jacobian branch(es) undecided: {undecided[0].reason}", None)
    else:
        result = ("no-obstruction-found", "jacobian-branches",
                  "no obstruction found among Jacobian branches", NO_OBSTRUCTION_CAVEAT)
    label, instrument, message, caveat = result
    logger.info(f"fibration verdict: {label}")
    return FibrationReport(verdict, label, instrument, message, J, faces, tuple(reports), caveat)
