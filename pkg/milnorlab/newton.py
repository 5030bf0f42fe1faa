"""
Newton boundaries.

Construction of Γ(f) (exact, over the integers), weighted degrees d(P;f), face
functions and edge polynomials, convenience / non-degeneracy checks, the Newton
number, and the Newton multiplicity condition with a witness weight vector.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import sympy

from .errors import (
    ConstantTermError,
    DimensionError,
    InconsistencyError,
    InputError,
    NonConvenientError,
    SupportTooLargeError,
)
from .polycore import Exponent, Polynomial, squarefree_part, univariate_gcd

logger = logging.getLogger(__name__)

MAX_HULL_POINTS = 64


@dataclass(frozen=True, order=True)
class WeightVector:
    """Strictly positive primitive integer weight vector P."""
    components: Tuple[int, ...]

    def __post_init__(self):
        if not self.components or any(c <= 0 for c in self.components):
            raise InputError(f"weight vector must be strictly positive, got {self.components}")
        if reduce(gcd, self.components) != 1:
            raise InputError(f"weight vector must be primitive, got {self.components}")

    @classmethod
    def primitive(cls, values: Sequence) -> "WeightVector":
        return cls(_primitive_integer(values))

    @property
    def p(self) -> int:
        return self.components[0]

    @property
    def q(self) -> int:
        return self.components[1]

    def pairing(self, exponent: Exponent) -> int:
        return sum(a * b for a, b in zip(self.components, exponent))

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class Face:
    normal: WeightVector
    degree: int
    lattice_points: Tuple[Exponent, ...]
    dimension: int

    def to_json(self) -> dict:
        return {
            "P": list(self.normal),
            "d": self.degree,
            "dim": self.dimension,
            "points": [list(v) for v in self.lattice_points],
        }


@dataclass(frozen=True)
class NewtonData:
    """
    Newton boundary Γ(p) of a germ.

    For n = 2 the faces are the edges, ordered by increasing p/q (starting at
    the x-axis end) and the vertices run from the x-axis side to the y-axis
    side. For n >= 3 the faces are every compact face of every dimension.
    An intercept of None means the boundary never meets that axis.
    """
    nvars: int
    support: FrozenSet[Exponent]
    boundary_vertices: Tuple[Exponent, ...]
    faces: Tuple[Face, ...]
    intercepts: Tuple[Optional[int], ...]
    convenient: bool

    @property
    def edges(self) -> Tuple[Face, ...]:
        return tuple(face for face in self.faces if face.dimension == 1)

    @property
    def facets(self) -> Tuple[Face, ...]:
        return tuple(face for face in self.faces if face.dimension == self.nvars - 1)

    def face_for(self, normal: Sequence[int]) -> Optional[Face]:
        for face in self.faces:
            if tuple(face.normal) == tuple(normal):
                return face
        return None

    def to_json(self) -> dict:
        return {
            "support": [list(v) for v in sorted(self.support)],
            "vertices": [list(v) for v in self.boundary_vertices],
            "faces": [face.to_json() for face in self.faces],
            "intercepts": [a if a is not None else "inf" for a in self.intercepts],
            "convenient": self.convenient,
        }


@dataclass(frozen=True)
class FaceFunction:
    normal: WeightVector
    degree: int
    polynomial: Polynomial
    edge_polynomial: Optional[Tuple[Fraction, ...]]
    offsets: Optional[Tuple[int, int]]

    @property
    def is_vertex(self) -> bool:
        return len(self.polynomial.terms) == 1

    @property
    def lattice_length(self) -> int:
        return 0 if self.edge_polynomial is None else len(self.edge_polynomial) - 1

    def distinct_roots(self) -> int:
        """Number of distinct roots of E(s) (ℓ for f, m for g)."""
        if self.edge_polynomial is None or self.lattice_length == 0:
            return 0
        return squarefree_part(self.edge_polynomial)[1]


@dataclass(frozen=True)
class FaceCheck:
    holds: bool
    face: Optional[WeightVector] = None
    detail: str = ""

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class MultiplicityVerdict:
    """
    satisfied == Γ(f) ∩ Γ(g) is empty.

    direction is "f_above" when d(P;f) > d(P;g) for every P (Γ(f) lies inside
    the open region over Γ(g)), "g_above" for the mirrored containment.
    """
    satisfied: bool
    witness: Optional[WeightVector] = None
    direction: Optional[str] = None

    def to_json(self) -> dict:
        doc = {"satisfied": self.satisfied}
        if self.witness is not None:
            doc["witness"] = list(self.witness)
        if self.direction is not None:
            doc["direction"] = self.direction
        return doc


# ====================================================================
# helpers
# ====================================================================

def _primitive_integer(values: Sequence) -> Tuple[int, ...]:
    fractions = [Fraction(v) for v in values]
    lcm = 1
    for f in fractions:
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fractions]
    divisor = reduce(gcd, (abs(i) for i in ints), 0)
    if divisor == 0:
        raise InputError("zero vector has no primitive form")
    return tuple(i // divisor for i in ints)


def _pair(weights: Sequence[int], exponent: Exponent) -> int:
    return sum(a * b for a, b in zip(weights, exponent))


def _check_germ(p: Polynomial):
    if p.is_zero:
        raise InputError("the zero polynomial has no Newton boundary")
    if p.constant_term != 0:
        raise ConstantTermError(f"polynomial has a nonzero constant term {p.constant_term}; not a germ at the origin")


def _require_plane(p: Polynomial, what: str):
    if p.nvars != 2:
        raise DimensionError(f"{what} needs exactly 2 variables, got {p.nvars}")


def _intercepts(support: FrozenSet[Exponent], n: int) -> Tuple[Optional[int], ...]:
    result = []
    for axis in range(n):
        on_axis = [v[axis] for v in support if all(v[k] == 0 for k in range(n) if k != axis)]
        result.append(min(on_axis) if on_axis else None)
    return tuple(result)


# ====================================================================
# n = 2
# ====================================================================

def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _polygon_vertices(support: FrozenSet[Exponent]) -> List[Exponent]:
    """Vertices of the lower-left boundary, ordered by descending x."""
    points = sorted(support)
    hull: List[Exponent] = []
    for point in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) <= 0:
            hull.pop()
        hull.append(point)
    lowest = min(y for _, y in points)
    chain = []
    for point in hull:
        chain.append(point)
        if point[1] == lowest:
            break
    return chain[::-1]


def plane_edges(support) -> List[Face]:
    """Edges of the Newton polygon of a finite set of plane exponents, by increasing p/q."""
    support = frozenset(tuple(v) for v in support)
    vertices = _polygon_vertices(support)
    faces = []
    for a, b in zip(vertices, vertices[1:]):
        normal = WeightVector.primitive((b[1] - a[1], a[0] - b[0]))
        degree = normal.pairing(a)
        points = tuple(sorted((v for v in support if normal.pairing(v) == degree), key=lambda v: -v[0]))
        faces.append(Face(normal, degree, points, 1))
    return faces


def _plane_boundary(p: Polynomial) -> NewtonData:
    support = p.support
    intercepts = _intercepts(support, 2)
    return NewtonData(
        nvars=2,
        support=support,
        boundary_vertices=tuple(_polygon_vertices(support)),
        faces=tuple(plane_edges(support)),
        intercepts=intercepts,
        convenient=all(a is not None for a in intercepts),
    )


# ====================================================================
# n >= 3: exact face lattice of Γ_+
# ====================================================================

def _rational(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _null_vector(rows: List[Tuple[int, ...]], n: int) -> Optional[Tuple[int, ...]]:
    """Primitive integer generator of the null space when it is one-dimensional."""
    if n == 3 and len(rows) == 2:
        a, b = rows
        v = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        if v == (0, 0, 0):
            return None
        return _primitive_integer(v)
    kernel = sympy.Matrix(len(rows), n, [x for row in rows for x in row]).nullspace()
    if len(kernel) != 1:
        return None
    return _primitive_integer([_rational(x) for x in kernel[0]])


def _affine_rank(points: Sequence[Exponent]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [a - b for v in points[1:] for a, b in zip(v, base)]
    return int(sympy.Matrix(len(points) - 1, len(base), rows).rank())


def _minimal_points(support: FrozenSet[Exponent]) -> List[Exponent]:
    """Support points not dominated componentwise by another support point."""
    points = sorted(support)
    return [
        v for v in points
        if not any(w != v and all(a <= b for a, b in zip(w, v)) for w in points)
    ]


def _facets(points: List[Exponent], n: int) -> Dict[Tuple[int, ...], FrozenSet[Exponent]]:
    # a facet hyperplane is spanned by k >= 1 support points and n - k axis directions
    units = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    facets: Dict[Tuple[int, ...], FrozenSet[Exponent]] = {}
    seen = set()
    for k in range(1, n + 1):
        for chosen in combinations(points, k):
            base = chosen[0]
            differences = [tuple(a - b for a, b in zip(v, base)) for v in chosen[1:]]
            for directions in combinations(range(n), n - k):
                normal = _null_vector(differences + [units[j] for j in directions], n)
                if normal is None:
                    continue
                if all(c <= 0 for c in normal):
                    normal = tuple(-c for c in normal)
                if any(c < 0 for c in normal) or normal in seen:
                    continue
                degree = _pair(normal, base)
                values = [_pair(normal, v) for v in points]
                if min(values) < degree:
                    continue
                # only a supporting hyperplane settles its normal
                seen.add(normal)
                facets[normal] = frozenset(v for v, value in zip(points, values) if value == degree)
    return facets


def _polyhedral_boundary(p: Polynomial) -> NewtonData:
    n = p.nvars
    support = p.support
    if len(support) > MAX_HULL_POINTS:
        raise SupportTooLargeError(
            f"support has {len(support)} points; exact hulls are limited to {MAX_HULL_POINTS}"
        )
    points = _minimal_points(support)
    facets = _facets(points, n)
    logger.debug(f"{len(facets)} facets of the Newton polyhedron in dimension {n}")

    face_sets = set(facets.values())
    frontier = set(face_sets)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in facets.values():
                meet = a & b
                if meet and meet not in face_sets:
                    fresh.add(meet)
        face_sets |= fresh
        frontier = fresh

    faces = []
    for points_on_face in face_sets:
        containing = [normal for normal, members in facets.items() if points_on_face <= members]
        total = tuple(sum(col) for col in zip(*containing))
        if any(c <= 0 for c in total):
            continue
        normal = WeightVector.primitive(total)
        ordered = tuple(sorted(points_on_face, reverse=True))
        faces.append(Face(normal, normal.pairing(ordered[0]), ordered, _affine_rank(ordered)))
    faces.sort(key=lambda face: (-face.dimension, face.normal.components, face.lattice_points))
    vertices = tuple(sorted((face.lattice_points[0] for face in faces if face.dimension == 0), reverse=True))
    intercepts = _intercepts(support, n)
    return NewtonData(
        nvars=n,
        support=support,
        boundary_vertices=vertices,
        faces=tuple(faces),
        intercepts=intercepts,
        convenient=all(a is not None for a in intercepts),
    )


# ====================================================================
# public operations
# ====================================================================

def newton_boundary(p: Polynomial) -> NewtonData:
    """
    Newton boundary Γ(p): compact faces of conv(support + positive orthant).

    Parameters:
    -----------
    p : Polynomial
        Nonzero germ with p(0) = 0

    Returns:
    --------
    NewtonData
    """
    _check_germ(p)
    if p.nvars == 2:
        return _plane_boundary(p)
    return _polyhedral_boundary(p)


def weighted_degree(P: Sequence[int], p: Polynomial) -> int:
    """d(P;p) = min over the support of <P, nu>."""
    if p.is_zero:
        raise InputError("weighted degree of the zero polynomial is undefined")
    weights = tuple(P)
    if len(weights) != p.nvars:
        raise InputError(f"weight vector {weights} does not match {p.nvars} variables")
    return min(_pair(weights, e) for e in p.terms)


def face_function(p: Polynomial, P: Sequence[int]) -> FaceFunction:
    """
    Face function p_P and, for two variables, its edge polynomial E(s).

    E is read from the face endpoint with the larger x-exponent, stepping by
    (-q, +p), so E(0) != 0 and p_P = x^a y^b * sum e_i x^{q(L-i)} y^{p i}
    with s = y^p / x^q.
    """
    if p.is_zero:
        raise InputError("face function of the zero polynomial is undefined")
    normal = P if isinstance(P, WeightVector) else WeightVector(tuple(P))
    degree = weighted_degree(normal, p)
    on_face = {e: c for e, c in p.terms.items() if normal.pairing(e) == degree}
    polynomial = Polynomial(p.variables, on_face)
    if p.nvars != 2:
        return FaceFunction(normal, degree, polynomial, None, None)
    ordered = sorted(on_face, key=lambda e: -e[0])
    start, end = ordered[0], ordered[-1]
    length = (start[0] - end[0]) // normal.q
    edge = tuple(
        on_face.get((start[0] - i * normal.q, start[1] + i * normal.p), Fraction(0))
        for i in range(length + 1)
    )
    return FaceFunction(normal, degree, polynomial, edge, (end[0], start[1]))


def is_weighted_homogeneous(p: Polynomial, P: Sequence[int]) -> bool:
    if p.is_zero:
        return True
    return len({_pair(tuple(P), e) for e in p.terms}) == 1


def gamma_minus_area(p: Polynomial) -> Fraction:
    """Exact area of Γ_−(p), the region between the axes and Γ(p)."""
    data = newton_boundary(p)
    _require_plane(p, "gamma_minus_area")
    if not data.convenient:
        raise NonConvenientError(f"{p} is not convenient; Γ_−(f) is unbounded")
    polygon = [(0, 0)] + list(data.boundary_vertices)
    twice = 0
    for (x1, y1), (x2, y2) in zip(polygon, polygon[1:] + polygon[:1]):
        twice += x1 * y2 - x2 * y1
    return Fraction(abs(twice), 2)


def newton_number_2d(p: Polynomial) -> int:
    """Kouchnirenko number 2·Area(Γ_−) − a_x − a_y + 1 of a convenient plane germ."""
    _require_plane(p, "newton_number_2d")
    data = newton_boundary(p)
    if not data.convenient:
        raise NonConvenientError(f"{p} is not convenient; the Newton number is undefined")
    twice_area = 2 * gamma_minus_area(p)
    a_x, a_y = data.intercepts
    return int(twice_area) - a_x - a_y + 1


def nondegeneracy_2d(f: Polynomial) -> FaceCheck:
    """True iff every edge polynomial of Γ(f) is squarefree."""
    _require_plane(f, "nondegeneracy_2d")
    data = newton_boundary(f)
    for edge in data.edges:
        ff = face_function(f, edge.normal)
        if ff.distinct_roots() != ff.lattice_length:
            detail = f"edge polynomial on face P={edge.normal} has a repeated root"
            logger.info(detail)
            return FaceCheck(False, edge.normal, detail)
    return FaceCheck(True)


def pair_nondegeneracy_2d(f: Polynomial, g: Polynomial) -> FaceCheck:
    """True iff edge polynomials on every shared edge normal are coprime."""
    _require_plane(f, "pair_nondegeneracy_2d")
    _require_plane(g, "pair_nondegeneracy_2d")
    normals_g = {edge.normal for edge in newton_boundary(g).edges}
    for edge in newton_boundary(f).edges:
        if edge.normal not in normals_g:
            continue
        ef = face_function(f, edge.normal).edge_polynomial
        eg = face_function(g, edge.normal).edge_polynomial
        if len(univariate_gcd(ef, eg)) > 1:
            detail = f"face functions on P={edge.normal} share a non-monomial factor"
            logger.info(detail)
            return FaceCheck(False, edge.normal, detail)
    return FaceCheck(True)


# ====================================================================
# Newton multiplicity condition
# ====================================================================

def _strictly_above(vertices: Sequence[Exponent], data: NewtonData) -> bool:
    # valid for convenient boundaries: the only non-compact facets lie in coordinate hyperplanes
    return all(
        face.normal.pairing(v) > face.degree
        for v in vertices
        for face in data.facets
    )


def _witness_plane(f: Polynomial, g: Polynomial, data_f: NewtonData, data_g: NewtonData) -> WeightVector:
    # phi(lam) = d((lam,1);f) - d((lam,1);g) is piecewise linear with breaks at edge slopes
    breaks = sorted({Fraction(e.normal.p, e.normal.q) for e in data_f.edges + data_g.edges})

    def phi(lam: Fraction) -> Fraction:
        return (min(lam * a + b for a, b in f.terms) - min(lam * a + b for a, b in g.terms))

    samples = [breaks[0] / 2]
    for left, right in zip(breaks, breaks[1:]):
        samples += [left, (left + right) / 2]
    samples += [breaks[-1], breaks[-1] * 2]
    values = [phi(lam) for lam in samples]

    for lam, value in zip(samples, values):
        if value == 0:
            return WeightVector.primitive((lam, 1))
    for (l1, v1), (l2, v2) in zip(zip(samples, values), zip(samples[1:], values[1:])):
        if (v1 < 0) != (v2 < 0):
            root = l1 - v1 * (l2 - l1) / (v2 - v1)
            return WeightVector.primitive((root, 1))
    raise InconsistencyError("multiplicity condition fails but no weight with equal degrees was found")


def _solve_square(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[List[Fraction]]:
    """Exact solution of a square system, None when it is singular."""
    matrix = sympy.Matrix(rows)
    if matrix.det() == 0:
        return None
    return [_rational(x) for x in matrix.LUsolve(sympy.Matrix(rhs))]


def _equal_degree_vertex(v: Exponent, w: Exponent, vf: Sequence[Exponent], vg: Sequence[Exponent],
                         n: int) -> Optional[List[Fraction]]:
    """
    A vertex of {P >= 1 : v minimal for f, w minimal for g, <P,v> = <P,w>}.

    The region holds no line, so it is empty exactly when no choice of active
    constraints yields a feasible point.
    """
    # rows are read as <row, P> >= bound
    inequalities = [(tuple(a - b for a, b in zip(u, v)), 0) for u in vf if u != v]
    inequalities += [(tuple(a - b for a, b in zip(u, w)), 0) for u in vg if u != w]
    inequalities += [(tuple(1 if i == j else 0 for i in range(n)), 1) for j in range(n)]
    equality = tuple(a - b for a, b in zip(v, w))
    fixed = [] if not any(equality) else [(equality, 0)]

    for chosen in combinations(inequalities, n - len(fixed)):
        system = fixed + list(chosen)
        solution = _solve_square([row for row, _ in system], [b for _, b in system])
        if solution is None:
            continue
        if all(sum(a * x for a, x in zip(row, solution)) >= b for row, b in inequalities):
            return solution
    return None


def _witness_polyhedral(f: Polynomial, g: Polynomial, data_f: NewtonData, data_g: NewtonData) -> WeightVector:
    n = f.nvars
    candidates = {face.normal for face in data_f.faces + data_g.faces}
    candidates.add(WeightVector((1,) * n))
    for normal in sorted(candidates):
        if weighted_degree(normal, f) == weighted_degree(normal, g):
            return normal

    # exact search: a weight where a vertex of f and a vertex of g are both minimal with equal value
    vf, vg = data_f.boundary_vertices, data_g.boundary_vertices
    for v in vf:
        for w in vg:
            solution = _equal_degree_vertex(v, w, vf, vg, n)
            if solution is not None:
                return WeightVector.primitive(solution)
    raise InconsistencyError("multiplicity condition fails but no weight with equal degrees was found")


def multiplicity_condition(f: Polynomial, g: Polynomial) -> MultiplicityVerdict:
    """
    Decide the Newton multiplicity condition Γ(f) ∩ Γ(g) = ∅ exactly.

    Parameters:
    -----------
    f, g : Polynomial
        Convenient germs over the same variables

    Returns:
    --------
    MultiplicityVerdict
        On violation the witness P satisfies d(P;f) = d(P;g).
    """
    if f.variables != g.variables:
        raise InputError(f"variable lists differ: {list(f.variables)} vs {list(g.variables)}")
    data_f, data_g = newton_boundary(f), newton_boundary(g)
    for name, p, data in (("f", f, data_f), ("g", g, data_g)):
        if not data.convenient:
            raise NonConvenientError(f"{name} = {p} is not convenient")

    if _strictly_above(data_g.boundary_vertices, data_f):
        return MultiplicityVerdict(True, direction="g_above")
    if _strictly_above(data_f.boundary_vertices, data_g):
        return MultiplicityVerdict(True, direction="f_above")

    if f.nvars == 2:
        witness = _witness_plane(f, g, data_f, data_g)
    else:
        witness = _witness_polyhedral(f, g, data_f, data_g)
    if weighted_degree(witness, f) != weighted_degree(witness, g):
        raise InconsistencyError(f"witness {witness} does not equalise the weighted degrees")
    logger.info(f"Newton multiplicity condition violated, witness P={witness}")
    return MultiplicityVerdict(False, witness=witness)
