"""
Polynomial core - exact arithmetic substrate.

Exact multivariate polynomials over Q, the expression parser, truncated power
series (with an explicit reliable-truncation bound) and univariate complex
root finding. Every other milnorlab module is written on top of these.
"""
import re
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from .errors import (
    InputError,
    ParseError,
    RootFindingError,
    TruncationError,
    UnknownVariableError,
    VariableMismatchError,
)

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Number = Union[Fraction, complex]

MAX_VARIABLES = 8
MAX_EXPONENT = 2 ** 31
SERIES_ZERO_TOL = 1e-9
# relative Taylor-coefficient sizes: below ZERO vanishes, above SIGNAL does not
MULTIPLICITY_ZERO_TOL = 1e-11
MULTIPLICITY_SIGNAL_TOL = 1e-6

_S = sympy.Symbol("s")


def _term_key(exponent: Exponent):
    # descending total degree, then descending lexicographic
    return (-sum(exponent), tuple(-e for e in exponent))


def is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


def to_complex(c) -> complex:
    if isinstance(c, Fraction):
        return complex(c.numerator / c.denominator)
    return complex(c)


def number_to_json(c) -> dict:
    z = to_complex(c)
    doc = {"re": z.real + 0.0, "im": z.imag + 0.0}
    if is_exact(c):
        doc["exact"] = str(Fraction(c))
    return doc


def format_number(c) -> str:
    if is_exact(c):
        return str(Fraction(c))
    z = to_complex(c)
    return f"({z.real:.12g}{z.imag:+.12g}j)"


def is_negligible(c, threshold: float = SERIES_ZERO_TOL) -> bool:
    """Exact zero test for rationals, tolerance test for complex floats."""
    if is_exact(c):
        return c == 0
    return abs(c) <= threshold


# ====================================================================
# Polynomials
# ====================================================================

class Polynomial:
    """
    Exact polynomial with rational coefficients in a fixed ordered variable list.

    Terms are kept in graded order (descending total degree, then descending
    lexicographic exponent) so printing and iteration are deterministic.
    Instances are immutable.
    """

    __slots__ = ("_variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Exponent, object]] = None):
        variables = tuple(variables)
        if not variables:
            raise InputError("at least one variable is required")
        if len(set(variables)) != len(variables):
            raise InputError(f"duplicate variable names in {list(variables)}")
        if len(variables) > MAX_VARIABLES:
            raise InputError(f"at most {MAX_VARIABLES} variables are supported, got {len(variables)}")

        cleaned: Dict[Exponent, Fraction] = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != len(variables):
                raise VariableMismatchError(
                    f"exponent {exponent} does not match variables {list(variables)}"
                )
            if any(e < 0 for e in exponent):
                raise InputError(f"negative exponent in {exponent}")
            value = Fraction(coeff)
            if value != 0:
                cleaned[exponent] = value

        self._variables = variables
        self._terms = {e: cleaned[e] for e in sorted(cleaned, key=_term_key)}

    # ---------------------------------------------------------- builders

    @classmethod
    def constant(cls, value, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {(0,) * len(tuple(variables)): value})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariableError(f"unknown variable '{name}'; expected one of {list(variables)}")
        exponent = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exponent: 1})

    @classmethod
    def monomial(cls, exponent: Exponent, coeff, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {tuple(exponent): coeff})

    # -------------------------------------------------------- properties

    @property
    def variables(self) -> Tuple[str, ...]:
        return self._variables

    @property
    def nvars(self) -> int:
        return len(self._variables)

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def support(self) -> frozenset:
        return frozenset(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    @property
    def degree(self) -> int:
        if self.is_zero:
            return -1
        return max(sum(e) for e in self._terms)

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    # -------------------------------------------------------- arithmetic

    def _check_compatible(self, other: "Polynomial"):
        if self._variables != other._variables:
            raise VariableMismatchError(
                f"variable lists differ: {list(self._variables)} vs {list(other._variables)}"
            )

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check_compatible(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self._variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self._variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self._variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self._variables, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise InputError(f"polynomial exponent must be a non-negative integer, got {exponent!r}")
        if len(self._terms) == 1:
            (e, c), = self._terms.items()
            return Polynomial(self._variables, {tuple(k * exponent for k in e): c ** exponent})
        result = Polynomial.constant(1, self._variables)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def divide_monomial(self, exponent: Exponent) -> "Polynomial":
        """Exact division by the monomial with the given exponent."""
        terms = {}
        for e, c in self._terms.items():
            shifted = tuple(a - b for a, b in zip(e, exponent))
            if any(k < 0 for k in shifted):
                raise InputError(f"monomial {exponent} does not divide the term {e}")
            terms[shifted] = c
        return Polynomial(self._variables, terms)

    # ------------------------------------------------------------ dunder

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._variables == other._variables and self._terms == other._terms

    def __hash__(self):
        return hash((self._variables, tuple(self._terms.items())))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, variables={list(self._variables)})"


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form, re-parseable by parse_polynomial."""
    if p.is_zero:
        return "0"
    pieces = []
    for index, (exponent, coeff) in enumerate(p.terms.items()):
        magnitude = abs(coeff)
        monomial = "*".join(
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(p.variables, exponent)
            if e
        )
        if not monomial:
            body = str(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{magnitude}*{monomial}"
        if index == 0:
            pieces.append(("-" if coeff < 0 else "") + body)
        else:
            pieces.append((" - " if coeff < 0 else " + ") + body)
    return "".join(pieces)


def monomial_content(p: Polynomial) -> Tuple[Fraction, Exponent, Polynomial]:
    """Split p as content * monomial * cofactor with a positive rational content."""
    if p.is_zero:
        return Fraction(0), (0,) * p.nvars, p
    mono = tuple(min(e[k] for e in p.terms) for k in range(p.nvars))
    numerators = 0
    denominators = 1
    for c in p.terms.values():
        numerators = gcd(numerators, c.numerator)
        denominators = denominators * c.denominator // gcd(denominators, c.denominator)
    content = Fraction(numerators, denominators)
    cofactor = p.divide_monomial(mono) * (1 / content)
    return content, mono, cofactor


def format_factored(p: Polynomial) -> str:
    """Text form with the content and the monomial factor pulled out: 2*x*y*(3*x - 2)."""
    if p.is_zero:
        return "0"
    content, mono, cofactor = monomial_content(p)
    if cofactor.is_constant:
        return str(Polynomial.monomial(mono, content * cofactor.constant_term, p.variables))
    factors = [] if content == 1 else [str(content)]
    factors += [name if e == 1 else f"{name}^{e}" for name, e in zip(p.variables, mono) if e]
    if not factors:
        return str(cofactor)
    factors.append(f"({cofactor})")
    return "*".join(factors)


def arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    """Exact add / sub / mul of two polynomials over the same variables."""
    p._check_compatible(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise InputError(f"unknown operation '{op}'; expected add, sub or mul")


def differentiate(p: Polynomial, var: str) -> Polynomial:
    """Formal partial derivative with respect to `var`."""
    if var not in p.variables:
        raise UnknownVariableError(f"unknown variable '{var}'; expected one of {list(p.variables)}")
    k = p.variables.index(var)
    terms = {}
    for e, c in p.terms.items():
        if e[k]:
            lowered = e[:k] + (e[k] - 1,) + e[k + 1:]
            terms[lowered] = c * e[k]
    return Polynomial(p.variables, terms)


# ====================================================================
# Parsing
# ====================================================================

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(\S))")
_OPERATORS = set("+-*^/()")


def _split_identifier(name: str, variables: Sequence[str]) -> Optional[List[str]]:
    # "xy" -> [x, y], "z1z2" -> [z1, z2]; longest names tried first
    if not name:
        return []
    for v in sorted(variables, key=len, reverse=True):
        if name.startswith(v):
            rest = _split_identifier(name[len(v):], variables)
            if rest is not None:
                return [v] + rest
    return None


class _Parser:
    """Recursive descent over the expression grammar."""

    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = self._tokenize(text.replace("−", "-"))
        self.index = 0

    def _tokenize(self, text):
        tokens = []
        position = 0
        while position < len(text):
            match = _TOKEN_RE.match(text, position)
            if match is None or match.end() == position:
                break
            number, name, op = match.groups()
            start = match.start(match.lastindex)
            if number is not None:
                tokens.append(("num", number, start))
            elif name is not None:
                tokens.append(("name", name, start))
            elif op in _OPERATORS:
                tokens.append((op, op, start))
            else:
                raise ParseError(f"unexpected character {op!r}", self.text, start)
            position = match.end()
        tokens.append(("end", "", len(text)))
        return tokens

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind):
        token = self.advance()
        if token[0] != kind:
            found = "end of input" if token[0] == "end" else repr(token[1])
            raise ParseError(f"expected {kind!r}, found {found}", self.text, token[2])
        return token

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.text, 0)
        result = self.expr()
        token = self.peek()
        if token[0] != "end":
            raise ParseError(f"unexpected {token[1]!r}", self.text, token[2])
        return result

    def expr(self) -> Polynomial:
        negate = False
        if self.peek()[0] in ("+", "-"):
            negate = self.advance()[0] == "-"
        result = self.term()
        if negate:
            result = -result
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            term = self.term()
            result = result + term if op == "+" else result - term
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.advance()
                result = result * self.factor()
            elif kind in ("num", "name", "("):
                result = result * self.factor()
            else:
                return result

    def factor(self) -> Polynomial:
        prefix, base = self.base()
        if self.peek()[0] == "^":
            self.advance()
            token = self.expect("num")
            exponent = int(token[1])
            if exponent > MAX_EXPONENT:
                raise ParseError(f"exponent overflow ({exponent} > 2^31)", self.text, token[2])
            if len(base.terms) == 1 and max(max(e) for e in base.terms) * exponent > MAX_EXPONENT:
                raise ParseError("exponent overflow (> 2^31)", self.text, token[2])
            base = base ** exponent
        return base if prefix is None else prefix * base

    def base(self) -> Tuple[Optional[Polynomial], Polynomial]:
        token = self.advance()
        kind, value, position = token
        if kind == "num":
            numerator = int(value)
            if self.peek()[0] == "/":
                self.advance()
                denominator = int(self.expect("num")[1])
                if denominator == 0:
                    raise ParseError("zero denominator", self.text, position)
                return None, Polynomial.constant(Fraction(numerator, denominator), self.variables)
            return None, Polynomial.constant(numerator, self.variables)
        if kind == "name":
            parts = [value] if value in self.variables else _split_identifier(value, self.variables)
            if parts is None:
                raise UnknownVariableError(
                    f"unknown variable '{value}' at position {position}; "
                    f"expected one of {list(self.variables)}"
                )
            # an exponent binds to the last juxtaposed variable only
            prefix = None
            for name in parts[:-1]:
                factor = Polynomial.variable(name, self.variables)
                prefix = factor if prefix is None else prefix * factor
            return prefix, Polynomial.variable(parts[-1], self.variables)
        if kind == "(":
            inner = self.expr()
            self.expect(")")
            return None, inner
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {found}", self.text, position)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """
    Parse an expression into its expanded canonical polynomial.

    Parameters:
    -----------
    text : str
        Expression such as "x^5 + x^2y^2 + y^6" or "49/50*x^2 - (x+y)^3"
    variables : sequence of str
        Ordered, distinct variable names

    Returns:
    --------
    Polynomial
    """
    variables = tuple(variables)
    if not variables:
        raise InputError("variable list is empty")
    if len(set(variables)) != len(variables):
        raise InputError(f"duplicate variable names in {list(variables)}")
    return _Parser(text, variables).parse()


# ====================================================================
# Evaluation and the sympy bridge
# ====================================================================

def _horner(items, point, k):
    if k == len(point):
        return sum((to_complex(c) for _, c in items), 0j)
    groups: Dict[int, list] = {}
    for e, c in items:
        groups.setdefault(e[k], []).append((e, c))
    acc = 0j
    for power in range(max(groups), -1, -1):
        acc = acc * point[k]
        if power in groups:
            acc += _horner(groups[power], point, k + 1)
    return acc


def evaluate_complex(p: Polynomial, point: Sequence[complex]) -> complex:
    """Nested Horner evaluation at a complex point."""
    point = tuple(complex(z) for z in point)
    if len(point) != p.nvars:
        raise VariableMismatchError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    if p.is_zero:
        return 0j
    return _horner(list(p.terms.items()), point, 0)


def evaluate_many(p: Polynomial, points: np.ndarray) -> np.ndarray:
    """Vectorised evaluation; `points` has shape (nvars, M)."""
    points = np.asarray(points, dtype=complex)
    result = np.zeros(points.shape[1], dtype=complex)
    for exponent, coeff in p.terms.items():
        term = np.full(points.shape[1], float(coeff), dtype=complex)
        for k, e in enumerate(exponent):
            if e:
                term *= points[k] ** e
        result += term
    return result


def to_sympy(p: Polynomial) -> sympy.Poly:
    gens = sympy.symbols(p.variables)
    rep = {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.terms.items()}
    return sympy.Poly.from_dict(rep, *gens, domain=sympy.QQ)


def _fraction(value) -> Fraction:
    r = sympy.Rational(value)
    return Fraction(int(r.p), int(r.q))


def from_sympy(poly: sympy.Poly, variables: Sequence[str]) -> Polynomial:
    return Polynomial(variables, {e: _fraction(c) for e, c in poly.as_dict().items()})


def polynomial_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact multivariate gcd over Q (sympy)."""
    p._check_compatible(q)
    return from_sympy(sympy.gcd(to_sympy(p), to_sympy(q)), p.variables)


# ====================================================================
# Univariate polynomials (ascending coefficient lists)
# ====================================================================

def _uni_to_sympy(coeffs: Sequence) -> sympy.Poly:
    descending = [sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in reversed(coeffs)]
    return sympy.Poly(descending, _S, domain=sympy.QQ)


def _uni_from_sympy(poly: sympy.Poly) -> List[Fraction]:
    return [_fraction(c) for c in reversed(poly.all_coeffs())]


def _strip_high_zeros(coeffs: Sequence) -> list:
    coeffs = list(coeffs)
    while coeffs and is_exact(coeffs[-1]) and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def squarefree_part(coeffs: Sequence) -> Tuple[List[Fraction], int]:
    """
    Squarefree part p / gcd(p, p') of a rational univariate polynomial.

    Returns the ascending coefficients of the squarefree part and its degree,
    which is the number of distinct complex roots.
    """
    coeffs = _strip_high_zeros(coeffs)
    if not coeffs:
        raise InputError("squarefree part of the zero polynomial is undefined")
    sqf = _uni_to_sympy(coeffs).sqf_part()
    return _uni_from_sympy(sqf), sqf.degree()


def univariate_gcd(a: Sequence, b: Sequence) -> List[Fraction]:
    return _uni_from_sympy(sympy.gcd(_uni_to_sympy(a), _uni_to_sympy(b)))


def _horner_pair(coeffs: Sequence[complex], z: complex) -> Tuple[complex, complex]:
    value = 0j
    derivative = 0j
    for c in reversed(coeffs):
        derivative = derivative * z + value
        value = value * z + c
    return value, derivative


def _root_key(root):
    z = to_complex(root)
    return (round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0)


def _polished_simple_roots(coeffs: Sequence[complex], tol: float, max_iter: int) -> List[complex]:
    """Companion-matrix roots of a squarefree polynomial, polished by Newton steps."""
    coeffs = [complex(c) for c in coeffs]
    if len(coeffs) == 2:
        return [-coeffs[0] / coeffs[1]]
    scale = 1.0 + max(abs(c) for c in coeffs)
    roots = []
    for z0 in np.roots(np.array(coeffs[::-1], dtype=complex)):
        z0 = complex(z0)
        z = z0
        for _ in range(max_iter):
            value, derivative = _horner_pair(coeffs, z)
            if derivative == 0:
                break
            step = value / derivative
            z -= step
            if abs(step) <= 1e-16 * (1.0 + abs(z)):
                break
        if abs(z - z0) > 1e-6 * (1.0 + abs(z0)):
            # Newton jumped to a neighbouring root; keep the eigenvalue
            z = z0
        residual = abs(_horner_pair(coeffs, z)[0])
        floor = 32 * np.finfo(float).eps * sum(abs(c) * abs(z) ** i for i, c in enumerate(coeffs))
        if residual > max(tol * scale, floor):
            raise RootFindingError(
                f"root {z} did not converge: residual {residual:.3e} after {max_iter} iterations"
            )
        roots.append(z)
    return roots


def _rational_roots(coeffs: Sequence, tol: float, max_iter: int) -> List[Tuple[Number, int]]:
    poly = _uni_to_sympy(coeffs)
    result: List[Tuple[Number, int]] = []
    _, factors = poly.sqf_list()
    for factor, multiplicity in factors:
        _, irreducibles = factor.factor_list()
        for irreducible, _ in irreducibles:
            if irreducible.degree() == 1:
                a, b = irreducible.all_coeffs()
                result.append((_fraction(-b / a), multiplicity))
            elif irreducible.degree() > 1:
                numeric = [complex(float(c)) for c in reversed(irreducible.all_coeffs())]
                for z in _polished_simple_roots(numeric, tol, max_iter):
                    result.append((z, multiplicity))
    return result


def _taylor_sizes(coeffs: Sequence[complex], c: complex) -> List[float]:
    """|p^(j)(c) / j!| relative to sum_i |p_i| C(i,j) max(1,|c|)^(i-j), for every j."""
    d = len(coeffs) - 1
    values = list(coeffs)
    bounds = [abs(v) for v in coeffs]
    w = max(1.0, abs(c))
    for j in range(d):
        for i in range(d - 1, j - 1, -1):
            values[i] += c * values[i + 1]
            bounds[i] += w * bounds[i + 1]
    return [abs(v) / b if b else 0.0 for v, b in zip(values, bounds)]


def _cluster(coeffs: Sequence[complex], z: complex, pool: List[complex]) -> Tuple[complex, List[int]]:
    """
    Centre and members of the root cluster around z.

    A cluster of m eigenvalues is accepted when the first m Taylor coefficients
    at its centroid vanish and the m-th does not. The largest accepted m wins;
    any undecided larger cluster makes the multiplicity ambiguous.
    """
    order = sorted(range(len(pool)), key=lambda i: abs(pool[i] - z))
    accepted = None
    undecided = []
    for m in range(1, len(order) + 1):
        members = order[:m]
        centre = sum(pool[i] for i in members) / m
        sizes = _taylor_sizes(coeffs, centre)
        head = max(sizes[:m])
        if head <= MULTIPLICITY_ZERO_TOL:
            accepted = (m, centre, members, sizes[m])
        elif head < MULTIPLICITY_SIGNAL_TOL:
            undecided.append(m)
    if accepted is None:
        raise RootFindingError(f"no multiplicity fits the eigenvalue {z}")
    m, centre, members, next_size = accepted
    if next_size < MULTIPLICITY_SIGNAL_TOL or any(k > m for k in undecided):
        raise RootFindingError(f"ambiguous multiplicity for the root cluster near {centre} (size {m})")
    return centre, members


def _numeric_roots(coeffs: Sequence[complex], tol: float, max_iter: int) -> List[Tuple[Number, int]]:
    pool = sorted((complex(z) for z in np.roots(np.array(coeffs[::-1], dtype=complex))), key=_root_key)
    result: List[Tuple[Number, int]] = []
    while pool:
        centre, members = _cluster(coeffs, pool[0], pool)
        if len(members) == 1:
            z = centre
            for _ in range(max_iter):
                value, derivative = _horner_pair(coeffs, z)
                if derivative == 0:
                    break
                step = value / derivative
                z -= step
                if abs(step) <= 1e-16 * (1.0 + abs(z)):
                    break
            if abs(z - centre) <= 1e-6 * (1.0 + abs(centre)):
                centre = z
        result.append((centre, len(members)))
        pool = [z for i, z in enumerate(pool) if i not in members]
    return result


def complex_roots(coeffs: Sequence, tol: float = 1e-12, max_iter: int = 200) -> List[Tuple[Number, int]]:
    """
    All complex roots of a univariate polynomial with multiplicities.

    Parameters:
    -----------
    coeffs : sequence
        Ascending coefficients (index = power); rationals or complex floats
    tol : float
        Residual tolerance, relative to 1 + max |coefficient|
    max_iter : int
        Newton polishing cap per root

    Returns:
    --------
    list of (root, multiplicity)
        Rational coefficients go through an exact squarefree decomposition
        first; rational roots come back as Fraction, the rest as complex.
        Complex input groups eigenvalues into clusters certified by the Taylor
        coefficients at their centroid and raises RootFindingError when the
        multiplicity is ambiguous. Sorted by rounded (re, im).
    """
    coeffs = _strip_high_zeros(coeffs)
    if len(coeffs) < 2 or (not is_exact(coeffs[-1]) and coeffs[-1] == 0):
        raise InputError("complex_roots needs a polynomial of degree >= 1 with nonzero leading coefficient")
    if all(is_exact(c) for c in coeffs):
        roots = _rational_roots([Fraction(c) for c in coeffs], tol, max_iter)
    else:
        roots = _numeric_roots([to_complex(c) for c in coeffs], tol, max_iter)
    roots.sort(key=lambda item: _root_key(item[0]))
    logger.debug(f"complex_roots: degree {len(coeffs) - 1}, {len(roots)} distinct roots")
    return roots


def exact_root(value: Fraction, p: int) -> Optional[Fraction]:
    """Rational p-th root of a rational, when one exists (real, principal sign)."""
    if p == 1:
        return value
    sign = 1
    if value < 0:
        if p % 2 == 0:
            return None
        sign = -1
    num = _integer_root(abs(value.numerator), p)
    den = _integer_root(value.denominator, p)
    if num is None or den is None:
        return None
    return Fraction(sign * num, den)


def _integer_root(n: int, p: int) -> Optional[int]:
    root, exact = sympy.integer_nthroot(n, p)
    return int(root) if exact else None


# ====================================================================
# Truncated power series
# ====================================================================

@dataclass(frozen=True)
class ComplexSeries:
    """
    Truncated Laurent series sum c_i t^i for order <= i < truncation.

    Coefficients beyond `truncation` are unknown. A series that is zero up to
    its truncation has order == truncation and no coefficients. Rational
    coefficients stay exact; a single complex float makes the series numeric.
    """
    order: int
    coefficients: Tuple[Number, ...]
    truncation: int

    # ---------------------------------------------------------- builders

    @classmethod
    def build(cls, order: int, coefficients: Iterable, truncation: int) -> "ComplexSeries":
        """Normalise: convert ints, pad to the truncation, strip leading zeros."""
        length = max(0, truncation - order)
        coeffs = [Fraction(c) if isinstance(c, int) else c for c in list(coefficients)[:length]]
        coeffs += [Fraction(0)] * (length - len(coeffs))
        scale = max((abs(c) for c in coeffs), default=0)
        threshold = SERIES_ZERO_TOL * max(1.0, float(scale))
        start = 0
        while start < len(coeffs) and is_negligible(coeffs[start], threshold):
            start += 1
        if start == len(coeffs):
            return cls.zero(truncation)
        return cls(order + start, tuple(coeffs[start:]), truncation)

    @classmethod
    def zero(cls, truncation: int) -> "ComplexSeries":
        return cls(truncation, (), truncation)

    @classmethod
    def constant(cls, value, truncation: int) -> "ComplexSeries":
        return cls.build(0, [value], truncation)

    @classmethod
    def monomial(cls, order: int, value, truncation: int) -> "ComplexSeries":
        return cls.build(order, [value], truncation)

    # -------------------------------------------------------- properties

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coefficients)

    @property
    def leading(self) -> Number:
        if self.is_zero:
            raise TruncationError(f"series vanishes up to truncation {self.truncation}")
        return self.coefficients[0]

    @property
    def scale(self) -> float:
        return max((abs(c) for c in self.coefficients), default=0.0)

    def coefficient(self, i: int) -> Number:
        if i >= self.truncation:
            raise TruncationError(f"coefficient of t^{i} lies beyond truncation {self.truncation}")
        if i < self.order:
            return Fraction(0)
        return self.coefficients[i - self.order]

    def negligible(self, i: int) -> bool:
        threshold = SERIES_ZERO_TOL * max(1.0, float(self.scale))
        return is_negligible(self.coefficient(i), threshold)

    # -------------------------------------------------------- arithmetic

    def _lift(self, other) -> "ComplexSeries":
        if isinstance(other, ComplexSeries):
            return other
        return ComplexSeries.constant(other, self.truncation)

    def __add__(self, other):
        other = self._lift(other)
        truncation = min(self.truncation, other.truncation)
        low = min(self.order, other.order)
        coeffs = [Fraction(0)] * max(0, truncation - low)
        for series in (self, other):
            for i, c in enumerate(series.coefficients):
                index = series.order + i - low
                if index >= len(coeffs):
                    break
                coeffs[index] = coeffs[index] + c
        return ComplexSeries.build(low, coeffs, truncation)

    __radd__ = __add__

    def __neg__(self):
        return ComplexSeries(self.order, tuple(-c for c in self.coefficients), self.truncation)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ComplexSeries):
            return ComplexSeries.build(self.order, [c * other for c in self.coefficients], self.truncation)
        truncation = min(self.truncation + other.order, other.truncation + self.order)
        if self.is_zero or other.is_zero:
            return ComplexSeries.zero(truncation)
        order = self.order + other.order
        length = truncation - order
        coeffs: List[Number] = [Fraction(0)] * length
        for i, a in enumerate(self.coefficients):
            if i >= length:
                break
            for j, b in enumerate(other.coefficients[: length - i]):
                coeffs[i + j] = coeffs[i + j] + a * b
        return ComplexSeries.build(order, coeffs, truncation)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ComplexSeries):
            return series_ratio(self, other)
        return self * (1 / other)

    def shift(self, k: int) -> "ComplexSeries":
        """Multiply by t^k."""
        return ComplexSeries(self.order + k, self.coefficients, self.truncation + k)

    def truncate(self, truncation: int) -> "ComplexSeries":
        if truncation >= self.truncation:
            return self
        return ComplexSeries.build(self.order, self.coefficients, truncation)

    def substitute_power(self, e: int) -> "ComplexSeries":
        """Substitute t -> t^e."""
        if e == 1 or self.is_zero:
            return ComplexSeries.zero(self.truncation * e) if self.is_zero else self
        coeffs: List[Number] = []
        for c in self.coefficients:
            coeffs.append(c)
            coeffs.extend([Fraction(0)] * (e - 1))
        return ComplexSeries.build(self.order * e, coeffs, self.truncation * e)

    def inverse(self) -> "ComplexSeries":
        """Multiplicative inverse; valid to as many terms as self carries."""
        if self.is_zero:
            raise TruncationError(f"cannot invert a series vanishing up to truncation {self.truncation}")
        d = self.coefficients
        inv: List[Number] = [1 / d[0]]
        for k in range(1, len(d)):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc = acc + d[j] * inv[k - j]
            inv.append(-acc / d[0])
        return ComplexSeries.build(-self.order, inv, -self.order + len(d))

    def evaluate(self, t):
        """Evaluate the known part at t (scalar or numpy array)."""
        t = np.asarray(t, dtype=complex)
        acc = np.zeros_like(t)
        for c in reversed(self.coefficients):
            acc = acc * t + to_complex(c)
        if self.order:
            acc = acc * t ** self.order
        return acc

    def to_json(self) -> List[dict]:
        rows = []
        for i, c in enumerate(self.coefficients):
            if is_exact(c) and c == 0:
                continue
            rows.append({"ord": self.order + i, **number_to_json(c)})
        return rows


def series_ratio(num: ComplexSeries, den: ComplexSeries, N: Optional[int] = None) -> ComplexSeries:
    """Laurent quotient num/den, valid to the common reliable truncation (capped at N)."""
    if den.is_zero:
        raise TruncationError(f"denominator vanishes up to truncation {den.truncation}")
    result = num * den.inverse()
    return result if N is None else result.truncate(N)


def _series_power(series: ComplexSeries, e: int, N: int) -> ComplexSeries:
    result = ComplexSeries.constant(1, N)
    base = series.truncate(N)
    while e:
        if e & 1:
            result = (result * base).truncate(N)
        e >>= 1
        if e:
            base = (base * base).truncate(N)
    return result


def compose_terms(
    terms: Mapping[Exponent, Number],
    branch: Sequence[ComplexSeries],
    N: int,
    require_leading: bool = True,
) -> ComplexSeries:
    """Substitute per-variable series into a sum of terms with arbitrary coefficients."""
    cache: Dict[Tuple[int, int], ComplexSeries] = {}
    result = ComplexSeries.zero(N)
    for exponent, coeff in terms.items():
        term = ComplexSeries.constant(coeff, N)
        for k, e in enumerate(exponent):
            if e:
                if (k, e) not in cache:
                    cache[(k, e)] = _series_power(branch[k], e, N)
                term = (term * cache[(k, e)]).truncate(N)
        result = result + term
    result = result.truncate(N)
    if require_leading and result.is_zero:
        raise TruncationError(f"truncation {result.truncation} too small to determine the leading term")
    return result


def compose_series(
    p: Polynomial,
    branch: Sequence[ComplexSeries],
    N: int,
    require_leading: bool = True,
) -> ComplexSeries:
    """
    Truncated series of p along a parametrised branch.

    Parameters:
    -----------
    p : Polynomial
        Nonzero polynomial
    branch : sequence of ComplexSeries
        One series per variable of p
    N : int
        Requested truncation
    require_leading : bool
        Raise TruncationError when the result vanishes up to its truncation

    Returns:
    --------
    ComplexSeries
    """
    if len(branch) != p.nvars:
        raise VariableMismatchError(f"branch has {len(branch)} coordinates, polynomial has {p.nvars} variables")
    if p.is_zero:
        raise InputError("cannot compose the zero polynomial")
    return compose_terms(p.terms, branch, N, require_leading)
