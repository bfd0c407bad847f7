"""
DefCoh - Normal-Form Arithmetic in A(q, h)

The algebra family A(q, h) = k{x, y}/(xy - q·yx - h) on two generators:
  - Weyl algebra W1          q = 1, h = 1
  - quantum plane Wqp        h = 0
  - q-Weyl algebra Wq        h = 1
  - generic Wq(h)            q, h both transcendental
  - polynomial ring k[x,y]   q = 1, h = 0

Elements are kept in x-before-y normal order, Σ c_ij x^i y^j. The single
rewrite needed is read off the defining relation with r = 1/q:

    y·x^i = r^i x^i y - i_r·r·h·x^(i-1)

so y^b·x^c is computed by repeated left multiplication by y and memoized
per algebra. The relation preserves the weight i - j of a monomial, which
splits center and derivation computations into small exact systems.
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from sympy import Add, Symbol
from sympy.parsing.sympy_parser import parse_expr

from . import scalars
from .exceptions import AlgebraMismatch, InvalidParameters, OutOfRange
from .scalars import FieldKind, ScalarField
from ..utils.linalg import combine, echelon_rows, kernel

logger = logging.getLogger(__name__)

Monomial = Tuple[int, int]


@dataclass(frozen=True)
class AlgebraSpec:
    """
    One member of the family A(q, h) over a fixed scalar field.

    q and hbar are elements of field.domain; q must be invertible.
    """
    field: ScalarField
    q: object
    hbar: object
    name: str = "A(q,h)"
    _products: Dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.field.convert(self.q))
        object.__setattr__(self, "hbar", self.field.convert(self.hbar))
        if not self.q:
            raise InvalidParameters(f"q must be nonzero in {self.name}")

    # Family members

    @classmethod
    def weyl(cls, field: Optional[ScalarField] = None) -> "AlgebraSpec":
        return cls(field or ScalarField.rational(), 1, 1, "W1")

    @classmethod
    def weyl_hbar(cls) -> "AlgebraSpec":
        field = ScalarField.rational(hbar=True)
        return cls(field, 1, field.h, "Wh")

    @classmethod
    def polynomial(cls, field: Optional[ScalarField] = None) -> "AlgebraSpec":
        return cls(field or ScalarField.rational(), 1, 0, "k[x,y]")

    @classmethod
    def quantum_plane(cls, field: ScalarField, q=None) -> "AlgebraSpec":
        return cls(field, field.q if q is None else q, 0, "Wqp")

    @classmethod
    def q_weyl(cls, field: ScalarField, q=None) -> "AlgebraSpec":
        return cls(field, field.q if q is None else q, 1, "Wq")

    @classmethod
    def generic(cls) -> "AlgebraSpec":
        field = ScalarField.ratfunc(hbar=True)
        return cls(field, field.q, field.h, "Wq(h)")

    @classmethod
    def from_descriptors(cls, q_text: str, hbar_text: str) -> "AlgebraSpec":
        """
        Build an algebra from CLI descriptors.

        q_text: "symbolic", "zeta:N" or a rational literal
        hbar_text: "symbolic" or a rational literal
        """
        q_kind, q_value = scalars.parse_descriptor(q_text)
        h_kind, h_value = scalars.parse_descriptor(hbar_text)
        if h_kind == "zeta":
            raise InvalidParameters("h cannot be a root of unity")

        hbar = h_kind == "symbolic"
        if q_kind == "symbolic":
            field = ScalarField.ratfunc(hbar)
            q = field.q
        elif q_kind == "zeta":
            field = ScalarField.cyclotomic(q_value, hbar)
            q = field.q
        else:
            field = ScalarField.rational(hbar)
            q = field.convert(q_value)
        h = field.h if hbar else field.convert(h_value)
        return cls(field, q, h, f"A(q={q_text},h={hbar_text})")

    # Derived constants

    @property
    def r(self):
        return self.field.one / self.q

    @property
    def root_order(self) -> Optional[int]:
        """N when q is a primitive N-th root of unity, else None."""
        if self.field.kind == FieldKind.CYCLOTOMIC and self.q == self.field.q:
            return self.field.order
        if self.q == self.field.one:
            return 1
        if self.q == -self.field.one:
            return 2
        return None

    def is_commutative(self) -> bool:
        return self.q == self.field.one and not self.hbar

    # Generators

    def x(self) -> "NCPoly":
        return NCPoly.monomial(self, 1, 0)

    def y(self) -> "NCPoly":
        return NCPoly.monomial(self, 0, 1)

    def one(self) -> "NCPoly":
        return NCPoly.monomial(self, 0, 0)

    def zero(self) -> "NCPoly":
        return NCPoly(self, {})

    # Rewriting

    def y_power_times_x_power(self, b: int, c: int) -> Dict[Monomial, object]:
        """Normal form of y^b·x^c, memoized."""
        key = (b, c)
        cached = self._products.get(key)
        if cached is not None:
            return cached
        if b == 0 or c == 0:
            result = {(c, b): self.field.one}
        else:
            result = {}
            for (i, j), coeff in self.y_power_times_x_power(b - 1, c).items():
                for mono, value in self._y_times(i, j).items():
                    total = result.get(mono, self.field.zero) + coeff * value
                    if total:
                        result[mono] = total
                    else:
                        result.pop(mono, None)
        self._products[key] = result
        return result

    def _y_times(self, i: int, j: int) -> Dict[Monomial, object]:
        r = self.r
        out = {(i, j + 1): r ** i}
        if i and self.hbar:
            out[(i - 1, j)] = -scalars.q_integer(i, r, self.field) * r * self.hbar
        return out


def _add_into(target: Dict[Monomial, object], mono: Monomial, value) -> None:
    total = target.get(mono)
    total = value if total is None else total + value
    if total:
        target[mono] = total
    else:
        target.pop(mono, None)


@dataclass(frozen=True, eq=False)
class NCPoly:
    """
    Σ c_ij x^i y^j in normal order; zero coefficients are never stored.
    """
    algebra: AlgebraSpec
    terms: Dict[Monomial, object]

    def __post_init__(self):
        clean = {mono: c for mono, c in self.terms.items() if c}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, algebra: AlgebraSpec, i: int, j: int, coeff=1) -> "NCPoly":
        return cls(algebra, {(i, j): algebra.field.convert(coeff)})

    @classmethod
    def constant(cls, algebra: AlgebraSpec, coeff) -> "NCPoly":
        return cls.monomial(algebra, 0, 0, coeff)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.algebra, frozenset(self.terms.items())))

    def _same(self, other: "NCPoly") -> None:
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra.name} vs {other.algebra.name}")

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, i: int, j: int):
        return self.terms.get((i, j), self.algebra.field.zero)

    def __add__(self, other: "NCPoly") -> "NCPoly":
        self._same(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            _add_into(out, mono, c)
        return NCPoly(self.algebra, out)

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        c = self.algebra.field.convert(c)
        return NCPoly(self.algebra, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return self.scale(other)
        self._same(other)
        algebra = self.algebra
        out: Dict[Monomial, object] = {}
        for (a, b), c1 in self.terms.items():
            for (c, d), c2 in other.terms.items():
                coeff = c1 * c2
                for (i, j), value in algebra.y_power_times_x_power(b, c).items():
                    _add_into(out, (a + i, j + d), coeff * value)
        return NCPoly(algebra, out)

    def __pow__(self, n: int) -> "NCPoly":
        result = self.algebra.one()
        for _ in range(n):
            result = result * self
        return result

    def commutator(self, other: "NCPoly") -> "NCPoly":
        return self * other - other * self

    # Gradings

    def support(self) -> List[Monomial]:
        return sorted(self.terms, key=lambda m: (m[0] + m[1], m[0]), reverse=True)

    def bidegree(self) -> Optional[Monomial]:
        """Common bidegree of all terms, None if inhomogeneous or zero."""
        degrees = set(self.terms)
        return degrees.pop() if len(degrees) == 1 else None

    def weights(self) -> set:
        return {i - j for i, j in self.terms}

    def leading_monomial(self) -> Optional[Monomial]:
        support = self.support()
        return support[0] if support else None

    def specialize(self, target: AlgebraSpec, q_value=None, hbar_value=None) -> "NCPoly":
        """Map coefficients into target's field (e.g. q -> 2) term by term."""
        terms = {
            mono: scalars.embed(c, self.algebra.field, target.field, q_value, hbar_value)
            for mono, c in self.terms.items()
        }
        return NCPoly(target, terms)

    def render(self) -> str:
        field = self.algebra.field
        pieces = [
            (scalars.render(self.terms[m], field), scalars.monomial_text(["x", "y"], m))
            for m in self.support()
        ]
        return scalars.join_terms(pieces)

    def __repr__(self) -> str:
        return f"NCPoly({self.algebra.name}: {self.render()})"


# Module-level operations


def normal_form(word: Iterable[str], algebra: AlgebraSpec, coeff=1) -> NCPoly:
    """
    Normal form of coeff·w_1·w_2·...·w_n for letters w_i in {"x", "y"}.

    Example:
        normal_form("yx", AlgebraSpec.weyl()) -> x*y - 1
    """
    letters = {"x": algebra.x(), "y": algebra.y()}
    result = NCPoly.constant(algebra, coeff)
    for letter in word:
        if letter not in letters:
            raise ValueError(f"unknown letter {letter!r}; words use x and y")
        result = result * letters[letter]
    return result


def add(a: NCPoly, b: NCPoly) -> NCPoly:
    return a + b


def mul(a: NCPoly, b: NCPoly) -> NCPoly:
    return a * b


def scalar_mul(c, a: NCPoly) -> NCPoly:
    return a.scale(c)


def commutator(a: NCPoly, b: NCPoly) -> NCPoly:
    return a.commutator(b)


def parse_ncpoly(text: str, algebra: AlgebraSpec) -> NCPoly:
    """
    Read "3/2*x^2*y + (1+q)*y^3" (products in the written order).

    Letters x and y do not commute; q, h, z are scalars of the field.
    """
    X = Symbol("x", commutative=False)
    Y = Symbol("y", commutative=False)
    local = {"x": X, "y": Y}
    local.update({name: Symbol(name) for name in ("q", "h", "z")})
    expr = sympy.expand(parse_expr(text.replace("^", "**"), local_dict=local))

    total = algebra.zero()
    for term in Add.make_args(expr):
        c_part, nc_part = term.args_cnc()
        coeff = scalars.from_expr(sympy.Mul(*c_part), algebra.field)
        word: List[str] = []
        for factor in nc_part:
            base, exp = factor.as_base_exp()
            word.extend([str(base)] * int(exp))
        total = total + normal_form(word, algebra, coeff)
    return total


# Center


def _monomial_sort_key(poly: NCPoly):
    i, j = poly.leading_monomial()
    return (i + j, -i)


def center_basis(algebra: AlgebraSpec, degree_bound: Tuple[int, int]) -> List[NCPoly]:
    """
    Basis of the central elements with exponents bounded by degree_bound.

    The conditions [c, x] = [c, y] = 0 are linear in c and respect the
    weight i - j, so one nullspace is computed per weight.
    """
    Dx, Dy = degree_bound
    if Dx < 0 or Dy < 0:
        raise ValueError(f"degree bound must be nonnegative, got {degree_bound}")
    x, y = algebra.x(), algebra.y()
    domain = algebra.field.domain

    basis: List[NCPoly] = []
    for weight in range(-Dy, Dx + 1):
        monomials = [(i, i - weight) for i in range(max(0, weight), Dx + 1) if 0 <= i - weight <= Dy]
        columns = []
        for i, j in monomials:
            e = NCPoly.monomial(algebra, i, j)
            column = {("x",) + m: c for m, c in e.commutator(x).terms.items()}
            column.update({("y",) + m: c for m, c in e.commutator(y).terms.items()})
            columns.append(column)
        for vector in kernel(columns, domain):
            terms = {mono: c for mono, c in zip(monomials, vector) if c}
            basis.append(NCPoly(algebra, terms))
        logger.debug("center weight %d: %d monomials", weight, len(monomials))

    return sorted(basis, key=_monomial_sort_key)


# Derivations


@dataclass(frozen=True, eq=False)
class Derivation:
    """
    A derivation given by its values on the generators.

    It is well defined exactly when the relation is respected:
    D(x)·y + x·D(y) - q·(D(y)·x + y·D(x)) = 0.
    """
    algebra: AlgebraSpec
    image_x: NCPoly
    image_y: NCPoly

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.image_x == other.image_x and self.image_y == other.image_y

    def __hash__(self) -> int:
        return hash((self.image_x, self.image_y))

    def compatibility_defect(self) -> NCPoly:
        alg = self.algebra
        x, y = alg.x(), alg.y()
        dx, dy = self.image_x, self.image_y
        return dx * y + x * dy - (dy * x + y * dx).scale(alg.q)

    def is_derivation(self) -> bool:
        return self.compatibility_defect().is_zero()

    def is_zero(self) -> bool:
        return self.image_x.is_zero() and self.image_y.is_zero()

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.algebra, self.image_x + other.image_x, self.image_y + other.image_y)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.algebra, self.image_x - other.image_x, self.image_y - other.image_y)

    def scale(self, c) -> "Derivation":
        return Derivation(self.algebra, self.image_x.scale(c), self.image_y.scale(c))

    def apply(self, a: NCPoly) -> NCPoly:
        """Extend from the generators by the Leibniz rule."""
        alg = self.algebra
        x, y = alg.x(), alg.y()
        powers_x = [alg.one()]
        powers_y = [alg.one()]
        top_i = max((i for i, _ in a.terms), default=0)
        top_j = max((j for _, j in a.terms), default=0)
        for _ in range(top_i):
            powers_x.append(powers_x[-1] * x)
        for _ in range(top_j):
            powers_y.append(powers_y[-1] * y)

        total = alg.zero()
        for (i, j), c in a.terms.items():
            piece = alg.zero()
            for k in range(i):
                piece = piece + powers_x[k] * self.image_x * powers_x[i - 1 - k] * powers_y[j]
            for k in range(j):
                piece = piece + powers_x[i] * powers_y[k] * self.image_y * powers_y[j - 1 - k]
            total = total + piece.scale(c)
        return total

    def leading_coefficients(self, bidegree: Monomial) -> Tuple[object, object]:
        """Coefficients of x^(u+1)y^v in D(x) and x^u y^(v+1) in D(y)."""
        u, v = bidegree
        return (self.image_x.coefficient(u + 1, v), self.image_y.coefficient(u, v + 1))

    def leading_part(self, bidegree: Monomial) -> Tuple[NCPoly, NCPoly]:
        """The top-degree pieces a·x^(u+1)y^v, b·x^u y^(v+1) of D(x), D(y)."""
        u, v = bidegree
        a, b = self.leading_coefficients(bidegree)
        alg = self.algebra
        return (
            NCPoly.monomial(alg, u + 1, v, a) if u + 1 >= 0 and v >= 0 else alg.zero(),
            NCPoly.monomial(alg, u, v + 1, b) if u >= 0 and v + 1 >= 0 else alg.zero(),
        )

    def render(self) -> str:
        return f"D(x) = {self.image_x.render()}, D(y) = {self.image_y.render()}"

    def __repr__(self) -> str:
        return f"Derivation({self.algebra.name}: {self.render()})"


def _derivation_unknowns(algebra: AlgebraSpec, bidegree: Monomial) -> List[Tuple[str, Monomial]]:
    u, v = bidegree
    depth = max(u, v) + 2 if algebra.hbar else 1
    unknowns = []
    for k in range(depth):
        for letter, mono in (("x", (u + 1 - k, v - k)), ("y", (u - k, v + 1 - k))):
            if mono[0] >= 0 and mono[1] >= 0:
                unknowns.append((letter, mono))
    return unknowns


def _unit_derivation(algebra: AlgebraSpec, letter: str, mono: Monomial) -> Derivation:
    e = NCPoly.monomial(algebra, *mono)
    zero = algebra.zero()
    return Derivation(algebra, e, zero) if letter == "x" else Derivation(algebra, zero, e)


def derivation_basis(algebra: AlgebraSpec, bidegree: Monomial) -> List[Derivation]:
    """
    Derivations whose leading bidegree is (u, v).

    D(x) is sought in the span of x^(u+1-k) y^(v-k) and D(y) in the span of
    x^(u-k) y^(v+1-k), k >= 0 (only k = 0 when h = 0, where the grading
    survives). The returned derivations have linearly independent leading
    parts, in reduced echelon form on the leading coefficients, and span the
    solutions modulo those of lower leading bidegree.
    """
    u, v = bidegree
    if u < -1 or v < -1:
        raise OutOfRange(f"derivation bidegree must be >= (-1, -1), got {bidegree}")

    unknowns = _derivation_unknowns(algebra, bidegree)
    if not unknowns:
        return []
    units = [_unit_derivation(algebra, letter, mono) for letter, mono in unknowns]
    columns = [dict(unit.compatibility_defect().terms) for unit in units]
    domain = algebra.field.domain
    solutions = kernel(columns, domain)

    leading = [n for n, (letter, mono) in enumerate(unknowns) if sum(mono) == u + v + 1]
    rest = [n for n in range(len(unknowns)) if n not in leading]
    order = leading + rest
    zero = Derivation(algebra, algebra.zero(), algebra.zero())
    rows, pivots = echelon_rows([[vec[n] for n in order] for vec in solutions], domain)

    basis = []
    for row, pivot in zip(rows, pivots):
        if pivot >= len(leading):
            continue
        vector = [domain.zero] * len(unknowns)
        for position, n in enumerate(order):
            vector[n] = row[position]
        basis.append(combine(vector, units, zero))
    logger.debug("derivations at %s in %s: %d", bidegree, algebra.name, len(basis))
    return basis


def inner_derivation(c: NCPoly) -> Derivation:
    """ad c: a -> [c, a]."""
    alg = c.algebra
    return Derivation(alg, c.commutator(alg.x()), c.commutator(alg.y()))


def annihilates_center(D: Derivation, degree_bound: Tuple[int, int]) -> bool:
    """True iff D kills every central element within degree_bound."""
    return all(D.apply(c).is_zero() for c in center_basis(D.algebra, degree_bound))


def twisted_relation_check(n: int) -> NCPoly:
    """
    Defect of xY - q·Y·x - h·x^n for Y = y + x^(n-1)·h/(1-q) in the quantum plane.

    The quantum plane is taken over QQ(q, h) with h as a plain scalar; a
    zero result shows the relation xy - q·yx = h·x^n is a change of
    variables away from xy - q·yx = 0.
    """
    field = ScalarField.ratfunc(hbar=True)
    algebra = AlgebraSpec.quantum_plane(field)
    x, y = algebra.x(), algebra.y()
    shift = field.h / (field.one - field.q)
    Y = y + NCPoly.monomial(algebra, n - 1, 0, shift)
    return x * Y - (Y * x).scale(algebra.q) - NCPoly.monomial(algebra, n, 0, field.h)
