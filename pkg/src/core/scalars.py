"""
DefCoh - Exact Scalar Fields

Coefficient fields for every computation in the workbench: QQ, rational
functions in q (optionally also in h), cyclotomic fields QQ(zeta_N), and
h-truncated power series over any of these.

Elements are plain sympy domain elements (mpq, FracElement, ANP). A
ScalarField descriptor pins down which domain an element must live in;
the module-level arithmetic checks membership so that elements of
different towers are never mixed silently.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Optional, Sequence, Tuple

import sympy
from sympy import QQ, Poly, Symbol, fraction, together
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.polyclasses import ANP
from sympy.polys.rings import ring
from sympy.polys.ring_series import rs_mul, rs_series_inversion

from .exceptions import (
    DivisibilityError,
    DivisionByZero,
    IncompatibleFields,
    InvalidParameters,
    NoEmbedding,
    PoleAtSpecialization,
)

logger = logging.getLogger(__name__)


class FieldKind(Enum):
    RATIONAL = "rational"
    RATFUNC = "ratfunc"
    CYCLOTOMIC = "cyclotomic"


Q_NAME = "q"
HBAR_NAME = "h"
ZETA_NAME = "z"

# Series variable of HSeries; distinct from h so that fields containing h
# as a rational-function variable can still carry truncated series.
SERIES_NAME = "t"


@lru_cache(maxsize=None)
def _cyclotomic(order: int):
    return QQ.cyclotomic_field(order, alias=ZETA_NAME)


@lru_cache(maxsize=None)
def _build_domain(kind: FieldKind, order: int, hbar: bool):
    if kind == FieldKind.RATIONAL:
        return QQ.frac_field(Symbol(HBAR_NAME)) if hbar else QQ
    if kind == FieldKind.RATFUNC:
        symbols = [Symbol(Q_NAME)] + ([Symbol(HBAR_NAME)] if hbar else [])
        return QQ.frac_field(*symbols)
    # zeta_1 = 1 and zeta_2 = -1 are rational
    ground = QQ if order <= 2 else _cyclotomic(order)
    return ground.frac_field(Symbol(HBAR_NAME)) if hbar else ground


@dataclass(frozen=True)
class ScalarField:
    """
    Descriptor of an exact coefficient field.

    kind/order select QQ, QQ(q) or QQ(zeta_order); hbar adjoins h as a
    rational-function variable (QQ(h), QQ(q, h), QQ(zeta)(h)).
    """
    kind: FieldKind = FieldKind.RATIONAL
    order: int = 0
    hbar: bool = False

    def __post_init__(self):
        if self.kind == FieldKind.CYCLOTOMIC and self.order < 1:
            raise ValueError(f"cyclotomic order must be >= 1, got {self.order}")
        if self.kind != FieldKind.CYCLOTOMIC and self.order != 0:
            raise ValueError("order is only meaningful for cyclotomic fields")

    # Constructors

    @classmethod
    def rational(cls, hbar: bool = False) -> "ScalarField":
        return cls(FieldKind.RATIONAL, 0, hbar)

    @classmethod
    def ratfunc(cls, hbar: bool = False) -> "ScalarField":
        return cls(FieldKind.RATFUNC, 0, hbar)

    @classmethod
    def cyclotomic(cls, order: int, hbar: bool = False) -> "ScalarField":
        return cls(FieldKind.CYCLOTOMIC, order, hbar)

    def with_hbar(self) -> "ScalarField":
        return replace(self, hbar=True)

    def without_hbar(self) -> "ScalarField":
        return replace(self, hbar=False)

    # Domain access

    @property
    def domain(self):
        return _build_domain(self.kind, self.order, self.hbar)

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    @property
    def symbols(self) -> Tuple[str, ...]:
        """Names of the transcendental generators, in domain order."""
        names = (Q_NAME,) if self.kind == FieldKind.RATFUNC else ()
        return names + ((HBAR_NAME,) if self.hbar else ())

    @property
    def q(self):
        """The distinguished q: the variable of QQ(q) or zeta_N."""
        if self.kind == FieldKind.RATFUNC:
            return self.domain.from_sympy(Symbol(Q_NAME))
        if self.kind == FieldKind.CYCLOTOMIC:
            if self.order == 1:
                return self.one
            if self.order == 2:
                return -self.one
            return self._from_algebraic(_cyclotomic(self.order).unit)
        raise NoEmbedding(f"{self.describe()} has no q generator")

    @property
    def h(self):
        if not self.hbar:
            raise NoEmbedding(f"{self.describe()} has no h variable")
        return self.domain.from_sympy(Symbol(HBAR_NAME))

    def describe(self) -> str:
        if self.kind == FieldKind.RATFUNC:
            return "QQ(q,h)" if self.hbar else "QQ(q)"
        base = "QQ" if self.kind == FieldKind.RATIONAL else f"zeta_{self.order}"
        return base + ("(h)" if self.hbar else "")

    # Element handling

    def _from_algebraic(self, a: ANP):
        algebraic = _cyclotomic(self.order)
        if self.domain == algebraic:
            return a
        return self.domain.convert_from(a, algebraic)

    def convert(self, value):
        """Bring ints, Fractions, rationals or same-tower elements into the domain."""
        domain = self.domain
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(value, int):
            return domain.convert(value)
        if isinstance(value, Fraction):
            return domain.convert_from(QQ(value.numerator, value.denominator), QQ)
        if QQ.of_type(value):
            return domain.convert_from(value, QQ)
        if isinstance(value, ANP):
            if self.kind != FieldKind.CYCLOTOMIC or self.order <= 2:
                raise IncompatibleFields(f"algebraic number not in {self.describe()}")
            if value.mod != _cyclotomic(self.order).mod.to_list():
                raise IncompatibleFields("algebraic number from another cyclotomic field")
            return self._from_algebraic(value)
        if self.contains(value):
            return value
        raise IncompatibleFields(f"cannot read {value!r} as an element of {self.describe()}")

    def contains(self, a) -> bool:
        domain = self.domain
        if domain.is_AlgebraicField:
            return isinstance(a, ANP) and a.mod == domain.mod.to_list()
        if domain.is_FractionField:
            return getattr(a, "field", None) == domain.field
        return QQ.of_type(a)

    def is_zero(self, a) -> bool:
        return not a


def _check(a, field: ScalarField):
    if isinstance(a, int) and not isinstance(a, bool):
        return field.convert(a)
    if not field.contains(a):
        raise IncompatibleFields(f"{a!r} is not an element of {field.describe()}")
    return a


def add(a, b, field: ScalarField):
    return _check(a, field) + _check(b, field)


def sub(a, b, field: ScalarField):
    return _check(a, field) - _check(b, field)


def mul(a, b, field: ScalarField):
    return _check(a, field) * _check(b, field)


def div(a, b, field: ScalarField):
    a, b = _check(a, field), _check(b, field)
    if not b:
        raise DivisionByZero(f"division by zero in {field.describe()}")
    return a / b


def inverse(a, field: ScalarField):
    return div(field.one, a, field)


def power(a, n: int, field: ScalarField):
    a = _check(a, field)
    if n < 0:
        return inverse(a, field) ** (-n)
    return a ** n


def q_integer(n: int, q, field: ScalarField):
    """
    q-analogue of n.

    Formula: n_q = 1 + q + q² + ... + q^(n-1), with 0_q = 0

    Args:
        n: Nonnegative integer
        q: Element of field

    Returns:
        n_q as an element of field
    """
    if n < 0:
        raise ValueError(f"q-integer needs n >= 0, got {n}")
    q = _check(q, field)
    total = field.zero
    term = field.one
    for _ in range(n):
        total += term
        term *= q
    return total


# Embeddings


def _evaluate(poly, names: Sequence[str], values: Dict[str, object], target, source_ground):
    """Evaluate a PolyElement at per-generator values inside target.domain."""
    domain = target.domain
    total = domain.zero
    for monom, coeff in poly.terms():
        if source_ground == domain:
            term = coeff
        else:
            term = domain.convert_from(coeff, source_ground)
        for name, exp in zip(names, monom):
            if exp:
                term *= values[name] ** exp
        total += term
    return total


def embed(a, source: ScalarField, target: ScalarField, q_value=None, hbar_value=None):
    """
    Image of a under the ring map source -> target.

    q maps to q_value when given (a specialization), otherwise to the q of
    target; h likewise. Ground coefficients (QQ or QQ(zeta_N)) map by the
    unit map, which requires target to contain them.

    Raises:
        NoEmbedding: target lacks a needed generator or ground field
        PoleAtSpecialization: a denominator vanishes at the chosen values
    """
    a = _check(a, source)

    if source.kind == FieldKind.CYCLOTOMIC and source.order > 2:
        same_ground = target.kind == FieldKind.CYCLOTOMIC and target.order == source.order
        if not same_ground:
            raise NoEmbedding(f"{source.describe()} does not embed in {target.describe()}")
        if q_value is not None:
            raise NoEmbedding("zeta is algebraic and cannot be specialized")

    values: Dict[str, object] = {}
    for name in source.symbols:
        given = q_value if name == Q_NAME else hbar_value
        if given is not None:
            values[name] = target.convert(given)
        elif name == Q_NAME and target.kind == FieldKind.RATFUNC:
            values[name] = target.q
        elif name == HBAR_NAME and target.hbar:
            values[name] = target.h
        else:
            raise NoEmbedding(f"{name} of {source.describe()} has no image in {target.describe()}")

    domain = source.domain
    if not domain.is_FractionField:
        return target.convert(a)

    ground = domain.domain
    names = source.symbols
    numer = _evaluate(a.numer, names, values, target, ground)
    denom = _evaluate(a.denom, names, values, target, ground)
    if not denom:
        raise PoleAtSpecialization(
            f"denominator of {render(a, source)} vanishes at {values_text(values, target)}"
        )
    return numer / denom


def values_text(values: Dict[str, object], field: ScalarField) -> str:
    return ", ".join(f"{k}={render(v, field)}" for k, v in sorted(values.items()))


def hbar_valuation(a, field: ScalarField) -> Optional[int]:
    """
    Order of vanishing of a at h = 0; None for a = 0.

    Negative values mean a pole at h = 0.
    """
    a = _check(a, field)
    if not a:
        return None
    if not field.hbar:
        return 0
    index = field.symbols.index(HBAR_NAME)

    def lowest(poly):
        return min(monom[index] for monom in poly.keys())

    return lowest(a.numer) - lowest(a.denom)


# Rendering and parsing


def _render_rational(c) -> str:
    numer, denom = QQ.numer(c), QQ.denom(c)
    return f"{numer}" if denom == 1 else f"{numer}/{denom}"


def monomial_text(names: Sequence[str], monom: Sequence[int]) -> str:
    parts = []
    for name, exp in zip(names, monom):
        if exp == 1:
            parts.append(name)
        elif exp > 1:
            parts.append(f"{name}^{exp}")
    return "*".join(parts)


def join_terms(pieces) -> str:
    """
    Join (coefficient text, monomial text) pairs into a signed sum.

    A coefficient that is itself a sum is parenthesized; unit
    coefficients are dropped in front of a monomial.
    """
    out = []
    for coeff, mono in pieces:
        if not mono:
            text = coeff
        elif coeff == "1":
            text = mono
        elif coeff == "-1":
            text = "-" + mono
        elif _is_compound(coeff):
            text = f"({coeff})*{mono}"
        else:
            text = f"{coeff}*{mono}"
        out.append(text)
    if not out:
        return "0"
    joined = out[0]
    for text in out[1:]:
        joined += f" - {text[1:]}" if text.startswith("-") else f" + {text}"
    return joined


def _is_compound(text: str) -> bool:
    body = text[1:] if text.startswith("-") else text
    return "+" in body or "-" in body or " " in body


def _compact(text: str) -> str:
    return text.replace(" + ", "+").replace(" - ", "-")


def _render_ground(c, ground) -> str:
    if ground.is_AlgebraicField:
        coeffs = c.to_list()
        degree = len(coeffs) - 1
        pieces = [
            (_render_rational(value), monomial_text([ZETA_NAME], [degree - i]))
            for i, value in enumerate(coeffs)
            if value
        ]
        return _compact(join_terms(pieces))
    return _render_rational(c)


def render_poly(poly, names, ground) -> str:
    pieces = [
        (_render_ground(coeff, ground), monomial_text(names, monom))
        for monom, coeff in sorted(poly.terms(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
    ]
    return _compact(join_terms(pieces))


def _wrap(text: str) -> str:
    if _is_compound(text) or "*" in text or "/" in text:
        return f"({text})"
    return text


def render(a, field: ScalarField) -> str:
    """
    Canonical text of a scalar.

    Rationals render as "p/q", rational functions as "(num)/(den)" in q and
    h, cyclotomic numbers as polynomials in z (the field header "zeta_N"
    names the root). Output contains no spaces.
    """
    a = _check(a, field)
    domain = field.domain
    if domain.is_FractionField:
        ground = domain.domain
        numer = render_poly(a.numer, field.symbols, ground)
        denom = render_poly(a.denom, field.symbols, ground)
        if denom == "1":
            return numer
        return f"{_wrap(numer)}/{_wrap(denom)}"
    return _render_ground(a, domain)


def parse(text: str, field: ScalarField):
    """
    Read a scalar from text ("3/2", "(1+q)/(1-q^2)", "z^2+1", "1/h").

    Raises:
        IncompatibleFields: the text names a generator the field lacks
        DivisionByZero: the denominator is zero
    """
    allowed = {name: Symbol(name) for name in (Q_NAME, HBAR_NAME, ZETA_NAME)}
    expr = parse_expr(text.replace("^", "**"), local_dict=allowed)
    return from_expr(expr, field)


def from_expr(expr, field: ScalarField):
    """Evaluate a sympy expression in q, h, z inside field."""
    numer, denom = fraction(together(sympy.sympify(expr)))
    value_denom = _poly_value(denom, field)
    if not value_denom:
        raise DivisionByZero(f"zero denominator in {expr}")
    return _poly_value(numer, field) / value_denom


def _generator_value(name: str, field: ScalarField):
    if name == ZETA_NAME and field.kind == FieldKind.CYCLOTOMIC:
        return field.q
    if name == Q_NAME and field.kind == FieldKind.RATFUNC:
        return field.q
    if name == HBAR_NAME and field.hbar:
        return field.h
    raise IncompatibleFields(f"{name} is not a generator of {field.describe()}")


def _poly_value(expr, field: ScalarField):
    gens = sorted(expr.free_symbols, key=str)
    if not gens:
        return field.convert(QQ.from_sympy(expr))
    values = [_generator_value(str(g), field) for g in gens]
    total = field.zero
    for monom, coeff in Poly(expr, *gens, domain=QQ).as_dict().items():
        term = field.convert(QQ.from_sympy(coeff))
        for value, exp in zip(values, monom):
            if exp:
                term *= value ** exp
        total += term
    return total


def parse_descriptor(text: str) -> Tuple[str, object]:
    """
    Read a q or h descriptor.

    Returns:
        ("symbolic", None), ("zeta", N) or ("value", Fraction)
    """
    text = text.strip()
    if text == "symbolic":
        return ("symbolic", None)
    if text.startswith("zeta:"):
        try:
            order = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise InvalidParameters(f"zeta:N needs an integer N, got {text!r}") from exc
        if order < 1:
            raise InvalidParameters(f"zeta order must be >= 1, got {order}")
        return ("zeta", order)
    try:
        return ("value", Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameters(f"expected symbolic, zeta:N or a rational, got {text!r}") from exc


# Truncated power series


@lru_cache(maxsize=None)
def _series_ring(field: ScalarField):
    return ring(SERIES_NAME, field.domain)


@dataclass(frozen=True)
class HSeries:
    """
    c_0 + c_1·h + ... + c_K·h^K (mod h^{K+1}) over a scalar field.

    Binary operations truncate to the smaller order of the operands.
    """
    field: ScalarField
    coeffs: Tuple[object, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, field: ScalarField, coeffs: Sequence, order: int) -> "HSeries":
        values = [field.convert(c) for c in coeffs[: order + 1]]
        values += [field.zero] * (order + 1 - len(values))
        return cls(field, tuple(values))

    @classmethod
    def constant(cls, field: ScalarField, c, order: int) -> "HSeries":
        return cls.from_coeffs(field, [c], order)

    @classmethod
    def exp(cls, field: ScalarField, order: int, scale=1) -> "HSeries":
        """exp(scale·h) truncated at order."""
        scale = field.convert(scale)
        coeffs, term = [], field.one
        for i in range(order + 1):
            coeffs.append(term * field.convert(Fraction(1, factorial(i))))
            term = term * scale
        return cls.from_coeffs(field, coeffs, order)

    def _poly(self, order: int):
        R, t = _series_ring(self.field)
        return R.from_dict({(i,): c for i, c in enumerate(self.coeffs[: order + 1]) if c}), t

    def _from_poly(self, poly, order: int) -> "HSeries":
        coeffs = [poly.get((i,), self.field.zero) for i in range(order + 1)]
        return HSeries(self.field, tuple(coeffs))

    def _align(self, other: "HSeries") -> int:
        if other.field != self.field:
            raise IncompatibleFields(
                f"series over {self.field.describe()} and {other.field.describe()}"
            )
        return min(self.order, other.order)

    def __add__(self, other: "HSeries") -> "HSeries":
        order = self._align(other)
        return HSeries(self.field, tuple(a + b for a, b in zip(self.coeffs[: order + 1], other.coeffs)))

    def __sub__(self, other: "HSeries") -> "HSeries":
        order = self._align(other)
        return HSeries(self.field, tuple(a - b for a, b in zip(self.coeffs[: order + 1], other.coeffs)))

    def __neg__(self) -> "HSeries":
        return HSeries(self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, other: "HSeries") -> "HSeries":
        order = self._align(other)
        p1, t = self._poly(order)
        p2, _ = other._poly(order)
        return self._from_poly(rs_mul(p1, p2, t, order + 1), order)

    def __truediv__(self, other: "HSeries") -> "HSeries":
        order = self._align(other)
        if not other.coeffs[0]:
            raise DivisionByZero("series division needs an invertible constant term")
        p1, t = self._poly(order)
        p2, _ = other._poly(order)
        inverse = rs_series_inversion(p2, t, order + 1)
        return self._from_poly(rs_mul(p1, inverse, t, order + 1), order)

    def scale(self, c) -> "HSeries":
        c = _check(c, self.field)
        return HSeries(self.field, tuple(c * a for a in self.coeffs))

    def valuation(self) -> Optional[int]:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def divide_by_h(self) -> "HSeries":
        """Shift down one order; the constant term must vanish."""
        if self.coeffs[0]:
            raise DivisibilityError(f"series {self.render()} is not divisible by h")
        if self.order == 0:
            raise DivisibilityError("dividing an order-0 series by h leaves no terms")
        return HSeries(self.field, self.coeffs[1:])

    def render(self) -> str:
        pieces = [
            (render(c, self.field), monomial_text(["h"], [i]))
            for i, c in enumerate(self.coeffs)
            if c
        ]
        K = self.order
        return f"{join_terms(pieces)} (mod h^{K + 1})"
