"""
DefCoh - Polydifferential Hochschild Cochains

Cochains on k[x,y] are finite sums of terms

    coeff(x, y, h) · ∂^(a1,b1) ⊗ ... ⊗ ∂^(an,bn)

acting by F(p1, ..., pn) = Σ coeff · Π ∂x^a_t ∂y^b_t p_t. Coefficients may
involve the deformation parameter h; such layered cochains carry a
truncation order K and are reduced mod h^(K+1) after every operation.

Conventions (docs/03-cochain-calculus.md):
  - F∘G = Σ_i (-1)^((q-1)i) F(a_1, ..., G(a_(i+1), ..., a_(i+q)), ...)
  - [F, G] = F∘G - (-1)^((p-1)(q-1)) G∘F
  - δz = -[z, m]
  - (F⌣G)(a, b) = m(F(a), G(b))

Every "is this a coboundary" question is an exact linear solve over the
finite basis of a CochainWindow, escalated a few times before the answer
NONE is reported together with the window it was reached in.
"""

import logging
from dataclasses import dataclass, field as dc_field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Symbol
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.rings import PolyElement, ring

from . import scalars
from .exceptions import (
    AlgebraMismatch,
    DivisibilityError,
    IncompatibleFields,
    InhomogeneousCochain,
    InvalidParameters,
    NotACocycle,
    OutOfRange,
)
from .scalars import ScalarField
from ..utils.linalg import Column, combine, echelon_rows, independent_columns, kernel, solve

logger = logging.getLogger(__name__)

Slot = Tuple[int, int]
Slots = Tuple[Slot, ...]

# Defaults
DEFAULT_ORDER = 6
MAX_ESCALATIONS = 3
ORDER_ESCALATION = 1
DEGREE_ESCALATION = 2

COEFFICIENT_NAMES = ("x", "y", "h")
SLOT_NAMES = ("dx", "dy")


@lru_cache(maxsize=None)
def coefficient_ring(field: ScalarField):
    """K[x, y, h] over the scalar domain."""
    if field.hbar:
        raise IncompatibleFields(
            f"cochain coefficients carry their own h; use {field.without_hbar().describe()}"
        )
    R, _, _, _ = ring(",".join(COEFFICIENT_NAMES), field.domain)
    return R


def parse_poly(text: str, field: Optional[ScalarField] = None):
    """Read a commutative polynomial in x, y, h ("x^2*y - 1/2*h")."""
    R = coefficient_ring(field or ScalarField.rational())
    names = {name: Symbol(name) for name in COEFFICIENT_NAMES}
    try:
        return R.from_expr(parse_expr(text.replace("^", "**"), local_dict=names))
    except (ValueError, SyntaxError, TypeError) as exc:
        raise InvalidParameters(f"not a polynomial in x, y, h: {text!r}") from exc


# Polynomial helpers


def _falling(n: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= n - t
    return out


def _derivative(p, a: int, b: int):
    """∂x^a ∂y^b p."""
    if not a and not b:
        return p
    R = p.ring
    out = {}
    for (i, j, k), c in p.items():
        if i >= a and j >= b:
            out[(i - a, j - b, k)] = c * R.domain.convert(_falling(i, a) * _falling(j, b))
    return R.from_dict(out)


def _truncate(p, order: Optional[int]):
    if order is None or all(monom[2] <= order for monom in p):
        return p
    return p.ring.from_dict({m: c for m, c in p.items() if m[2] <= order})


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> Tuple[Tuple[int, ...], ...]:
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


def _multinomial(total: int, parts: Sequence[int]) -> int:
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def _meet(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_into(target: Dict[Slots, object], key: Slots, poly) -> None:
    total = target.get(key)
    total = poly if total is None else total + poly
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def _slot_text(slot: Slot) -> str:
    return scalars.monomial_text(SLOT_NAMES, slot) or "id"


# Cochains


@dataclass(frozen=True, eq=False)
class PolyDiffCochain:
    """
    A polydifferential cochain of fixed arity.

    terms maps a tuple of slots (one (a, b) per argument, meaning ∂x^a ∂y^b)
    to its coefficient in K[x, y, h]. order is the h-truncation K; None for
    cochains whose coefficients are exact.
    """
    arity: int
    terms: Dict[Slots, object]
    field: ScalarField = dc_field(default_factory=ScalarField.rational)
    order: Optional[int] = None

    def __post_init__(self):
        R = coefficient_ring(self.field)
        clean: Dict[Slots, object] = {}
        for slots, coeff in self.terms.items():
            slots = tuple((int(a), int(b)) for a, b in slots)
            if len(slots) != self.arity:
                raise ValueError(f"term {slots} does not have arity {self.arity}")
            poly = _truncate(R(coeff), self.order)
            if poly:
                _add_into(clean, slots, poly)
        object.__setattr__(self, "terms", clean)

    # Constructors

    @classmethod
    def zero(cls, arity: int, field: Optional[ScalarField] = None, order: Optional[int] = None):
        return cls(arity, {}, field or ScalarField.rational(), order)

    @classmethod
    def element(cls, poly, field: Optional[ScalarField] = None) -> "PolyDiffCochain":
        return cls(0, {(): poly}, field or ScalarField.rational())

    @classmethod
    def multiplication(cls, field: Optional[ScalarField] = None) -> "PolyDiffCochain":
        return cls(2, {((0, 0), (0, 0)): 1}, field or ScalarField.rational())

    @classmethod
    def partial(cls, a: int, b: int, coeff=1, field: Optional[ScalarField] = None):
        """coeff·∂x^a ∂y^b as a 1-cochain."""
        return cls(1, {((a, b),): coeff}, field or ScalarField.rational())

    @classmethod
    def vector_field(cls, a, b, field: Optional[ScalarField] = None) -> "PolyDiffCochain":
        """a∂x + b∂y."""
        return cls.partial(1, 0, a, field) + cls.partial(0, 1, b, field)

    @classmethod
    def from_derivation(cls, D) -> "PolyDiffCochain":
        """The vector field of a derivation of the commutative member k[x,y]."""
        algebra = D.algebra
        if not algebra.is_commutative():
            raise AlgebraMismatch(f"{algebra.name} is not commutative; no vector field")
        R = coefficient_ring(algebra.field)

        def lift(p):
            return R.from_dict({(i, j, 0): c for (i, j), c in p.terms.items()})

        return cls.vector_field(lift(D.image_x), lift(D.image_y), algebra.field)

    # Shape

    @property
    def ring(self):
        return coefficient_ring(self.field)

    def is_zero(self) -> bool:
        return not self.terms

    def max_order(self) -> int:
        """Largest total differential order of a term."""
        return max((sum(a + b for a, b in slots) for slots in self.terms), default=0)

    def max_degree(self) -> int:
        """Largest (x, y)-degree of a coefficient monomial."""
        return max((m[0] + m[1] for poly in self.terms.values() for m in poly), default=0)

    def h_degree(self) -> int:
        return max((m[2] for poly in self.terms.values() for m in poly), default=0)

    def bidegrees(self) -> set:
        found = set()
        for slots, poly in self.terms.items():
            da = sum(a for a, _ in slots)
            db = sum(b for _, b in slots)
            for monom in poly:
                found.add((monom[0] - da, monom[1] - db))
        return found

    def bidegree(self) -> Slot:
        found = self.bidegrees()
        if len(found) != 1:
            raise InhomogeneousCochain(
                f"cochain {self.render()} has bidegrees {sorted(found)}"
            )
        return found.pop()

    def component(self, j: int) -> "PolyDiffCochain":
        """Coefficient of h^j, as an exact cochain."""
        R = self.ring
        terms = {}
        for slots, poly in self.terms.items():
            part = R.from_dict({(a, b, 0): c for (a, b, k), c in poly.items() if k == j})
            if part:
                terms[slots] = part
        return PolyDiffCochain(self.arity, terms, self.field)

    def components(self) -> List["PolyDiffCochain"]:
        top = self.h_degree() if self.order is None else self.order
        return [self.component(j) for j in range(top + 1)]

    def leading_component(self) -> "PolyDiffCochain":
        """Lowest nonzero h-layer (the cochain itself when it is exact)."""
        for part in self.components():
            if not part.is_zero():
                return part
        return self.component(0)

    # Arithmetic

    def _check(self, other: "PolyDiffCochain") -> None:
        if not isinstance(other, PolyDiffCochain) or other.field != self.field:
            raise AlgebraMismatch("cochains over different scalar fields")
        if other.arity != self.arity:
            raise ValueError(f"cannot add arities {self.arity} and {other.arity}")

    def __add__(self, other: "PolyDiffCochain") -> "PolyDiffCochain":
        self._check(other)
        terms = dict(self.terms)
        for slots, poly in other.terms.items():
            _add_into(terms, slots, poly)
        return PolyDiffCochain(self.arity, terms, self.field, _meet(self.order, other.order))

    def __neg__(self) -> "PolyDiffCochain":
        return PolyDiffCochain(self.arity, {s: -p for s, p in self.terms.items()}, self.field, self.order)

    def __sub__(self, other: "PolyDiffCochain") -> "PolyDiffCochain":
        return self + (-other)

    def scale(self, c) -> "PolyDiffCochain":
        """Multiply by a scalar or by a polynomial in x, y, h."""
        R = self.ring
        if isinstance(c, PolyElement) and c.ring == R:
            factor = c
        else:
            factor = R.ground_new(self.field.convert(c))
        return PolyDiffCochain(
            self.arity, {s: p * factor for s, p in self.terms.items()}, self.field, self.order
        )

    def shift(self, k: int) -> "PolyDiffCochain":
        """Multiply by h^k."""
        if not k:
            return self
        R = self.ring
        terms = {
            s: R.from_dict({(a, b, e + k): c for (a, b, e), c in p.items()})
            for s, p in self.terms.items()
        }
        order = None if self.order is None else self.order + k
        return PolyDiffCochain(self.arity, terms, self.field, order)

    def truncate(self, order: Optional[int]) -> "PolyDiffCochain":
        return PolyDiffCochain(self.arity, self.terms, self.field, _meet(self.order, order))

    def divide_by_h(self) -> "PolyDiffCochain":
        R = self.ring
        terms = {}
        for slots, poly in self.terms.items():
            if any(monom[2] == 0 for monom in poly):
                raise DivisibilityError(f"{self.render()} is not divisible by h")
            terms[slots] = R.from_dict({(a, b, e - 1): c for (a, b, e), c in poly.items()})
        order = None if self.order is None else self.order - 1
        return PolyDiffCochain(self.arity, terms, self.field, order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyDiffCochain):
            return NotImplemented
        return self.arity == other.arity and self.field == other.field and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms)))

    # Evaluation

    def __call__(self, *args):
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        R = self.ring
        polys = [R(a) for a in args]
        total = R.zero
        for slots, coeff in self.terms.items():
            value = coeff
            for (a, b), p in zip(slots, polys):
                value = value * _derivative(p, a, b)
                if not value:
                    break
            total += value
        return _truncate(total, self.order)

    def flatten(self) -> Column:
        """{(slots, coefficient monomial): coefficient}, the column of a linear system."""
        return {(slots, monom): c for slots, poly in self.terms.items() for monom, c in poly.items()}

    def render(self) -> str:
        ground = self.field.domain
        if self.arity == 0:
            return scalars.render_poly(self.terms.get((), self.ring.zero), COEFFICIENT_NAMES, ground)
        pieces = []
        for slots in sorted(self.terms, reverse=True):
            coeff = scalars.render_poly(self.terms[slots], COEFFICIENT_NAMES, ground)
            pieces.append((coeff, "[" + "|".join(_slot_text(s) for s in slots) + "]"))
        text = scalars.join_terms(pieces)
        if self.order is not None:
            text += f" (mod h^{self.order + 1})"
        return text

    def __repr__(self) -> str:
        return f"PolyDiffCochain({self.arity}: {self.render()})"


def _same_field(F: PolyDiffCochain, G: PolyDiffCochain) -> None:
    if F.field != G.field:
        raise AlgebraMismatch(f"cochains over {F.field.describe()} and {G.field.describe()}")


def _as_multiplication(m, field: ScalarField) -> PolyDiffCochain:
    """Plain multiplication, a (layered) 2-cochain, or anything with layered()."""
    if m is None:
        return PolyDiffCochain.multiplication(field)
    if isinstance(m, PolyDiffCochain):
        return m
    return m.layered()


# Composition, bracket, cup


def _insert(F: PolyDiffCochain, G: PolyDiffCochain, i: int) -> PolyDiffCochain:
    """F with the output of G substituted into argument i (Leibniz expansion)."""
    terms: Dict[Slots, object] = {}
    parts = G.arity + 1
    for f_slots, f in F.terms.items():
        ax, ay = f_slots[i]
        head, tail = f_slots[:i], f_slots[i + 1:]
        for g_slots, g in G.terms.items():
            for sx in _compositions(ax, parts):
                cx = _multinomial(ax, sx)
                for sy in _compositions(ay, parts):
                    dg = _derivative(g, sx[0], sy[0])
                    if not dg:
                        continue
                    inner = tuple(
                        (bx + tx, by + ty) for (bx, by), tx, ty in zip(g_slots, sx[1:], sy[1:])
                    )
                    _add_into(terms, head + inner + tail, f * dg * (cx * _multinomial(ay, sy)))
    return PolyDiffCochain(F.arity + G.arity - 1, terms, F.field, _meet(F.order, G.order))


def compose(F: PolyDiffCochain, G: PolyDiffCochain) -> PolyDiffCochain:
    """Operator composition a ↦ F(G(a)) of two 1-cochains."""
    _same_field(F, G)
    if F.arity != 1 or G.arity != 1:
        raise ValueError("compose takes two 1-cochains")
    return _insert(F, G, 0)


def identity(field: Optional[ScalarField] = None) -> PolyDiffCochain:
    return PolyDiffCochain.partial(0, 0, 1, field)


def circ(F: PolyDiffCochain, G: PolyDiffCochain) -> PolyDiffCochain:
    """Signed pre-Lie composition F∘G."""
    _same_field(F, G)
    p, q = F.arity, G.arity
    if p + q < 1:
        raise ValueError("the composition of two elements is undefined")
    total = PolyDiffCochain.zero(p + q - 1, F.field, _meet(F.order, G.order))
    for i in range(p):
        piece = _insert(F, G, i)
        total = total + (-piece if ((q - 1) * i) % 2 else piece)
    return total


def gerstenhaber(F: PolyDiffCochain, G: PolyDiffCochain) -> PolyDiffCochain:
    """
    Gerstenhaber bracket [F, G], of arity p + q - 1.

    Formula: [F, G] = F∘G - (-1)^((p-1)(q-1)) G∘F

    In low arity this reads [F1, F2](a, b) = F1(F2(a, b)) - F2(F1 a, b) - F2(a, F1 b)
    and [F1, c] = F1(c).
    """
    forward, backward = circ(F, G), circ(G, F)
    if ((F.arity - 1) * (G.arity - 1)) % 2:
        return forward + backward
    return forward - backward


def cup(F: PolyDiffCochain, G: PolyDiffCochain, m=None) -> PolyDiffCochain:
    """(F⌣G)(a_1..a_(p+q)) = m(F(a_1..a_p), G(a_(p+1)..))."""
    _same_field(F, G)
    M = _as_multiplication(m, F.field)
    return _insert(_insert(M, F, 0), G, F.arity)


def wedge(F: PolyDiffCochain, G: PolyDiffCochain, m=None) -> PolyDiffCochain:
    """F∧G = (F⌣G - G⌣F)/2."""
    return (cup(F, G, m) - cup(G, F, m)).scale(Fraction(1, 2))


def coboundary(z: PolyDiffCochain, m=None) -> PolyDiffCochain:
    """δz = -[z, m]; with a layered m this is δ_h mod h^(K+1)."""
    return -gerstenhaber(z, _as_multiplication(m, z.field))


def transpose(F: PolyDiffCochain) -> PolyDiffCochain:
    if F.arity != 2:
        raise ValueError("transpose is defined on 2-cochains")
    return PolyDiffCochain(2, {(s[1], s[0]): p for s, p in F.terms.items()}, F.field, F.order)


def skew_part(F: PolyDiffCochain) -> PolyDiffCochain:
    return (F - transpose(F)).scale(Fraction(1, 2))


def symmetric_part(F: PolyDiffCochain) -> PolyDiffCochain:
    return (F + transpose(F)).scale(Fraction(1, 2))


# Windows


@lru_cache(maxsize=None)
def _slot_tuples(arity: int, max_order: int) -> Tuple[Slots, ...]:
    if arity == 0:
        return ((),)
    singles = [(a, k - a) for k in range(1, max_order + 1) for a in range(k, -1, -1)]
    out: List[Slots] = []

    def extend(prefix: Slots, budget: int) -> None:
        if len(prefix) == arity:
            out.append(prefix)
            return
        reserve = arity - len(prefix) - 1
        for slot in singles:
            cost = slot[0] + slot[1]
            if cost + reserve <= budget:
                extend(prefix + (slot,), budget - cost)

    extend((), max_order)
    return tuple(out)


@dataclass(frozen=True)
class CochainWindow:
    """
    Finite slice of the normalized cochain complex.

    Terms have every slot of order >= 1, total differential order at most
    max_order, the given bidegree and a coefficient monomial of degree at
    most max_degree. Each slot multidegree summand of the complex is kept
    whole, so a window is a subcomplex.
    """
    arity: int
    bidegree: Slot
    max_order: int
    max_degree: int

    @classmethod
    def around(cls, cochain: PolyDiffCochain, arity: Optional[int] = None) -> "CochainWindow":
        """Smallest window holding cochain (at the given arity)."""
        return cls(
            cochain.arity if arity is None else arity,
            cochain.bidegree(),
            max(cochain.max_order(), 1),
            cochain.max_degree(),
        )

    @classmethod
    def default(cls, arity: int, bidegree: Slot) -> "CochainWindow":
        u, v = bidegree
        return cls(arity, bidegree, arity + 1, max(u + v + arity + 1, 0))

    @classmethod
    def parse(cls, text: str, arity: int, bidegree: Slot) -> "CochainWindow":
        """Read "order=2,deg=6"."""
        values = {}
        for part in text.split(","):
            key, _, value = part.partition("=")
            values[key.strip()] = value.strip()
        try:
            return cls(arity, bidegree, int(values["order"]), int(values["deg"]))
        except (KeyError, ValueError) as exc:
            raise InvalidParameters(f"window must look like order=2,deg=6, got {text!r}") from exc

    def escalate(self) -> "CochainWindow":
        return replace(
            self,
            max_order=self.max_order + ORDER_ESCALATION,
            max_degree=self.max_degree + DEGREE_ESCALATION,
        )

    def basis(self, field: Optional[ScalarField] = None) -> Tuple[PolyDiffCochain, ...]:
        return _window_basis(self, field or ScalarField.rational())

    def describe(self) -> str:
        return f"order={self.max_order},deg={self.max_degree}"


@lru_cache(maxsize=256)
def _window_basis(window: CochainWindow, field: ScalarField) -> Tuple[PolyDiffCochain, ...]:
    if window.arity < 0:
        return ()
    R = coefficient_ring(field)
    u, v = window.bidegree
    out = []
    for slots in _slot_tuples(window.arity, window.max_order):
        i = u + sum(a for a, _ in slots)
        j = v + sum(b for _, b in slots)
        if i < 0 or j < 0 or i + j > window.max_degree:
            continue
        out.append(PolyDiffCochain(window.arity, {slots: R.from_dict({(i, j, 0): 1})}, field))
    return tuple(out)


@dataclass(frozen=True)
class StarSteps:
    """How far one power of h moves bidegree, order and degree (read off m_1)."""
    bidegree: Slot = (0, 0)
    order: int = 0
    degree: int = 0

    @classmethod
    def of(cls, M: PolyDiffCochain) -> "StarSteps":
        if not M.order:
            return cls()
        m1 = M.component(1)
        if m1.is_zero():
            return cls()
        return cls(m1.bidegree(), m1.max_order(), m1.max_degree())

    def advance(
        self,
        base: CochainWindow,
        layer: int,
        arity: Optional[int] = None,
        lag: int = 0,
        degree_slack: int = 0,
    ) -> CochainWindow:
        """Window for the h^layer part of a layered unknown."""
        u, v = base.bidegree
        du, dv = self.bidegree
        return CochainWindow(
            base.arity if arity is None else arity,
            (u + (layer - lag) * du, v + (layer - lag) * dv),
            base.max_order + layer * self.order,
            base.max_degree + layer * self.degree + degree_slack,
        )


def _layer_image(
    e: PolyDiffCochain, series: Sequence[PolyDiffCochain], shift: int, top: int
) -> PolyDiffCochain:
    """δ_h(h^shift·e) mod h^(top+1) for an exact cochain e."""
    total = PolyDiffCochain.zero(e.arity + 1, e.field, top)
    for j, m_j in enumerate(series):
        if shift + j > top:
            break
        if not m_j.is_zero():
            total = total - gerstenhaber(e, m_j).shift(shift + j)
    return total.truncate(top)


def _restrict(column: Column, top: int) -> Column:
    return {key: c for key, c in column.items() if key[1][2] <= top}


def _tag(tag: str, column: Column) -> Column:
    return {(tag, key): c for key, c in column.items()}


def _series(M: PolyDiffCochain) -> Tuple[List[PolyDiffCochain], int]:
    top = M.order or 0
    return M.components() if M.order is not None else [M], top


def _require_cocycle(z: PolyDiffCochain, m: PolyDiffCochain) -> None:
    if not coboundary(z, m).is_zero():
        raise NotACocycle(f"δz != 0 for z = {z.render()}")


# Coboundaries


@dataclass
class CoboundarySolution:
    """Outcome of a window solve; witness is None when nothing in the window works."""
    target: PolyDiffCochain
    witness: Optional[PolyDiffCochain]
    window: CochainWindow
    escalations: int = 0

    @property
    def found(self) -> bool:
        return self.witness is not None

    def describe(self) -> str:
        if self.witness is None:
            return f"NONE-AT-WINDOW({self.window.describe()})"
        return self.witness.render()


def solve_coboundary(
    F: PolyDiffCochain,
    m=None,
    window: Optional[CochainWindow] = None,
    escalations: int = MAX_ESCALATIONS,
) -> CoboundarySolution:
    """
    Find f with δf = F inside a window of arity n - 1.

    With a layered m the unknown is itself layered, f = Σ h^i f_i, and the
    equation holds mod h^(K+1); the window of f_i moves with i by the steps
    of m_1.

    Raises:
        NotACocycle: δF != 0
    """
    if F.arity == 0:
        raise ValueError("an element is never a coboundary")
    M = _as_multiplication(m, F.field)
    series, top = _series(M)
    top = _meet(F.order, top) or 0
    _require_cocycle(F, M)

    if F.is_zero():
        base = window or CochainWindow(F.arity - 1, (0, 0), 0, 0)
        return CoboundarySolution(F, PolyDiffCochain.zero(F.arity - 1, F.field), base)

    base = window or CochainWindow.around(F.leading_component(), arity=F.arity - 1)
    steps = StarSteps.of(M) if top else StarSteps()
    target = _restrict(F.flatten(), top)
    domain = F.field.domain

    for attempt in range(escalations + 1):
        unknowns = [
            (i, e) for i in range(top + 1) for e in steps.advance(base, i).basis(F.field)
        ]
        columns = [_layer_image(e, series, i, top).flatten() for i, e in unknowns]
        vector = solve(columns, target, domain)
        logger.debug(
            "coboundary solve arity %d at %s: %d unknowns, %s",
            F.arity, base.describe(), len(unknowns), "found" if vector else "none",
        )
        if vector is not None:
            zero = PolyDiffCochain.zero(F.arity - 1, F.field, top if top else None)
            witness = combine(vector, [e.shift(i) for i, e in unknowns], zero)
            return CoboundarySolution(F, witness, base, attempt)
        if attempt < escalations:
            base = base.escalate()
    return CoboundarySolution(F, None, base, escalations)


def solve_layered_coboundary(F, star, window: Optional[CochainWindow] = None, escalations: int = MAX_ESCALATIONS):
    """f_h with δ_h f_h = F_h mod h^(K+1)."""
    return solve_coboundary(F, star, window, escalations)


@dataclass
class ObstructionResult:
    cocycle: PolyDiffCochain
    obstruction: PolyDiffCochain
    solution: CoboundarySolution

    @property
    def vanishes(self) -> bool:
        return self.solution.found


def primary_obstruction(
    z: PolyDiffCochain,
    m1: PolyDiffCochain,
    window: Optional[CochainWindow] = None,
    m=None,
    escalations: int = MAX_ESCALATIONS,
) -> ObstructionResult:
    """
    The cocycle [z, m1] and whether it is a coboundary.

    Raises:
        NotACocycle: δz != 0, or [z, m1] is not a cocycle (m1 is then not
            the infinitesimal of an associative deformation)
    """
    M = _as_multiplication(m, z.field)
    _require_cocycle(z, M)
    obstruction = gerstenhaber(z, m1)
    if not coboundary(obstruction, M).is_zero():
        raise NotACocycle(f"[z, m1] is not a cocycle for m1 = {m1.render()}")
    solution = solve_coboundary(obstruction, M, window, escalations)
    return ObstructionResult(z, obstruction, solution)


def unobstructed_combinations(
    cocycles: Sequence[PolyDiffCochain],
    m1: PolyDiffCochain,
    window: Optional[CochainWindow] = None,
    m=None,
) -> Tuple[List[List[object]], Optional[CochainWindow]]:
    """
    Coefficient vectors c with Σ c_k·[z_k, m1] a coboundary in the window.

    The z_k must share arity and bidegree. Returns an echelon basis of the
    vectors together with the window the coboundaries were taken from
    (None when every obstruction vanishes outright).
    """
    field = cocycles[0].field
    domain = field.domain
    M = _as_multiplication(m, field)
    obstructions = [gerstenhaber(z, m1) for z in cocycles]
    identity = [[domain.one if i == k else domain.zero for i in range(len(cocycles))] for k in range(len(cocycles))]
    nonzero = [o for o in obstructions if not o.is_zero()]
    if not nonzero:
        return identity, None

    if window is None:
        window = CochainWindow(
            nonzero[0].arity - 1,
            nonzero[0].bidegree(),
            max(o.max_order() for o in nonzero),
            max(o.max_degree() for o in nonzero),
        )
    images = [(-coboundary(e, M)).flatten() for e in window.basis(field)]
    vectors = kernel([o.flatten() for o in obstructions] + images, domain)
    projected = [v[: len(cocycles)] for v in vectors if any(v[: len(cocycles)])]
    rows, _ = echelon_rows(projected, domain)
    return rows, window


# Lifting


class LiftStatus(Enum):
    LIFTED = "LIFTED"
    OBSTRUCTED = "OBSTRUCTED"


@dataclass
class LiftResult:
    status: LiftStatus
    cocycle: PolyDiffCochain
    lift: Optional[PolyDiffCochain]
    failed_order: Optional[int]
    obstruction: Optional[PolyDiffCochain]
    window: CochainWindow
    escalations: int = 0

    @property
    def lifted(self) -> bool:
        return self.status is LiftStatus.LIFTED


def _lift_attempt(z, series, top, base, steps) -> LiftResult:
    field = z.field
    domain = field.domain
    unknowns = [
        (i, e) for i in range(1, top + 1) for e in steps.advance(base, i).basis(field)
    ]
    columns = [_layer_image(e, series, i, top).flatten() for i, e in unknowns]
    drive = PolyDiffCochain.zero(z.arity + 1, field, top)
    for n in range(1, top + 1):
        drive = drive + gerstenhaber(z, series[n]).shift(n)
    target = drive.flatten()
    M = PolyDiffCochain.zero(2, field, top)
    for n, m_n in enumerate(series):
        M = M + m_n.shift(n)

    solved: Dict[int, object] = {}
    for level in range(1, top + 1):
        active = [k for k, (i, _) in enumerate(unknowns) if i <= level]
        vector = solve([_restrict(columns[k], level) for k in active], _restrict(target, level), domain)
        if vector is None:
            partial = z.truncate(level)
            for k, c in solved.items():
                if c:
                    i, e = unknowns[k]
                    partial = partial + e.shift(i).scale(c)
            obstruction = (-coboundary(partial, M.truncate(level))).component(level)
            logger.debug("lift of %s obstructed at order %d", z.render(), level)
            return LiftResult(LiftStatus.OBSTRUCTED, z, None, level, obstruction, base)
        solved = dict(zip(active, vector))

    lift = z.truncate(top)
    for k, c in solved.items():
        if c:
            i, e = unknowns[k]
            lift = lift + e.shift(i).scale(c)
    return LiftResult(LiftStatus.LIFTED, z, lift, None, None, base)


def lift_cocycle(
    z: PolyDiffCochain,
    star,
    window: Optional[CochainWindow] = None,
    escalations: int = MAX_ESCALATIONS,
) -> LiftResult:
    """
    Extend z to z_h = z + h·z_1 + ... + h^K·z_K with δ_h z_h = 0 mod h^(K+1).

    Orders 1..n are solved jointly at each stage n, so the freedom left at
    lower orders is used before an order is declared obstructed. The
    obstruction reported is the order-n defect of the last successful
    partial lift.

    Raises:
        NotACocycle: δz != 0
    """
    M = _as_multiplication(star, z.field)
    series, top = _series(M)
    _require_cocycle(z, series[0])
    if z.is_zero() or top == 0:
        base = window or CochainWindow(z.arity, (0, 0), 0, 0)
        return LiftResult(LiftStatus.LIFTED, z, z.truncate(top), None, None, base)

    base = window or CochainWindow.around(z)
    steps = StarSteps.of(M)
    for attempt in range(escalations + 1):
        result = _lift_attempt(z, series, top, base, steps)
        result.escalations = attempt
        if result.lifted or attempt == escalations:
            return result
        base = base.escalate()
    return result


class TorsionVerdict(Enum):
    LIFTS_TO_COBOUNDARY = "LIFTS_TO_COBOUNDARY"
    LIFTS_NONTRIVIALLY = "LIFTS_NONTRIVIALLY"
    OBSTRUCTED = "OBSTRUCTED"


@dataclass
class TorsionResult:
    """
    Whether h^r·z_h is a δ_h-coboundary for some lift z_h.

    witness is f_h with δ_h f_h = h^power·lift, mod h^(K+1).
    """
    verdict: TorsionVerdict
    cocycle: PolyDiffCochain
    power: Optional[int]
    witness: Optional[PolyDiffCochain]
    lift: Optional[PolyDiffCochain]
    window: CochainWindow
    lifting: LiftResult


def _torsion_attempt(z, series, top, base, steps, r):
    field = z.field
    f_unknowns = [
        (i, e)
        for i in range(top + 1)
        for e in steps.advance(base, i, arity=z.arity - 1, lag=r, degree_slack=2 * r).basis(field)
    ]
    w_unknowns = [
        (i, e) for i in range(1, top - r + 1) for e in steps.advance(base, i).basis(field)
    ]
    columns = [_layer_image(e, series, i, top).flatten() for i, e in f_unknowns]
    columns += [(-e.shift(r + i)).flatten() for i, e in w_unknowns]
    vector = solve(columns, z.shift(r).flatten(), field.domain)
    if vector is None:
        return None

    split = len(f_unknowns)
    witness = combine(
        vector[:split],
        [e.shift(i) for i, e in f_unknowns],
        PolyDiffCochain.zero(z.arity - 1, field, top),
    )
    lift = z.truncate(top - r) + combine(
        vector[split:],
        [e.shift(i) for i, e in w_unknowns],
        PolyDiffCochain.zero(z.arity, field, top - r),
    )
    return witness, lift


def lift_is_coboundary(
    z: PolyDiffCochain,
    star,
    window: Optional[CochainWindow] = None,
    escalations: int = MAX_ESCALATIONS,
) -> TorsionResult:
    """
    Decide whether z lifts, and whether some lift becomes h-torsion.

    Searches r = 0..K for f_h and a lift z_h with δ_h f_h = h^r·z_h mod
    h^(K+1). The f_h layer i is sought at bidegree b + (i - r)·σ, where σ
    is the bidegree of m_1; windows escalate together.
    """
    M = _as_multiplication(star, z.field)
    series, top = _series(M)
    lifting = lift_cocycle(z, M, window, escalations)
    base = lifting.window

    if z.is_zero():
        zero = PolyDiffCochain.zero(max(z.arity - 1, 0), z.field)
        return TorsionResult(TorsionVerdict.LIFTS_TO_COBOUNDARY, z, 0, zero, z, base, lifting)
    if not lifting.lifted:
        return TorsionResult(TorsionVerdict.OBSTRUCTED, z, None, None, None, base, lifting)
    if z.arity == 0:
        return TorsionResult(TorsionVerdict.LIFTS_NONTRIVIALLY, z, None, None, lifting.lift, base, lifting)

    base = window or CochainWindow.around(z)
    steps = StarSteps.of(M)
    for attempt in range(escalations + 1):
        for r in range(top + 1):
            found = _torsion_attempt(z, series, top, base, steps, r)
            if found is not None:
                witness, lift = found
                logger.debug("h^%d-torsion witness for %s at %s", r, z.render(), base.describe())
                return TorsionResult(
                    TorsionVerdict.LIFTS_TO_COBOUNDARY, z, r, witness, lift, base, lifting
                )
        if attempt < escalations:
            base = base.escalate()
    return TorsionResult(TorsionVerdict.LIFTS_NONTRIVIALLY, z, None, None, lifting.lift, base, lifting)


def inner_lift(c: PolyDiffCochain, star) -> PolyDiffCochain:
    """(1/h)·[c, m_h], the lift of the derivation c ↦ [c, m_1] (mod h^K)."""
    if c.arity != 0:
        raise ValueError("inner lifts are built from elements (arity 0)")
    M = _as_multiplication(star, c.field)
    return gerstenhaber(c, M).divide_by_h()


# Cohomology in windows


@dataclass
class WindowDims:
    arity: int
    bidegree: Slot
    window: CochainWindow
    dim: int
    witnesses: List[PolyDiffCochain]

    def to_row(self) -> Dict[str, object]:
        return {
            "arity": self.arity,
            "bidegree": list(self.bidegree),
            "window": self.window.describe(),
            "dim": self.dim,
            "witnesses": [w.render() for w in self.witnesses],
        }


def hkr_cohomology_dims(bidegree: Slot) -> Tuple[int, int, int]:
    """
    (h0, h1, h2) of k[x,y] at bidegree (r, s).

    H0 is x^r y^s, H1 is spanned by x^(r+1)y^s ∂x and x^r y^(s+1) ∂y, H2 by
    x^(r+1)y^(s+1) ∂x∧∂y, each present when its exponents are >= 0.
    """
    r, s = bidegree
    if r < -1 or s < -1:
        raise OutOfRange(f"bidegree {bidegree} lies below (-1, -1)")
    if r >= 0 and s >= 0:
        return (1, 2, 1)
    if r == -1 and s == -1:
        return (0, 0, 1)
    return (0, 1, 1)


def window_cohomology_dims(
    m,
    arity: int,
    bidegree: Slot,
    window: Optional[CochainWindow] = None,
    field: Optional[ScalarField] = None,
) -> WindowDims:
    """
    dim ker δ / im δ inside a window.

    m is None for k[x,y], a plain multiplication 2-cochain, or a star
    product (layered); star products dispatch to deformed_window_dims.
    """
    field = field or (m.field if isinstance(m, PolyDiffCochain) else ScalarField.rational())
    M = _as_multiplication(m, field)
    if M.order:
        return deformed_window_dims(M, arity, bidegree, window)

    window = window or CochainWindow.default(arity, bidegree)
    domain = field.domain
    basis = window.basis(field)
    cycles = kernel([coboundary(e, M).flatten() for e in basis], domain)
    zero = PolyDiffCochain.zero(arity, field)
    cycle_cochains = [combine(v, basis, zero) for v in cycles]

    images = []
    if arity > 0:
        lower = replace(window, arity=arity - 1)
        images = [coboundary(e, M).flatten() for e in lower.basis(field)]
    picks = independent_columns(images, [c.flatten() for c in cycle_cochains], domain)
    logger.debug(
        "window H^%d at %s (%s): %d cycles, dim %d",
        arity, bidegree, window.describe(), len(cycles), len(picks),
    )
    return WindowDims(arity, bidegree, window, len(picks), [cycle_cochains[k] for k in picks])


def deformed_window_dims(
    star,
    arity: int,
    bidegree: Slot,
    window: Optional[CochainWindow] = None,
) -> WindowDims:
    """
    Liftable classes modulo classes whose lifts are h-torsion, in a window.

    A cocycle z of the window counts when some z + h·w_1 + ... is a
    δ_h-cocycle mod h^(K+1); it is discarded when in addition h^K·z is a
    δ_h-coboundary. The dimension is rank(liftable + B) - rank(torsion + B)
    with B the plain coboundaries of the window.
    """
    M = _as_multiplication(star, ScalarField.rational())
    field = M.field
    domain = field.domain
    series, top = _series(M)
    steps = StarSteps.of(M)
    window = window or CochainWindow.default(arity, bidegree)

    base = window.basis(field)
    size = len(base)
    zero = PolyDiffCochain.zero(arity, field)
    lift_layers = [
        (i, e) for i in range(1, top + 1) for e in steps.advance(window, i).basis(field)
    ]
    torsion_layers = []
    if arity > 0:
        torsion_layers = [
            (i, e)
            for i in range(top + 1)
            for e in steps.advance(window, i, arity=arity - 1, lag=top, degree_slack=2 * top).basis(field)
        ]

    z_lift = [_tag("L", _layer_image(e, series, 0, top).flatten()) for e in base]
    w_lift = [_tag("L", _layer_image(e, series, i, top).flatten()) for i, e in lift_layers]
    liftable_cochains = [
        combine(v[:size], base, zero)
        for v in kernel(z_lift + w_lift, domain)
        if any(v[:size])
    ]
    liftable = [c.flatten() for c in liftable_cochains]

    z_joint = [
        {**column, **_tag("T", (-e.shift(top)).flatten())} for column, e in zip(z_lift, base)
    ]
    f_cols = [_tag("T", _layer_image(e, series, i, top).flatten()) for i, e in torsion_layers]
    torsion = [
        combine(v[:size], base, zero).flatten()
        for v in kernel(z_joint + w_lift + f_cols, domain)
        if any(v[:size])
    ]

    images = []
    if arity > 0:
        lower = replace(window, arity=arity - 1)
        images = [coboundary(e, series[0]).flatten() for e in lower.basis(field)]
    picks = independent_columns(images + torsion, liftable, domain)
    witnesses = [liftable_cochains[k] for k in picks]
    logger.debug(
        "deformed H^%d at %s (%s, K=%d): %d liftable, %d torsion, dim %d",
        arity, bidegree, window.describe(), top, len(liftable), len(torsion), len(picks),
    )
    return WindowDims(arity, bidegree, window, len(picks), witnesses)
