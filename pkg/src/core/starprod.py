"""
DefCoh - Groenewold-Moyal Star Products

For pairwise commuting derivations φ_t, ψ_t of k[x,y] the series

    a ⋆ b = m exp(h Σ_t φ_t ⊗ ψ_t)(a ⊗ b) = Σ_i h^i m_i(a, b)

is an associative deformation of the commutative product. Each m_i is the
bidifferential cochain Σ_{|k|=i} (1/k!) (Π φ_t^k_t) ⌣ (Π ψ_t^k_t).

Stars built from constant-coefficient derivations terminate on polynomials
and are evaluated exactly; all others are truncated mod h^(K+1).
"""

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy import Symbol
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.rings import ring

from . import hochschild
from .exceptions import InvalidParameters, NonCommutingDerivations
from .hochschild import PolyDiffCochain, coefficient_ring, compose, cup, gerstenhaber
from .ncpoly import AlgebraSpec, Derivation, NCPoly
from .scalars import ScalarField

logger = logging.getLogger(__name__)

DEFAULT_ORDER = hochschild.DEFAULT_ORDER

Pair = Tuple[PolyDiffCochain, PolyDiffCochain]


def _as_vector_field(D) -> PolyDiffCochain:
    if isinstance(D, Derivation):
        return PolyDiffCochain.from_derivation(D)
    if not isinstance(D, PolyDiffCochain) or D.arity != 1:
        raise ValueError(f"expected a derivation, got {D!r}")
    if any(a + b != 1 for (a, b), in D.terms):
        raise ValueError(f"{D.render()} is not a vector field")
    return D


def _is_constant(D: PolyDiffCochain) -> bool:
    return all(poly.is_ground for poly in D.terms.values())


def _power(D: PolyDiffCochain, k: int) -> PolyDiffCochain:
    out = hochschild.identity(D.field)
    for _ in range(k):
        out = compose(out, D)
    return out


def _gm_term(pairs: Sequence[Pair], i: int, field: ScalarField) -> PolyDiffCochain:
    total = PolyDiffCochain.zero(2, field)
    for exponents in product(range(i + 1), repeat=len(pairs)):
        if sum(exponents) != i:
            continue
        left = hochschild.identity(field)
        right = hochschild.identity(field)
        weight = 1
        for (phi, psi), k in zip(pairs, exponents):
            left = compose(left, _power(phi, k))
            right = compose(right, _power(psi, k))
            weight *= factorial(k)
        total = total + cup(left, right).scale(Fraction(1, weight))
    return total


def _xy_degree(p) -> int:
    return max((m[0] + m[1] for m in p), default=0)


@dataclass(frozen=True, eq=False)
class StarProduct:
    """
    m_0 + h·m_1 + ... + h^K·m_K on k[x,y].

    pairs is empty for stars given by their terms alone. exact stars
    (constant-coefficient pairs) produce further terms on demand, so
    star_apply never truncates them.
    """
    terms: Tuple[PolyDiffCochain, ...]
    pairs: Tuple[Pair, ...] = ()
    name: str = "star"
    _cache: Dict = dc_field(default_factory=dict, compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @property
    def field(self) -> ScalarField:
        return self.terms[0].field

    @property
    def ring(self):
        return coefficient_ring(self.field)

    @property
    def exact(self) -> bool:
        return bool(self.pairs) and all(_is_constant(D) for pair in self.pairs for D in pair)

    def term(self, i: int) -> PolyDiffCochain:
        if i <= self.order:
            return self.terms[i]
        if not self.exact:
            raise ValueError(f"{self.name} is only known mod h^{self.order + 1}")
        key = ("term", i)
        if key not in self._cache:
            self._cache[key] = _gm_term(self.pairs, i, self.field)
        return self._cache[key]

    def infinitesimal(self) -> PolyDiffCochain:
        return self.term(1)

    def layered(self) -> PolyDiffCochain:
        """Σ h^i m_i as one cochain, mod h^(K+1)."""
        if "layered" not in self._cache:
            total = PolyDiffCochain.zero(2, self.field, self.order)
            for i, m_i in enumerate(self.terms):
                total = total + m_i.shift(i)
            self._cache["layered"] = total
        return self._cache["layered"]

    def truncated(self, order: int) -> "StarProduct":
        terms = tuple(self.term(i) for i in range(order + 1)) if self.exact else self.terms[: order + 1]
        return StarProduct(terms, self.pairs, self.name)

    def monomial_product(self, a: Tuple[int, int], b: Tuple[int, int]):
        """x^a1 y^a2 ⋆ x^b1 y^b2, cached."""
        key = ("mono", a, b)
        if key not in self._cache:
            R = self.ring
            p = R.from_dict({(a[0], a[1], 0): 1})
            q = R.from_dict({(b[0], b[1], 0): 1})
            top = min(sum(a), sum(b)) if self.exact else self.order
            h = R.gens[2]
            total = R.zero
            for i in range(top + 1):
                value = self.term(i)(p, q)
                if value:
                    total += value * h**i
            self._cache[key] = total
        return self._cache[key]

    def describe(self) -> str:
        mode = "exact" if self.exact else f"mod h^{self.order + 1}"
        return f"{self.name} ({mode})"


def gm_star(pairs: Sequence[Tuple[object, object]], order: int = DEFAULT_ORDER, name: str = "gm") -> StarProduct:
    """
    Groenewold-Moyal star of commuting derivation pairs, to order K.

    Raises:
        NonCommutingDerivations: two of the listed derivations do not commute
    """
    if order < 0:
        raise InvalidParameters(f"truncation order must be >= 0, got {order}")
    fields = [(_as_vector_field(phi), _as_vector_field(psi)) for phi, psi in pairs]
    flat = [D for pair in fields for D in pair]
    for i, D in enumerate(flat):
        for E in flat[i + 1:]:
            if not gerstenhaber(D, E).is_zero():
                raise NonCommutingDerivations(f"[{D.render()}, {E.render()}] != 0")

    field = flat[0].field if flat else ScalarField.rational()
    terms = [PolyDiffCochain.multiplication(field)]
    for i in range(1, order + 1):
        terms.append(_gm_term(fields, i, field) if fields else PolyDiffCochain.zero(2, field))
    logger.debug("built %s star to order %d from %d pairs", name, order, len(fields))
    return StarProduct(tuple(terms), tuple(fields), name)


def moyal_star(order: int = DEFAULT_ORDER) -> StarProduct:
    """Normal-form Weyl star, pair (∂x, ∂y): x ⋆ y = xy + h."""
    dx, dy = PolyDiffCochain.partial(1, 0), PolyDiffCochain.partial(0, 1)
    return gm_star([(dx, dy)], order, "moyal")


def weyl_star(order: int = DEFAULT_ORDER) -> StarProduct:
    """Symmetric Moyal-Weyl star, pairs (½∂x, ∂y), (-½∂y, ∂x); infinitesimal ∂x∧∂y."""
    half = Fraction(1, 2)
    dx, dy = PolyDiffCochain.partial(1, 0), PolyDiffCochain.partial(0, 1)
    return gm_star([(dx.scale(half), dy), (dy.scale(-half), dx)], order, "moyal-weyl")


def quantum_plane_star(order: int = DEFAULT_ORDER) -> StarProduct:
    """Pair (x∂x, y∂y): x ⋆ y = e^h·y ⋆ x."""
    R = coefficient_ring(ScalarField.rational())
    x, y = R.gens[0], R.gens[1]
    return gm_star([(PolyDiffCochain.partial(1, 0, x), PolyDiffCochain.partial(0, 1, y))], order, "quantum-plane")


# Evaluation


def star_apply(s: StarProduct, a, b):
    """
    a ⋆ b as a polynomial in x, y, h.

    Exact stars return the full (terminating) sum; others are reduced mod
    h^(K+1). h inside a or b is treated as a scalar.
    """
    R = s.ring
    a, b = R(a), R(b)
    total = R.zero
    for (i, j, e), c in a.items():
        for (k, l, f), d in b.items():
            piece = s.monomial_product((i, j), (k, l))
            if e + f:
                piece = piece.mul_monom((0, 0, e + f))
            total += piece * (c * d)
    if not s.exact:
        total = R.from_dict({m: c for m, c in total.items() if m[2] <= s.order})
    return total


def star_commutator(s: StarProduct, a, b):
    return star_apply(s, a, b) - star_apply(s, b, a)


def exp_h(order: int, scale=1, field: Optional[ScalarField] = None):
    """Σ_{i<=K} (scale·h)^i / i! as a polynomial in h."""
    R = coefficient_ring(field or ScalarField.rational())
    h = R.gens[2]
    total = R.zero
    for i in range(order + 1):
        total += (h * scale) ** i * (R.domain.one / R.domain.convert(factorial(i)))
    return total


def commutation_defect(s: StarProduct, factor):
    """x ⋆ y - factor·(y ⋆ x), mod h^(K+1)."""
    R = s.ring
    x, y = R.gens[0], R.gens[1]
    defect = star_apply(s, x, y) - R(factor) * star_apply(s, y, x)
    return R.from_dict({m: c for m, c in defect.items() if m[2] <= s.order})


def monomials_within(bound: Tuple[int, int]) -> List[Tuple[int, int]]:
    """Monomial exponents (i, j) with i <= bound[0], j <= bound[1], by total degree."""
    out = [(i, j) for i in range(bound[0] + 1) for j in range(bound[1] + 1)]
    return sorted(out, key=lambda m: (m[0] + m[1], -m[0]))


@dataclass
class AssociativityResult:
    passed: bool
    order: Optional[int] = None
    triple: Optional[Tuple[Tuple[int, int], ...]] = None
    defect: Optional[object] = None
    checked: int = 0

    def describe(self) -> str:
        if self.passed:
            return f"PASS ({self.checked} triples)"
        return f"FAIL at order {self.order} on {self.triple}"


def associativity_defect(s: StarProduct, degree_bound: Tuple[int, int]) -> AssociativityResult:
    """
    (a⋆b)⋆c - a⋆(b⋆c) over all monomial triples within degree_bound.

    Returns PASS, or the lowest h-order at which some triple fails together
    with the first such triple.
    """
    R = s.ring
    monos = monomials_within(degree_bound)
    polys = {m: R.from_dict({(m[0], m[1], 0): 1}) for m in monos}
    worst: Optional[AssociativityResult] = None
    checked = 0
    for a, b, c in product(monos, repeat=3):
        checked += 1
        left = star_apply(s, star_apply(s, polys[a], polys[b]), polys[c])
        right = star_apply(s, polys[a], star_apply(s, polys[b], polys[c]))
        defect = left - right
        if not defect:
            continue
        order = min(m[2] for m in defect)
        if worst is None or order < worst.order:
            worst = AssociativityResult(False, order, (a, b, c), defect)
    if worst is None:
        return AssociativityResult(True, checked=checked)
    worst.checked = checked
    logger.debug("%s fails associativity at order %d on %s", s.name, worst.order, worst.triple)
    return worst


def specialize_at_one(s: StarProduct, p):
    """Set h = 1 in a star-product value; only exact stars allow it."""
    if not s.exact:
        raise InvalidParameters(f"{s.describe()} cannot be specialized at h = 1")
    R = s.ring
    out: Dict[Tuple[int, int, int], object] = {}
    for (i, j, _), c in p.items():
        key = (i, j, 0)
        out[key] = out.get(key, R.domain.zero) + c
    return R.from_dict(out)


def weyl_identification(p, algebra: AlgebraSpec) -> NCPoly:
    """x^i y^j ↦ y^j x^i in normal form (anti-normal ordering)."""
    total = algebra.zero()
    for (i, j, e), c in p.items():
        if e:
            raise ValueError("identify after specializing h")
        total = total + (NCPoly.monomial(algebra, 0, j) * NCPoly.monomial(algebra, i, 0)).scale(c)
    return total


@dataclass
class IsomorphismResult:
    passed: bool
    checked: int
    failures: List[Tuple[Tuple[int, int], Tuple[int, int]]]


def weyl_isomorphism_check(degree_bound: Tuple[int, int], s: Optional[StarProduct] = None) -> IsomorphismResult:
    """
    Φ(a ⋆ b)|_(h=1) = Φ(a)·Φ(b) in W1 on all monomial pairs within the bound.

    Φ is the anti-normal identification; with it the normal-form star at
    h = 1 is the Weyl algebra multiplication.
    """
    s = s or moyal_star()
    algebra = AlgebraSpec.weyl()
    R = s.ring
    monos = monomials_within(degree_bound)
    failures = []
    for a, b in product(monos, repeat=2):
        pa = R.from_dict({(a[0], a[1], 0): 1})
        pb = R.from_dict({(b[0], b[1], 0): 1})
        star_side = weyl_identification(specialize_at_one(s, star_apply(s, pa, pb)), algebra)
        weyl_side = weyl_identification(pa, algebra) * weyl_identification(pb, algebra)
        if star_side != weyl_side:
            failures.append((a, b))
    return IsomorphismResult(not failures, len(monos) ** 2, failures)


# Group property of exp(h·r)


@dataclass
class GroupActionResult:
    passed: bool
    checked: int
    failures: List[Tuple[int, ...]]


def group_action_check(
    pairs: Sequence[Tuple[object, object]], order: int, degree_bound: int
) -> GroupActionResult:
    """
    exp(h1·r)∘exp(h2·r) = exp((h1+h2)·r) on A⊗A, mod total degree K+1 in h1, h2.

    A⊗A is k[x1, y1, x2, y2]; r = Σ φ_t ⊗ ψ_t acts with φ_t on the first
    pair of variables and ψ_t on the second. Checked on every monomial with
    all exponents <= degree_bound.
    """
    fields = [(_as_vector_field(phi), _as_vector_field(psi)) for phi, psi in pairs]
    T, x1, y1, x2, y2, h1, h2 = ring("x1,y1,x2,y2,h1,h2", ScalarField.rational().domain)

    def embed(poly, side: int):
        return T.from_dict(
            {((i, j, 0, 0) if side == 0 else (0, 0, i, j)) + (0, 0): c for (i, j, _), c in poly.items()}
        )

    def vector_action(D: PolyDiffCochain, side: int):
        gx, gy = (x1, y1) if side == 0 else (x2, y2)
        a = embed(D.terms.get(((1, 0),), D.ring.zero), side)
        b = embed(D.terms.get(((0, 1),), D.ring.zero), side)
        return lambda p: a * p.diff(gx) + b * p.diff(gy)

    actions = [(vector_action(phi, 0), vector_action(psi, 1)) for phi, psi in fields]

    def r(p):
        total = T.zero
        for left, right in actions:
            total += left(right(p))
        return total

    def cut(p):
        return T.from_dict({m: c for m, c in p.items() if m[4] + m[5] <= order})

    def transfer(p, parameter):
        total, term = T.zero, p
        for i in range(order + 1):
            total += cut(term * parameter**i * (T.domain.one / T.domain.convert(factorial(i))))
            term = r(term)
        return cut(total)

    failures = []
    checked = 0
    for exps in product(range(degree_bound + 1), repeat=4):
        checked += 1
        p = T.from_dict({exps + (0, 0): 1})
        if transfer(transfer(p, h2), h1) != transfer(p, h1 + h2):
            failures.append(exps)
    return GroupActionResult(not failures, checked, failures)


# Parsing


def parse_vector_field(text: str) -> PolyDiffCochain:
    """Read "x*dx + 1/2*dy" as a 1-cochain."""
    names = {n: Symbol(n) for n in ("x", "y", "dx", "dy")}
    try:
        expr = sympy.expand(parse_expr(text.replace("^", "**"), local_dict=names))
    except (SyntaxError, TypeError) as exc:
        raise InvalidParameters(f"cannot read vector field {text!r}") from exc
    dx, dy = names["dx"], names["dy"]
    a, b = expr.coeff(dx), expr.coeff(dy)
    if sympy.expand(expr - a * dx - b * dy) != 0 or a.has(dx, dy) or b.has(dx, dy):
        raise InvalidParameters(f"{text!r} is not of the form a*dx + b*dy")
    R = coefficient_ring(ScalarField.rational())
    return PolyDiffCochain.vector_field(R.from_expr(a), R.from_expr(b))


def parse_pairs(text: str) -> List[Pair]:
    """Read "(dx,dy);(x*dx,y*dy)"."""
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.strip("()").split(",")
        if len(parts) != 2:
            raise InvalidParameters(f"a pair needs two vector fields, got {chunk!r}")
        pairs.append((parse_vector_field(parts[0]), parse_vector_field(parts[1])))
    return pairs
