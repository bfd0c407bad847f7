"""
DefCoh - q-Weyl Algebra Scenarios

W_q = k{x,y}/(xy - q·yx - 1) is a jump deformation of the quantum plane.
The checks here cover its center, the mod h^2 product of W_q(h) whose
h-coefficient is z_qp, which derivations survive (only x∂x - y∂y at the
lowest level, plus central multiples at a root of unity), and the
nontriviality of central multiples of w_q.
"""

import logging
from itertools import product
from typing import List, Optional, Tuple

from ..core import scalars
from ..core.hochschild import (
    PolyDiffCochain,
    coefficient_ring,
    gerstenhaber,
    primary_obstruction,
    wedge,
)
from ..core.ncpoly import (
    AlgebraSpec,
    Derivation,
    NCPoly,
    annihilates_center,
    center_basis,
    derivation_basis,
    inner_derivation,
    twisted_relation_check,
)
from ..core.scalars import ScalarField, hbar_valuation
from ..core.starprod import weyl_star
from ..utils.linalg import combine, rank, solve
from .report import Outcome, Verdict
from .session import ScenarioRun

logger = logging.getLogger(__name__)

REWRITE_LIMIT = 30
GENERIC_MULTIPLE_LIMIT = 3


def q_weyl_algebra(q_text: str) -> AlgebraSpec:
    return AlgebraSpec.from_descriptors(q_text, "1")


def _center_bound(N: Optional[int]) -> Tuple[int, int]:
    return (2 * N, 2 * N) if N else (4, 4)


def _leading_columns(basis: List[Derivation], bidegree):
    return [dict(enumerate(D.leading_coefficients(bidegree))) for D in basis]


def in_leading_span(basis: List[Derivation], bidegree, target: Tuple[int, int], field: ScalarField) -> bool:
    """Whether some derivation of the basis has leading coefficients target."""
    domain = field.domain
    columns = _leading_columns(basis, bidegree)
    vector = {k: domain.convert(v) for k, v in enumerate(target) if v}
    return rank(columns + [vector], domain) == rank(columns, domain)


def derivation_with_leading(algebra: AlgebraSpec, bidegree, target: Tuple[int, int]) -> Optional[Derivation]:
    """A derivation of W_q whose leading part is target, or None."""
    basis = derivation_basis(algebra, bidegree)
    domain = algebra.field.domain
    vector = {k: domain.convert(v) for k, v in enumerate(target) if v}
    solution = solve(_leading_columns(basis, bidegree), vector, domain)
    if solution is None:
        return None
    zero = Derivation(algebra, algebra.zero(), algebra.zero())
    return combine(solution, basis, zero)


# qweyl-center


def _center(run: ScenarioRun, algebra: AlgebraSpec) -> Outcome:
    N = algebra.root_order
    found = set()
    for c in center_basis(algebra, run.bound):
        if len(c.terms) != 1:
            return Outcome.of(False, countercase=f"central element {c.render()} is not a monomial")
        found.update(c.terms)
    expected = {
        (i, j)
        for i, j in product(range(run.bound[0] + 1), range(run.bound[1] + 1))
        if (N and i % N == 0 and j % N == 0) or (i, j) == (0, 0)
    }
    return Outcome.of(
        found == expected,
        f"{len(found)} central monomials within {run.bound}" + (f" = k[x^{N}, y^{N}]" if N else ", only 1"),
        countercase=f"extra {sorted(found - expected)}, missing {sorted(expected - found)}",
    )


def _generators_central(run: ScenarioRun, algebra: AlgebraSpec) -> Outcome:
    N = algebra.root_order
    x, y = algebra.x(), algebra.y()
    if N:
        xN, yN = x**N, y**N
        ok = xN.commutator(y).is_zero() and yN.commutator(x).is_zero()
        return Outcome.of(ok, f"[x^{N}, y] = [y^{N}, x] = 0", countercase=f"x^{N} or y^{N} is not central")
    noncentral = [n for n in range(1, max(run.bound) + 1) if (x**n).commutator(y).is_zero()]
    return Outcome.of(
        not noncentral,
        f"[x^n, y] != 0 for 1 <= n <= {max(run.bound)}",
        countercase=f"x^n central for n in {noncentral}",
    )


def run_qweyl_center(run: ScenarioRun) -> None:
    algebra = q_weyl_algebra(run.scenario.q)
    run.check(
        "qweyl.center",
        "the center of W_q is k[x^N, y^N] at a primitive N-th root of unity, k otherwise",
        "qweyl-center",
        lambda: _center(run, algebra),
    )
    run.check(
        "qweyl.generators-central",
        "x^N and y^N commute with both generators exactly when q^N = 1",
        "qweyl-center",
        lambda: _generators_central(run, algebra),
    )


# qweyl-infinitesimal


def rewrite_defect(algebra: AlgebraSpec, n: int) -> NCPoly:
    """y·x^n - (r^n·x^n·y - n_r·r·h·x^(n-1)), zero in W_q(h)."""
    field = algebra.field
    r = algebra.r
    lhs = algebra.y() * algebra.x() ** n
    rhs = NCPoly.monomial(algebra, n, 1, r**n) - NCPoly.monomial(
        algebra, n - 1, 0, scalars.q_integer(n, r, field) * r * field.h
    )
    return lhs - rhs


def infinitesimal_defect(algebra: AlgebraSpec, m: int, n: int) -> NCPoly:
    """y^m·x^n minus its mod-h^2 expansion; every coefficient should be O(h^2)."""
    field = algebra.field
    r = algebra.r
    m_r = scalars.q_integer(m, r, field)
    n_r = scalars.q_integer(n, r, field)
    lhs = algebra.y() ** m * algebra.x() ** n
    rhs = NCPoly.monomial(algebra, n, m, r ** (m * n)) - NCPoly.monomial(
        algebra, n - 1, m - 1, r ** ((m - 1) * (n - 1)) * m_r * n_r * r * field.h
    )
    return lhs - rhs


def _rewrite(algebra: AlgebraSpec) -> Outcome:
    bad = [n for n in range(1, REWRITE_LIMIT + 1) if not rewrite_defect(algebra, n).is_zero()]
    return Outcome.of(
        not bad,
        f"y·x^n = r^n·x^n·y - n_r·r·h·x^(n-1) for 1 <= n <= {REWRITE_LIMIT}",
        countercase=f"fails for n in {bad}",
    )


def _infinitesimal(run: ScenarioRun, algebra: AlgebraSpec) -> Outcome:
    field = algebra.field
    Dm, Dn = run.bound
    for m, n in product(range(1, Dm + 1), range(1, Dn + 1)):
        defect = infinitesimal_defect(algebra, m, n)
        low = [hbar_valuation(c, field) for c in defect.terms.values()]
        if any(v < 2 for v in low):
            return Outcome.of(False, countercase=f"y^{m}·x^{n} differs at order {min(low)}: {defect.render()}")
    return Outcome.of(True, f"{Dm * Dn} pairs (m, n): h-coefficient is -r^((m-1)(n-1))·m_r·n_r·r·x^(n-1)y^(m-1)")


def _twisted(run: ScenarioRun) -> Outcome:
    top = max(run.bound)
    bad = [n for n in range(1, top + 1) if not twisted_relation_check(n).is_zero()]
    return Outcome.of(
        not bad,
        f"y -> y + x^(n-1)·h/(1-q) turns xy - q·yx = h·x^n into the quantum plane, 1 <= n <= {top}",
        countercase=f"fails for n in {bad}",
    )


def run_qweyl_infinitesimal(run: ScenarioRun) -> None:
    algebra = AlgebraSpec.generic()
    run.check(
        "qweyl.rewrite",
        "y·x^n = r^n·x^n·y - n_r·r·h·x^(n-1) in W_q(h)",
        "qweyl-rewrite",
        lambda: _rewrite(algebra),
    )
    run.check(
        "qweyl.infinitesimal",
        "the infinitesimal of W_q(h) over the quantum plane is z_qp (mod h^2 product formula)",
        "qweyl-infinitesimal",
        lambda: _infinitesimal(run, algebra),
    )
    run.check(
        "qweyl.twisted-relation",
        "replacing h by h·x^n in W_q(h) gives back the quantum plane",
        "qp-second-cohomology",
        lambda: _twisted(run),
    )


# qweyl-derivations


def _euler(algebra: AlgebraSpec) -> Outcome:
    D = Derivation(algebra, algebra.x(), -algebra.y())
    return Outcome.of(
        D.is_derivation(),
        "D(x) = x, D(y) = -y respects xy - q·yx = 1",
        countercase=f"defect {D.compatibility_defect().render()}",
    )


def _obstructed(algebra: AlgebraSpec) -> Outcome:
    field = algebra.field
    basis = derivation_basis(algebra, (0, 0))
    x_only = in_leading_span(basis, (0, 0), (1, 0), field)
    y_only = in_leading_span(basis, (0, 0), (0, 1), field)
    euler = in_leading_span(basis, (0, 0), (1, -1), field)
    ok = euler and not x_only and not y_only
    return Outcome.of(
        ok,
        f"leading span at (0,0) is k·(x∂x - y∂y) ({len(basis)} derivation)",
        countercase=f"x∂x liftable: {x_only}, y∂y liftable: {y_only}, x∂x - y∂y liftable: {euler}",
    )


def _inner_annihilates(algebra: AlgebraSpec) -> Outcome:
    N = algebra.root_order
    bound = _center_bound(N)
    x, y = algebra.x(), algebra.y()
    inner = [inner_derivation(c) for c in (x, y, x * y, x**2 + y)]
    if not all(annihilates_center(D, bound) for D in inner):
        return Outcome.of(False, countercase="an inner derivation moves a central element")
    euler = Derivation(algebra, x, -y)
    if N:
        if annihilates_center(euler, bound):
            return Outcome.of(False, countercase=f"x∂x - y∂y kills the center within {bound}")
        return Outcome.of(True, f"ad x, ad y, ad xy, ad (x^2 + y) kill k[x^{N}, y^{N}]; x∂x - y∂y sends x^{N} to {N}·x^{N}")
    return Outcome.of(True, "center is k; inner derivations kill it trivially")


def _multiples_at(algebra: AlgebraSpec, bidegrees, expected: int, bound) -> Outcome:
    domain = algebra.field.domain
    notes = []
    for bidegree in bidegrees:
        basis = derivation_basis(algebra, bidegree)
        span = rank(_leading_columns(basis, bidegree), domain)
        if span != expected:
            return Outcome.of(False, countercase=f"leading span at {bidegree} has dimension {span}, expected {expected}")
        for D in basis:
            notes.append(f"{bidegree}: {D.render()} [kills center: {annihilates_center(D, bound)}]")
    return Outcome.of(True, "; ".join(notes))


def _central_multiples(run: ScenarioRun, algebra: AlgebraSpec) -> Outcome:
    N = algebra.root_order
    if N:
        return _multiples_at(algebra, [(N, 0), (0, N)], 2, _center_bound(N))
    bidegrees = [(n, 0) for n in range(1, GENERIC_MULTIPLE_LIMIT + 1)]
    bidegrees += [(0, n) for n in range(1, GENERIC_MULTIPLE_LIMIT + 1)]
    return _multiples_at(algebra, bidegrees, 1, _center_bound(N))


def _shadow(target: PolyDiffCochain) -> Tuple[PolyDiffCochain, object]:
    m1 = weyl_star(1).infinitesimal()
    result = primary_obstruction(target, m1)
    return m1, result


def _obstruction_shadow() -> Outcome:
    R = coefficient_ring(ScalarField.rational())
    x, y = R.gens[0], R.gens[1]
    x_dx = PolyDiffCochain.partial(1, 0, x)
    y_dy = PolyDiffCochain.partial(0, 1, y)
    m1, result = _shadow(x_dx)
    if result.obstruction != -m1:
        return Outcome.of(False, countercase=f"[x∂x, ∂x∧∂y] = {result.obstruction.render()}")
    if result.vanishes:
        return Outcome.of(False, countercase=f"-∂x∧∂y solved by {result.solution.describe()}")
    return Outcome(
        Verdict.NONE_AT_WINDOW,
        "[x∂x, ∂x∧∂y] = -∂x∧∂y; " + result.solution.describe(),
        result.solution.window.describe(),
    )


def _euler_shadow() -> Outcome:
    R = coefficient_ring(ScalarField.rational())
    x, y = R.gens[0], R.gens[1]
    euler = PolyDiffCochain.partial(1, 0, x) - PolyDiffCochain.partial(0, 1, y)
    _, result = _shadow(euler)
    return Outcome.of(
        result.obstruction.is_zero() and result.vanishes,
        "[x∂x - y∂y, ∂x∧∂y] = 0",
        countercase=f"obstruction {result.obstruction.render()}",
    )


def run_qweyl_derivations(run: ScenarioRun) -> None:
    algebra = q_weyl_algebra(run.scenario.q)
    run.check(
        "qweyl.euler-derivation",
        "x∂x - y∂y extends to a derivation of W_q",
        "qweyl-obstructed-derivations",
        lambda: _euler(algebra),
    )
    run.check(
        "qweyl.obstructed",
        "x∂x and y∂y do not extend to derivations of W_q",
        "qweyl-obstructed-derivations",
        lambda: _obstructed(algebra),
    )
    run.check(
        "qweyl.inner-annihilates-center",
        "inner derivations kill the center; x∂x - y∂y does not at a root of unity",
        "inner-annihilates-center",
        lambda: _inner_annihilates(algebra),
    )
    run.check(
        "qweyl.central-multiples",
        "x^N·x∂x, x^N·y∂y, y^N·x∂x, y^N·y∂y extend at a root of unity; only inner ones otherwise",
        "qweyl-obstructed-derivations",
        lambda: _central_multiples(run, algebra),
    )
    run.check(
        "qweyl.obstruction-shadow",
        "the obstruction of x∂x under ∂x∧∂y is -∂x∧∂y",
        "qweyl-obstructed-derivations",
        _obstruction_shadow,
    )
    run.check(
        "qweyl.euler-unobstructed",
        "x∂x - y∂y commutes with ∂x∧∂y",
        "qweyl-obstructed-derivations",
        _euler_shadow,
    )


# qweyl-h2


def central_monomials(N: int, bound: Tuple[int, int]) -> List[Tuple[int, int]]:
    return [(N * i, N * j) for i in range(bound[0] // N + 1) for j in range(bound[1] // N + 1)]


def _h2_bracket(run: ScenarioRun, N: int) -> Outcome:
    R = coefficient_ring(ScalarField.rational())
    x, y = R.gens[0], R.gens[1]
    w = wedge(PolyDiffCochain.partial(1, 0, x), PolyDiffCochain.partial(0, 1, y))
    g = PolyDiffCochain.element(x**N).scale(ScalarField.rational().convert(1) / N)
    monos = central_monomials(N, run.bound)
    for a, b in monos:
        c = x**a * y**b
        bracket = gerstenhaber(w.scale(c), g)
        target = PolyDiffCochain.partial(0, 1, c * x**N * y)
        if bracket != target:
            return Outcome.of(False, countercase=f"[x^{a}y^{b}·x∂x∧y∂y, x^{N}/{N}] = {bracket.render()}")
    return Outcome.of(True, f"[c·x∂x∧y∂y, x^{N}/{N}] = c·x^{N}·y∂y for {len(monos)} central c")


def _h2_lift(run: ScenarioRun, N: int) -> Outcome:
    algebra = q_weyl_algebra(run.scenario.q)
    yN = algebra.y() ** N
    monos = central_monomials(N, run.bound)
    for a, b in monos:
        bidegree = (a + N, b)
        D = derivation_with_leading(algebra, bidegree, (0, 1))
        if D is None:
            return Outcome.of(False, countercase=f"x^{a + N}y^{b}·y∂y does not extend to W_q")
        if D.apply(yN).is_zero():
            return Outcome.of(False, countercase=f"lift of x^{a + N}y^{b}·y∂y kills y^{N}")
    return Outcome.of(
        True,
        f"{len(monos)} central c: the lift of c·x^{N}·y∂y moves y^{N}, so it is not inner and c·w_q is not a coboundary",
    )


def run_qweyl_h2(run: ScenarioRun) -> None:
    N = run.scenario.root_order
    run.check(
        "qweyl.h2-bracket",
        "[c·x∂x∧y∂y, x^N/N] = c·x^N·y∂y for central c",
        "qweyl-h2-nontrivial",
        lambda: _h2_bracket(run, N),
    )
    run.check(
        "qweyl.h2-lift",
        "c·x^N·y∂y lifts to a non-inner derivation of W_q, so c·w_q is not a coboundary",
        "qweyl-h2-nontrivial",
        lambda: _h2_lift(run, N),
    )
