"""
DefCoh - Weyl Algebra Vanishing Scenario

The normal-form star (pair ∂x, ∂y) deforms k[x,y] into W_h. A derivation
D = a∂x + b∂y has primary obstruction zero exactly when a_x = -b_y, and
then lifts to the inner derivation (1/h)·ad c with c_x = b, c_y = -a.
Every x^r y^s ∂x⌣∂y is the cup of two such lifts and so becomes an
h-torsion coboundary. Together these give H^1 = H^2 = 0 for W_h.
"""

import logging
from itertools import product
from typing import Dict, List, Tuple

from ..core.hochschild import (
    PolyDiffCochain,
    TorsionVerdict,
    coboundary,
    coefficient_ring,
    cup,
    deformed_window_dims,
    inner_lift,
    lift_is_coboundary,
    unobstructed_combinations,
)
from ..core.ncpoly import AlgebraSpec, NCPoly
from ..core.scalars import ScalarField, hbar_valuation
from ..core.starprod import monomials_within, moyal_star
from ..utils.linalg import echelon_rows, kernel
from .report import Outcome, Verdict
from .session import ScenarioRun

logger = logging.getLogger(__name__)

RATIONAL = ScalarField.rational()
CUP_LIFT_LIMIT = 3
VANISHING_LIMIT = 2
VANISHING_ORDER = 2
TORSION_ORDER = 3


def _monomial(i: int, j: int, coeff=1):
    R = coefficient_ring(RATIONAL)
    return R.from_dict({(i, j, 0): RATIONAL.convert(coeff)})


def basis_vector_fields(bidegree: Tuple[int, int]) -> List[Tuple[str, PolyDiffCochain]]:
    """x^(u+1)y^v ∂x and x^u y^(v+1) ∂y, whichever exist."""
    u, v = bidegree
    out = []
    if u + 1 >= 0 and v >= 0:
        out.append(("dx", PolyDiffCochain.partial(1, 0, _monomial(u + 1, v))))
    if u >= 0 and v + 1 >= 0:
        out.append(("dy", PolyDiffCochain.partial(0, 1, _monomial(u, v + 1))))
    return out


def criterion_rows(labels: List[str], weights: Dict[str, int]):
    """Echelon basis of the coefficient vectors c with Σ weights[label]·c_label = 0."""
    domain = RATIONAL.domain
    columns = [{"criterion": domain.convert(weights[label])} if weights[label] else {} for label in labels]
    rows, _ = echelon_rows(kernel(columns, domain), domain)
    return rows


def sridharan_potential(alpha, beta, bidegree: Tuple[int, int]):
    """
    c with c_x = b and c_y = -a for a = α·x^(u+1)y^v, b = β·x^u y^(v+1).

    Requires α(u+1) + β(v+1) = 0; c is a multiple of x^(u+1)y^(v+1).
    """
    u, v = bidegree
    domain = RATIONAL.domain
    if u + 1:
        gamma = domain.convert(beta) / domain.convert(u + 1)
    else:
        gamma = -domain.convert(alpha) / domain.convert(v + 1)
    return _monomial(u + 1, v + 1, gamma)


def to_weyl(p, algebra: AlgebraSpec) -> NCPoly:
    """x^i y^j h^e ↦ h^e·y^j x^i in W_h (anti-normal identification)."""
    field = algebra.field
    total = algebra.zero()
    for (i, j, e), c in p.items():
        word = NCPoly.monomial(algebra, 0, j) * NCPoly.monomial(algebra, i, 0)
        total = total + word.scale(field.convert(c) * field.h**e)
    return total


def _agrees_mod(difference: NCPoly, order: int) -> bool:
    field = difference.algebra.field
    return all(hbar_valuation(c, field) > order for c in difference.terms.values())


def _derivation_bidegrees(bound: Tuple[int, int]):
    return list(product(range(-1, bound[0] + 1), range(-1, bound[1] + 1)))


def _obstruction_criterion(run: ScenarioRun) -> Outcome:
    m1 = moyal_star(1).infinitesimal()
    checked = 0
    for bidegree in _derivation_bidegrees(run.bound):
        fields = basis_vector_fields(bidegree)
        if not fields:
            continue
        labels = [label for label, _ in fields]
        rows, _ = unobstructed_combinations([z for _, z in fields], m1)
        expected = criterion_rows(labels, {"dx": bidegree[0] + 1, "dy": bidegree[1] + 1})
        checked += 1
        if rows != expected:
            return Outcome.of(False, countercase=f"bidegree {bidegree}: solved {rows}, criterion {expected}")
    return Outcome.of(True, f"{checked} bidegrees, unobstructed span = kernel of a_x + b_y")


def unobstructed_derivations(bound: Tuple[int, int]):
    """(bidegree, D, c) for every unobstructed basis combination in range."""
    m1 = moyal_star(1).infinitesimal()
    out = []
    for bidegree in _derivation_bidegrees(bound):
        fields = dict(basis_vector_fields(bidegree))
        if not fields:
            continue
        rows, _ = unobstructed_combinations(list(fields.values()), m1)
        for row in rows:
            coeffs = dict(zip(fields, row))
            alpha = coeffs.get("dx", 0)
            beta = coeffs.get("dy", 0)
            D = PolyDiffCochain.zero(1)
            for label, value in coeffs.items():
                D = D + fields[label].scale(value)
            out.append((bidegree, D, sridharan_potential(alpha, beta, bidegree)))
    return out


def _inner_lift(run: ScenarioRun) -> Outcome:
    star = moyal_star(run.order)
    M = star.layered()
    algebra = AlgebraSpec.weyl_hbar()
    R = star.ring
    h = R.gens[2]
    monos = [R.from_dict({(i, j, 0): 1}) for i, j in monomials_within(run.bound)]
    derivations = unobstructed_derivations(run.bound)

    for bidegree, D, c in derivations:
        lift = inner_lift(PolyDiffCochain.element(c), star)
        if lift.component(0) != D:
            return Outcome.of(False, countercase=f"(1/h)ad c does not start with {D.render()} at {bidegree}")
        if not coboundary(lift, M).is_zero():
            return Outcome.of(False, countercase=f"(1/h)ad c is not a δ_h-cocycle at {bidegree}")
        c_weyl = to_weyl(c, algebra)
        for w in monos:
            star_side = to_weyl(h * lift(w), algebra)
            weyl_side = c_weyl.commutator(to_weyl(w, algebra))
            if not _agrees_mod(star_side - weyl_side, run.order):
                return Outcome.of(False, countercase=f"c = {c}, w = {w}: h·lift(w) != [c, w] in W_h")
    return Outcome.of(True, f"{len(derivations)} lifts matched [c, w] on {len(monos)} monomials mod h^{run.order + 1}")


def _cup_lift(run: ScenarioRun) -> Outcome:
    K = run.order
    star = moyal_star(K)
    M = star.layered()
    limit = min(min(run.bound), CUP_LIFT_LIMIT)
    count = 0
    for r, s in product(range(limit + 1), repeat=2):
        c1 = _monomial(0, s + 1, RATIONAL.convert(-1) / RATIONAL.convert(s + 1))
        c2 = _monomial(r + 1, 0, RATIONAL.convert(1) / RATIONAL.convert(r + 1))
        Z1 = inner_lift(PolyDiffCochain.element(c1), star)
        Z2 = inner_lift(PolyDiffCochain.element(c2), star)
        lifted = cup(Z1, Z2, M)
        target = PolyDiffCochain(2, {((1, 0), (0, 1)): _monomial(r, s)})
        if lifted.component(0) != target:
            return Outcome.of(False, countercase=f"lift of x^{r}y^{s} ∂x⌣∂y starts with {lifted.component(0).render()}")
        witness = cup(PolyDiffCochain.element(-c1), Z2, M)
        if coboundary(witness, M).truncate(K - 1) != lifted.shift(1).truncate(K - 1):
            return Outcome.of(False, countercase=f"δ_h f != h·z_h for x^{r}y^{s} ∂x⌣∂y")
        count += 1
    return Outcome.of(True, f"{count} cocycles x^r y^s ∂x⌣∂y, r,s <= {limit}: δ_h((-c1)⌣Z2) = h·(Z1⌣Z2) mod h^{K}")


def _torsion(run: ScenarioRun) -> Outcome:
    star = moyal_star(min(run.order, TORSION_ORDER))
    z = PolyDiffCochain(2, {((1, 0), (0, 1)): 1})
    result = lift_is_coboundary(z, star)
    window = result.window.describe()
    if result.verdict is TorsionVerdict.LIFTS_TO_COBOUNDARY and result.power == 1:
        return Outcome.of(True, f"f = {result.witness.render()}, r = 1", window=window)
    if result.verdict is TorsionVerdict.LIFTS_NONTRIVIALLY:
        return Outcome(Verdict.NONE_AT_WINDOW, "no torsion witness found", window)
    return Outcome.of(False, countercase=f"{result.verdict.value}, r = {result.power}", window=window)


def vanishing_range(run: ScenarioRun) -> Tuple[int, int]:
    """Bidegree limit and star order of the window-vanishing sweep."""
    limit = min(min(run.bound), VANISHING_LIMIT)
    order = min(run.order, VANISHING_ORDER)
    if max(run.bound) > limit:
        logger.warning("window vanishing clipped to bidegrees in [-1,%d]^2 (bound %s)", limit, run.bound)
    if run.order > order:
        logger.warning("window vanishing clipped to star order %d (order %d)", order, run.order)
    return limit, order


def _vanishing(run: ScenarioRun) -> Outcome:
    limit, order = vanishing_range(run)
    star = moyal_star(order)
    excess = []
    windows = set()
    for arity in range(3):
        for bidegree in product(range(-1, limit + 1), repeat=2):
            dims = deformed_window_dims(star, arity, bidegree)
            windows.add(dims.window.describe())
            expected = 1 if arity == 0 and bidegree == (0, 0) else 0
            if dims.dim < expected:
                return Outcome.of(False, countercase=f"H^{arity} at {bidegree}: {dims.dim} < {expected}")
            if dims.dim > expected:
                excess.append(f"H^{arity}{bidegree}={dims.dim}")
    window = ";".join(sorted(windows))
    if excess:
        return Outcome(Verdict.NONE_AT_WINDOW, "classes without torsion witness: " + ", ".join(excess), window)
    return Outcome.of(True, f"H^0 = k at (0,0); H^1 = H^2 = 0 on bidegrees in [-1,{limit}]^2", window=window)


def run_sridharan(run: ScenarioRun) -> None:
    run.check(
        "sridharan.obstruction-criterion",
        "the primary obstruction of a∂x + b∂y under ∂x⌣∂y vanishes iff a_x = -b_y",
        "weyl-obstruction-criterion",
        lambda: _obstruction_criterion(run),
    )
    run.check(
        "sridharan.inner-lift",
        "every unobstructed derivation lifts to (1/h)·ad c with c_x = b, c_y = -a",
        "weyl-inner-lift",
        lambda: _inner_lift(run),
    )
    run.check(
        "sridharan.cup-lift",
        "x^r y^s ∂x⌣∂y lifts to a coboundary through the cup of inner lifts",
        "weyl-cup-lift",
        lambda: _cup_lift(run),
    )
    run.check(
        "sridharan.torsion",
        "∂x⌣∂y lifts and h·z_h is a δ_h-coboundary",
        "hbar-torsion",
        lambda: _torsion(run),
    )
    run.check(
        "sridharan.window-vanishing",
        "window cohomology of W_h: H^0 = k, H^1 = H^2 = 0",
        "weyl-vanishing",
        lambda: _vanishing(run),
    )
