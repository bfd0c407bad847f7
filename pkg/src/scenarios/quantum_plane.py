"""
DefCoh - Quantum Plane Cohomology Scenario

W_qp = k{x,y}/(xy - q·yx) keeps the bigrading of k[x,y], so cohomology is
computed one bidegree at a time: the center from commutators, H^1 as
derivations modulo ad x^r y^s, and H^2 from χ_(r,s) of k[x,y].
"""

import logging
from itertools import product
from typing import Optional, Tuple

from ..core.hochschild import (
    PolyDiffCochain,
    TorsionVerdict,
    coefficient_ring,
    hkr_cohomology_dims,
    lift_is_coboundary,
    unobstructed_combinations,
    wedge,
)
from ..core.ncpoly import AlgebraSpec, NCPoly, center_basis, derivation_basis, inner_derivation
from ..core.scalars import ScalarField
from ..core.starprod import quantum_plane_star
from .report import Outcome, Verdict
from .session import ScenarioRun
from .sridharan import basis_vector_fields, criterion_rows

logger = logging.getLogger(__name__)

CRITERION_LIMIT = 4
LIFT_ORDER_LIMIT = 2


def plane_algebra(q_text: str) -> AlgebraSpec:
    return AlgebraSpec.from_descriptors(q_text, "0")


def is_central_bidegree(bidegree: Tuple[int, int], N: Optional[int]) -> bool:
    """x^r y^s is central in W_qp iff N divides r and s (only r = s = 0 for generic q)."""
    r, s = bidegree
    if r < 0 or s < 0:
        return False
    if N is None:
        return r == 0 and s == 0
    return r % N == 0 and s % N == 0


def expected_center(bound: Tuple[int, int], N: Optional[int]):
    return {(i, j) for i, j in product(range(bound[0] + 1), range(bound[1] + 1)) if is_central_bidegree((i, j), N)}


def first_cohomology_dim(algebra: AlgebraSpec, bidegree: Tuple[int, int]) -> Tuple[int, int]:
    """(number of derivations, dim H^1) at one bidegree."""
    r, s = bidegree
    count = len(derivation_basis(algebra, bidegree))
    inner = 0
    if r >= 0 and s >= 0 and not inner_derivation(NCPoly.monomial(algebra, r, s)).is_zero():
        inner = 1
    return count, count - inner


def _bidegrees(bound: Tuple[int, int]):
    return product(range(-1, bound[0] + 1), range(-1, bound[1] + 1))


def _center(run: ScenarioRun, algebra: AlgebraSpec) -> Outcome:
    N = algebra.root_order
    basis = center_basis(algebra, run.bound)
    found = set()
    for c in basis:
        if len(c.terms) != 1:
            return Outcome.of(False, countercase=f"central element {c.render()} is not a monomial")
        found.update(c.terms)
    expected = expected_center(run.bound, N)
    return Outcome.of(
        found == expected,
        f"{len(found)} central monomials within {run.bound}" + (f", generated by x^{N}, y^{N}" if N else ", only 1"),
        countercase=f"extra {sorted(found - expected)}, missing {sorted(expected - found)}",
    )


def _first_cohomology(run: ScenarioRun, algebra: AlgebraSpec) -> Outcome:
    N = algebra.root_order
    for bidegree in _bidegrees(run.bound):
        count, h1 = first_cohomology_dim(algebra, bidegree)
        central = is_central_bidegree(bidegree, N)
        r, s = bidegree
        expected_count = 2 if central else (1 if r >= 0 and s >= 0 else 0)
        expected_h1 = 2 if central else 0
        if (count, h1) != (expected_count, expected_h1):
            return Outcome.of(
                False,
                countercase=f"bidegree {bidegree}: {count} derivations, H^1 = {h1}; expected {expected_count}, {expected_h1}",
            )
    return Outcome.of(True, "H^1 = 2 at central bidegrees (x∂x, y∂y times the center), 0 elsewhere")


def second_cohomology_dim(algebra: AlgebraSpec, bidegree: Tuple[int, int]) -> int:
    """dim H^2 from χ_(r,s) = h0 - h1 + h2 and the computed h0, h1."""
    h0 = 1 if is_central_bidegree(bidegree, algebra.root_order) else 0
    _, h1 = first_cohomology_dim(algebra, bidegree)
    chi = sum((-1) ** n * d for n, d in enumerate(hkr_cohomology_dims(bidegree)))
    return chi - h0 + h1


def _second_cohomology(run: ScenarioRun, algebra: AlgebraSpec) -> Outcome:
    N = algebra.root_order
    ones = []
    for bidegree in _bidegrees(run.bound):
        h2 = second_cohomology_dim(algebra, bidegree)
        expected = 1 if is_central_bidegree(bidegree, N) or bidegree == (-1, -1) else 0
        if h2 != expected:
            return Outcome.of(False, countercase=f"H^2 at {bidegree} = {h2}, expected {expected}")
        if h2:
            ones.append(bidegree)
    return Outcome.of(True, f"H^2 = 1 at {ones[:6]}{'...' if len(ones) > 6 else ''} (z_qp at (-1,-1)), 0 elsewhere")


def _lift_criterion(run: ScenarioRun) -> Outcome:
    m1 = quantum_plane_star(1).infinitesimal()
    limit = (min(run.bound[0], CRITERION_LIMIT), min(run.bound[1], CRITERION_LIMIT))
    checked = 0
    for bidegree in _bidegrees(limit):
        fields = basis_vector_fields(bidegree)
        if not fields:
            continue
        labels = [label for label, _ in fields]
        rows, _ = unobstructed_combinations([z for _, z in fields], m1)
        expected = criterion_rows(labels, {"dx": bidegree[0], "dy": bidegree[1]})
        checked += 1
        if rows != expected:
            return Outcome.of(False, countercase=f"bidegree {bidegree}: solved {rows}, criterion {expected}")
    return Outcome.of(True, f"{checked} bidegrees, unobstructed span = kernel of a·y - xy·a_x + b·x - xy·b_y")


def _lifts_to_itself(run: ScenarioRun) -> Outcome:
    R = coefficient_ring(ScalarField.rational())
    x, y = R.gens[0], R.gens[1]
    z = wedge(PolyDiffCochain.partial(1, 0, x), PolyDiffCochain.partial(0, 1, y))
    star = quantum_plane_star(min(run.order, LIFT_ORDER_LIMIT))
    result = lift_is_coboundary(z, star, escalations=1)
    window = result.window.describe()
    if result.verdict is TorsionVerdict.LIFTS_NONTRIVIALLY:
        itself = result.lift == z.truncate(star.order)
        witness = "lifts to itself" if itself else f"lifts to {result.lift.render()}"
        return Outcome(Verdict.NONE_AT_WINDOW, witness + "; no torsion witness in the window", window)
    return Outcome.of(False, countercase=f"x∂x∧y∂y: {result.verdict.value}, r = {result.power}", window=window)


def run_qp_cohomology(run: ScenarioRun) -> None:
    algebra = plane_algebra(run.scenario.q)
    run.check(
        "qp.center",
        "the center of W_qp is k[x^N, y^N] at a primitive N-th root of unity, k otherwise",
        "qp-center",
        lambda: _center(run, algebra),
    )
    run.check(
        "qp.first-cohomology",
        "H^1 of W_qp is free of rank 2 over the center on x∂x, y∂y",
        "qp-first-cohomology",
        lambda: _first_cohomology(run, algebra),
    )
    run.check(
        "qp.second-cohomology",
        "H^2 of W_qp is k·z_qp plus the center times x∂x∧y∂y",
        "qp-second-cohomology",
        lambda: _second_cohomology(run, algebra),
    )
    run.check(
        "qp.lift-criterion",
        "a∂x + b∂y is unobstructed under x∂x⌣y∂y iff a·y - xy·a_x + b·x - xy·b_y = 0",
        "qp-lift-criterion",
        lambda: _lift_criterion(run),
    )
    run.check(
        "qp.lifts-to-itself",
        "x∂x∧y∂y lifts to itself and no lift becomes an h-torsion coboundary",
        "qp-second-cohomology",
        lambda: _lifts_to_itself(run),
    )
