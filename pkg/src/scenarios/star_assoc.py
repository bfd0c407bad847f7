"""
DefCoh - Star Product Sanity Scenario

Associativity of the three Groenewold-Moyal stars on monomial triples,
their infinitesimals, the q-commutation of the quantum-plane star, the
identification of the normal-form star with W1, and a deliberately
broken star that the associativity check must reject.
"""

from fractions import Fraction

from ..core.hochschild import PolyDiffCochain, coefficient_ring, cup, wedge
from ..core.scalars import ScalarField
from ..core.starprod import (
    StarProduct,
    associativity_defect,
    commutation_defect,
    exp_h,
    group_action_check,
    moyal_star,
    quantum_plane_star,
    star_commutator,
    weyl_isomorphism_check,
    weyl_star,
)
from .report import Outcome
from .session import ScenarioRun

QP_ORDER_LIMIT = 5
QP_BOUND_LIMIT = 3
GROUP_ORDER_LIMIT = 3
GROUP_DEGREE = 2
WEYL_BOUND_LIMIT = 3


def corrupted_star() -> StarProduct:
    """x∂x⌣∂x at order 1 with the order-2 term of the normal-form star."""
    R = coefficient_ring(ScalarField.rational())
    x = R.gens[0]
    m = PolyDiffCochain.multiplication()
    m1 = PolyDiffCochain(2, {((1, 0), (1, 0)): x})
    m2 = PolyDiffCochain(2, {((2, 0), (0, 2)): 1}).scale(Fraction(1, 2))
    return StarProduct((m, m1, m2), name="corrupted")


def _clip(bound, limit):
    return (min(bound[0], limit), min(bound[1], limit))


def _moyal_commutator(run: ScenarioRun) -> Outcome:
    star = moyal_star(run.order)
    R = star.ring
    x, y, h = R.gens
    value = star_commutator(star, x, y)
    return Outcome.of(value == h, f"[x, y]_* = {value}", countercase=f"[x, y]_* = {value}, expected h")


def _associativity(star: StarProduct, bound) -> Outcome:
    result = associativity_defect(star, bound)
    return Outcome.of(result.passed, f"{star.describe()}: {result.describe()}", countercase=result.describe())


def _qp_commutation(run: ScenarioRun) -> Outcome:
    star = quantum_plane_star(run.order)
    defect = commutation_defect(star, exp_h(run.order))
    return Outcome.of(
        not defect,
        f"x * y = exp(h)·(y * x) mod h^{run.order + 1}",
        countercase=f"defect {defect}",
    )


def _infinitesimals(run: ScenarioRun) -> Outcome:
    dx, dy = PolyDiffCochain.partial(1, 0), PolyDiffCochain.partial(0, 1)
    R = coefficient_ring(ScalarField.rational())
    x, y = R.gens[0], R.gens[1]
    expected = [
        ("moyal", moyal_star(1).infinitesimal(), cup(dx, dy)),
        ("moyal-weyl", weyl_star(1).infinitesimal(), wedge(dx, dy)),
        ("quantum-plane", quantum_plane_star(1).infinitesimal(), cup(dx.scale(x), dy.scale(y))),
    ]
    for name, m1, target in expected:
        if m1 != target:
            return Outcome.of(False, countercase=f"{name}: m1 = {m1.render()}, expected {target.render()}")
    return Outcome.of(True, "; ".join(f"{name}: {m1.render()}" for name, m1, _ in expected))


def _weyl_identification(run: ScenarioRun) -> Outcome:
    bound = _clip(run.bound, WEYL_BOUND_LIMIT)
    result = weyl_isomorphism_check(bound)
    return Outcome.of(
        result.passed,
        f"{result.checked} monomial pairs within {bound}",
        countercase=f"fails on {result.failures[:3]}",
    )


def _group_action(run: ScenarioRun) -> Outcome:
    dx, dy = PolyDiffCochain.partial(1, 0), PolyDiffCochain.partial(0, 1)
    order = min(run.order, GROUP_ORDER_LIMIT)
    result = group_action_check([(dx, dy)], order, GROUP_DEGREE)
    return Outcome.of(
        result.passed,
        f"{result.checked} monomials of A⊗A, mod total h-degree {order + 1}",
        countercase=f"fails on {result.failures[:3]}",
    )


def _corruption(run: ScenarioRun) -> Outcome:
    result = associativity_defect(corrupted_star(), _clip(run.bound, QP_BOUND_LIMIT))
    detected = not result.passed and result.order == 2
    return Outcome.of(
        detected,
        f"rejected at order {result.order} on {result.triple}",
        countercase=f"corrupted star: {result.describe()}",
    )


def run_star_assoc(run: ScenarioRun) -> None:
    run.check(
        "star.moyal-commutator",
        "x * y - y * x = h for the normal-form star",
        "star-associativity",
        lambda: _moyal_commutator(run),
    )
    run.check(
        "star.moyal-assoc",
        "the normal-form star is associative on monomial triples",
        "star-associativity",
        lambda: _associativity(moyal_star(run.order), run.bound),
    )
    run.check(
        "star.weyl-assoc",
        "the symmetric Moyal-Weyl star is associative on monomial triples",
        "star-associativity",
        lambda: _associativity(weyl_star(run.order), _clip(run.bound, QP_BOUND_LIMIT)),
    )
    run.check(
        "star.qp-assoc",
        "the quantum-plane star is associative mod h^(K+1) on monomial triples",
        "star-associativity",
        lambda: _associativity(
            quantum_plane_star(min(run.order, QP_ORDER_LIMIT)), _clip(run.bound, QP_BOUND_LIMIT)
        ),
    )
    run.check(
        "star.qp-commutation",
        "x * y = exp(h)·(y * x) for the quantum-plane star",
        "star-commutation",
        lambda: _qp_commutation(run),
    )
    run.check(
        "star.infinitesimal",
        "each star's m1 is the cup (or wedge) of its derivation pair",
        "star-infinitesimal",
        lambda: _infinitesimals(run),
    )
    run.check(
        "star.weyl-identification",
        "x^i y^j ↦ y^j x^i turns the normal-form star at h = 1 into W1",
        "weyl-identification",
        lambda: _weyl_identification(run),
    )
    run.check(
        "star.group-action",
        "exp(h1·r)∘exp(h2·r) = exp((h1+h2)·r) for r = ∂x⊗∂y",
        "star-group-action",
        lambda: _group_action(run),
    )
    run.check(
        "star.corruption-detected",
        "a star with an inconsistent order-2 term fails associativity at order 2",
        "star-associativity",
        lambda: _corruption(run),
    )
