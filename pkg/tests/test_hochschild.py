"""Tests for polydifferential cochains, the Gerstenhaber calculus and window solves."""

from fractions import Fraction

import numpy as np
import pytest

from src.core.exceptions import (
    DivisibilityError,
    IncompatibleFields,
    InhomogeneousCochain,
    InvalidParameters,
    NotACocycle,
    OutOfRange,
)
from src.core.hochschild import (
    CochainWindow,
    PolyDiffCochain,
    TorsionVerdict,
    coboundary,
    coefficient_ring,
    compose,
    cup,
    gerstenhaber,
    hkr_cohomology_dims,
    inner_lift,
    deformed_window_dims,
    lift_cocycle,
    lift_is_coboundary,
    primary_obstruction,
    skew_part,
    solve_coboundary,
    solve_layered_coboundary,
    symmetric_part,
    transpose,
    unobstructed_combinations,
    wedge,
    window_cohomology_dims,
)
from src.core.scalars import ScalarField
from src.core.starprod import moyal_star

from .conftest import random_cochain, random_homogeneous, random_poly

DX = PolyDiffCochain.partial(1, 0)
DY = PolyDiffCochain.partial(0, 1)
SEEDS = range(50)


def gens(R):
    return R.gens[0], R.gens[1], R.gens[2]


def hamiltonian_field(rng):
    """-c_y∂x + c_x∂y for a random monomial c; homogeneous and unobstructed."""
    x, y, _ = gens(coefficient_ring(ScalarField.rational()))
    i = j = 0
    while i + j == 0:
        i, j = (int(v) for v in rng.integers(0, 3, size=2))
    c = int(rng.choice([-2, -1, 1, 2])) * x ** i * y ** j
    return PolyDiffCochain.vector_field(-c.diff(y), c.diff(x))


class TestCochains:
    def test_evaluation(self, R):
        x, y, _ = gens(R)
        F = PolyDiffCochain.partial(2, 1, 3 * x)
        assert F(x ** 3 * y ** 2) == 3 * x * 6 * x * 2 * y

    def test_zero_terms_dropped(self, R):
        x, _, _ = gens(R)
        F = PolyDiffCochain.partial(1, 0, x) - PolyDiffCochain.partial(1, 0, x)
        assert F.is_zero()
        assert F == PolyDiffCochain.zero(1)

    def test_bidegree(self, R):
        x, y, _ = gens(R)
        assert PolyDiffCochain.partial(1, 0, x ** 2 * y).bidegree() == (1, 1)
        assert cup(DX, DY).bidegree() == (-1, -1)
        with pytest.raises(InhomogeneousCochain):
            (DX + DY).bidegree()

    def test_layers(self, R):
        x, _, h = gens(R)
        F = PolyDiffCochain(1, {((1, 0),): x + h * x ** 2}, order=2)
        assert F.component(0) == PolyDiffCochain.partial(1, 0, x)
        assert F.component(1) == PolyDiffCochain.partial(1, 0, x ** 2)
        assert F.shift(1).divide_by_h() == F
        with pytest.raises(DivisibilityError):
            F.divide_by_h()

    def test_truncation(self, R):
        x, _, h = gens(R)
        F = PolyDiffCochain(1, {((1, 0),): x + h ** 3}, order=2)
        assert F == PolyDiffCochain.partial(1, 0, x).truncate(2)

    def test_scale_by_fraction_and_polynomial(self, R):
        x, _, _ = gens(R)
        assert DX.scale(Fraction(1, 2)).scale(2) == DX
        assert DX.scale(x) == PolyDiffCochain.partial(1, 0, x)

    def test_h_in_field_rejected(self):
        with pytest.raises(IncompatibleFields):
            coefficient_ring(ScalarField.rational(hbar=True))

    def test_render(self, R):
        x, _, _ = gens(R)
        assert cup(DX, DY).render() == "[dx|dy]"
        assert PolyDiffCochain.partial(2, 0, -x).render() == "-x*[dx^2]"


class TestLowArityFormulas:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_vector_field_on_two_cochain(self, seed):
        rng = np.random.default_rng(seed)
        F1, F2 = random_cochain(rng, 1), random_cochain(rng, 2)
        a, b = random_poly(rng), random_poly(rng)
        expected = F1(F2(a, b)) - F2(F1(a), b) - F2(a, F1(b))
        assert gerstenhaber(F1, F2)(a, b) == expected

    @pytest.mark.parametrize("seed", SEEDS)
    def test_vector_field_on_element(self, seed):
        rng = np.random.default_rng(seed)
        F1, c = random_cochain(rng, 1), random_poly(rng)
        assert gerstenhaber(F1, PolyDiffCochain.element(c))() == F1(c)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_commutator_of_operators(self, seed):
        rng = np.random.default_rng(seed)
        F, G, p = random_cochain(rng, 1), random_cochain(rng, 1), random_poly(rng)
        assert gerstenhaber(F, G)(p) == F(G(p)) - G(F(p))
        assert compose(F, G)(p) == F(G(p))

    @pytest.mark.parametrize("seed", SEEDS)
    def test_coboundary_formulas(self, seed):
        rng = np.random.default_rng(seed)
        f, F = random_cochain(rng, 1), random_cochain(rng, 2)
        a, b, c = random_poly(rng), random_poly(rng), random_poly(rng)
        assert coboundary(f)(a, b) == a * f(b) - f(a * b) + f(a) * b
        assert coboundary(F)(a, b, c) == a * F(b, c) - F(a * b, c) + F(a, b * c) - F(a, b) * c

    def test_cup(self, R):
        x, y, _ = gens(R)
        a, b = x ** 2 * y, x * y ** 3
        assert cup(DX, DY)(a, b) == a.diff(x) * b.diff(y)


class TestProperties:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_coboundary_squares_to_zero(self, seed):
        rng = np.random.default_rng(seed)
        for arity in (0, 1, 2):
            z = random_cochain(rng, arity)
            assert coboundary(coboundary(z)).is_zero()

    @pytest.mark.parametrize("seed", SEEDS)
    def test_deformed_coboundary_squares_to_zero(self, seed):
        rng = np.random.default_rng(seed)
        M = moyal_star(2).layered()
        z = random_cochain(rng, 1)
        assert coboundary(coboundary(z, M), M).is_zero()

    @pytest.mark.parametrize("seed", SEEDS)
    def test_bidegree_is_additive(self, seed):
        rng = np.random.default_rng(seed)
        b1 = tuple(int(v) for v in rng.integers(-1, 3, size=2))
        b2 = tuple(int(v) for v in rng.integers(-1, 3, size=2))
        F = random_homogeneous(rng, 1, b1)
        G = random_homogeneous(rng, 2, b2)
        total = (b1[0] + b2[0], b1[1] + b2[1])
        for result in (gerstenhaber(F, G), cup(F, G)):
            if not result.is_zero():
                assert result.bidegree() == total

    @pytest.mark.parametrize("seed", SEEDS)
    def test_vector_fields_act_by_derivations_on_cups(self, seed):
        rng = np.random.default_rng(seed)
        D = PolyDiffCochain.vector_field(random_poly(rng), random_poly(rng))
        p, q = (int(v) for v in rng.integers(1, 3, size=2))
        F, G = random_cochain(rng, p), random_cochain(rng, q)
        expected = cup(gerstenhaber(D, F), G) + cup(F, gerstenhaber(D, G))
        assert gerstenhaber(D, cup(F, G)) == expected

    @pytest.mark.parametrize("seed", SEEDS)
    def test_bracket_is_graded_antisymmetric(self, seed):
        rng = np.random.default_rng(seed)
        p, q = (int(v) for v in rng.integers(1, 4, size=2))
        F, G = random_cochain(rng, p), random_cochain(rng, q)
        sign = -((-1) ** ((p - 1) * (q - 1)))
        assert gerstenhaber(F, G) == gerstenhaber(G, F).scale(sign)

    @pytest.mark.parametrize("seed", range(20))
    def test_skew_and_symmetric_parts(self, seed):
        rng = np.random.default_rng(seed)
        F = random_cochain(rng, 2)
        skew, sym = skew_part(F), symmetric_part(F)
        assert skew + sym == F
        assert transpose(skew) == -skew
        assert transpose(sym) == sym

    def test_vector_fields_are_cocycles(self, R):
        x, y, _ = gens(R)
        assert coboundary(PolyDiffCochain.vector_field(x ** 2 * y, y - x)).is_zero()

    def test_cups_of_vector_fields_are_cocycles(self, R):
        x, y, _ = gens(R)
        assert coboundary(cup(PolyDiffCochain.partial(1, 0, x), PolyDiffCochain.partial(0, 1, y))).is_zero()

    def test_wedge_is_skew(self):
        w = wedge(DX, DY)
        assert transpose(w) == -w
        assert w == skew_part(cup(DX, DY))


class TestWindows:
    def test_parse(self):
        window = CochainWindow.parse("order=2,deg=6", 1, (0, 0))
        assert (window.arity, window.max_order, window.max_degree) == (1, 2, 6)
        assert window.escalate().describe() == "order=3,deg=8"

    @pytest.mark.parametrize("text", ["order=2", "deg=3,order=x", ""])
    def test_parse_rejects(self, text):
        with pytest.raises(InvalidParameters):
            CochainWindow.parse(text, 1, (0, 0))

    def test_basis_is_homogeneous(self):
        window = CochainWindow(2, (1, 0), 3, 4)
        basis = window.basis()
        assert basis
        assert all(e.bidegree() == (1, 0) for e in basis)
        assert all(e.max_order() <= 3 and e.max_degree() <= 4 for e in basis)


class TestCoboundaries:
    def test_finds_witness(self):
        F = coboundary(PolyDiffCochain.partial(2, 0))
        assert F == cup(DX, DX).scale(-2)
        solution = solve_coboundary(F)
        assert solution.found
        assert coboundary(solution.witness) == F

    def test_skew_class_is_not_a_coboundary(self):
        solution = solve_coboundary(wedge(DX, DY))
        assert not solution.found
        assert solution.escalations == 3
        assert solution.describe().startswith("NONE-AT-WINDOW")

    def test_zero(self):
        assert solve_coboundary(PolyDiffCochain.zero(2)).found

    def test_requires_cocycle(self, R):
        x, _, _ = gens(R)
        F = PolyDiffCochain(2, {((1, 0), (0, 0)): x})
        with pytest.raises(NotACocycle):
            solve_coboundary(F)


class TestLifting:
    def test_euler_field_is_obstructed(self, R):
        x, y, _ = gens(R)
        m1 = moyal_star(1).infinitesimal()
        euler = PolyDiffCochain.vector_field(x, y)
        result = primary_obstruction(euler, m1)
        assert result.obstruction == m1.scale(-2)
        assert not result.vanishes

    def test_hamiltonian_field_is_unobstructed(self, R):
        x, y, _ = gens(R)
        m1 = moyal_star(1).infinitesimal()
        assert primary_obstruction(PolyDiffCochain.vector_field(x, -y), m1).vanishes

    def test_lift_cocycle(self, R):
        x, y, _ = gens(R)
        star = moyal_star(2)
        lifted = lift_cocycle(PolyDiffCochain.vector_field(x, -y), star)
        assert lifted.lifted
        assert coboundary(lifted.lift, star.layered()).is_zero()

        blocked = lift_cocycle(PolyDiffCochain.vector_field(x, y), star)
        assert not blocked.lifted
        assert blocked.failed_order == 1

    def test_inner_lift(self, R):
        x, y, _ = gens(R)
        star = moyal_star(3)
        lift = inner_lift(PolyDiffCochain.element(x ** 2 * y), star)
        assert lift.component(0) == PolyDiffCochain.vector_field(-x ** 2, 2 * x * y)
        assert coboundary(lift, star.layered()).is_zero()


class TestCohomology:
    @pytest.mark.parametrize(
        "bidegree, dims",
        [((0, 0), (1, 2, 1)), ((3, 1), (1, 2, 1)), ((-1, -1), (0, 0, 1)), ((-1, 2), (0, 1, 1))],
    )
    def test_hkr(self, bidegree, dims):
        assert hkr_cohomology_dims(bidegree) == dims

    def test_hkr_range(self):
        with pytest.raises(OutOfRange):
            hkr_cohomology_dims((-2, 0))

    @pytest.mark.parametrize("arity, expected", [(0, 1), (1, 2), (2, 1)])
    def test_window_matches_hkr(self, arity, expected):
        dims = window_cohomology_dims(None, arity, (0, 0))
        assert dims.dim == expected
        assert len(dims.witnesses) == expected
        assert all(coboundary(w).is_zero() for w in dims.witnesses)

    def test_row(self):
        row = window_cohomology_dims(None, 2, (-1, -1)).to_row()
        assert row["dim"] == 1
        assert row["bidegree"] == [-1, -1]
        assert set(row) == {"arity", "bidegree", "window", "dim", "witnesses"}


class TestDeformedSolves:
    def test_layered_coboundary(self):
        star = moyal_star(2)
        M = star.layered()
        F = coboundary(PolyDiffCochain.partial(2, 0), M)
        solution = solve_layered_coboundary(F, star)
        assert solution.found
        assert coboundary(solution.witness, M) == F

    def test_unobstructed_combinations(self, R):
        x, y, _ = gens(R)
        m1 = moyal_star(1).infinitesimal()
        fields = [PolyDiffCochain.partial(1, 0, x), PolyDiffCochain.partial(0, 1, y)]
        rows, window = unobstructed_combinations(fields, m1)
        assert rows == [[1, -1]]
        assert window is not None

    def test_torsion(self):
        result = lift_is_coboundary(cup(DX, DY), moyal_star(3))
        assert result.verdict is TorsionVerdict.LIFTS_TO_COBOUNDARY
        assert result.power == 1

    @pytest.mark.parametrize("seed", SEEDS)
    def test_cup_of_lifts_lifts_the_cup(self, seed):
        rng = np.random.default_rng(seed)
        star = moyal_star(2)
        M = star.layered()
        z1, z2 = hamiltonian_field(rng), hamiltonian_field(rng)
        l1, l2 = lift_cocycle(z1, star), lift_cocycle(z2, star)
        assert l1.lifted and l2.lifted

        product = cup(l1.lift, l2.lift, M)
        assert coboundary(product, M).is_zero()
        assert product.component(0) == cup(z1, z2)

        l12 = lift_cocycle(cup(z1, z2), star)
        assert l12.lifted
        difference = product - l12.lift
        assert difference.component(0).is_zero()
        window = CochainWindow.around(cup(z1, z2), arity=1)
        solution = solve_layered_coboundary(difference, star, window)
        assert solution.found
        assert (coboundary(solution.witness, M) - difference).is_zero()

    def test_torsion_needs_a_lift(self, R):
        x, y, _ = gens(R)
        result = lift_is_coboundary(PolyDiffCochain.vector_field(x, y), moyal_star(2))
        assert result.verdict is TorsionVerdict.OBSTRUCTED
        assert result.witness is None

    @pytest.mark.parametrize("bidegree, dim", [((0, 0), 1), ((1, 0), 0)])
    def test_deformed_center(self, bidegree, dim):
        star = moyal_star(2)
        assert deformed_window_dims(star, 0, bidegree).dim == dim
        assert window_cohomology_dims(star, 0, bidegree).dim == dim
