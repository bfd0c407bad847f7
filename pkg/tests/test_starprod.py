"""Tests for Groenewold-Moyal star products and their identities."""

import pytest

from src.core.exceptions import InvalidParameters, NonCommutingDerivations
from src.core.hochschild import PolyDiffCochain, cup, wedge
from src.core.ncpoly import AlgebraSpec
from src.core.starprod import (
    associativity_defect,
    commutation_defect,
    exp_h,
    gm_star,
    group_action_check,
    moyal_star,
    parse_pairs,
    parse_vector_field,
    quantum_plane_star,
    specialize_at_one,
    star_apply,
    star_commutator,
    weyl_identification,
    weyl_isomorphism_check,
    weyl_star,
)

DX = PolyDiffCochain.partial(1, 0)
DY = PolyDiffCochain.partial(0, 1)


def gens(R):
    return R.gens[0], R.gens[1], R.gens[2]


class TestMoyal:
    def test_generators(self, R):
        x, y, h = gens(R)
        star = moyal_star()
        assert star_apply(star, x, y) == x * y + h
        assert star_apply(star, y, x) == x * y
        assert star_commutator(star, x, y) == h

    def test_exact_mode_terminates(self, R):
        x, y, h = gens(R)
        star = moyal_star(1)
        assert star.exact
        # x^2 * y^2 needs the h^2 term even though the star was built to order 1
        assert star_apply(star, x ** 2, y ** 2) == x ** 2 * y ** 2 + 4 * h * x * y + 2 * h ** 2

    def test_associative(self):
        assert associativity_defect(moyal_star(4), (2, 2)).passed

    def test_infinitesimal_is_the_cup(self):
        assert moyal_star(3).infinitesimal() == cup(DX, DY)
        assert weyl_star(3).infinitesimal() == wedge(DX, DY)

    def test_weyl_star_is_symmetric(self, R):
        x, y, h = gens(R)
        star = weyl_star(2)
        assert star_apply(star, x, y) == x * y + h / 2
        assert star_apply(star, y, x) == x * y - h / 2


class TestQuantumPlane:
    def test_commutation(self):
        K = 4
        star = quantum_plane_star(K)
        assert not star.exact
        assert not commutation_defect(star, exp_h(K))

    def test_associative_mod_truncation(self):
        assert associativity_defect(quantum_plane_star(3), (2, 2)).passed

    def test_specialization_refused(self, R):
        x, _, _ = gens(R)
        with pytest.raises(InvalidParameters):
            specialize_at_one(quantum_plane_star(2), x)


class TestGM:
    def test_empty_pair_list_is_undeformed(self, R):
        x, y, _ = gens(R)
        star = gm_star([], 3)
        assert star_apply(star, x ** 2 + y, x * y) == (x ** 2 + y) * x * y

    def test_noncommuting_pairs(self, R):
        x, _, _ = gens(R)
        with pytest.raises(NonCommutingDerivations):
            gm_star([(DX, PolyDiffCochain.partial(0, 1, x))], 2)

    def test_negative_order(self):
        with pytest.raises(InvalidParameters):
            gm_star([(DX, DY)], -1)

    def test_truncated(self):
        star = moyal_star(4).truncated(2)
        assert star.order == 2

    def test_describe(self):
        assert moyal_star(2).describe() == "moyal (exact)"
        assert quantum_plane_star(2).describe() == "quantum-plane (mod h^3)"


class TestIdentification:
    def test_weyl_isomorphism(self):
        result = weyl_isomorphism_check((2, 2))
        assert result.passed
        assert result.checked == 81

    def test_anti_normal_order(self, R):
        x, y, _ = gens(R)
        weyl = AlgebraSpec.weyl()
        assert weyl_identification(x * y, weyl) == weyl.y() * weyl.x()

    def test_h_must_be_specialized(self, R):
        x, _, h = gens(R)
        with pytest.raises(ValueError):
            weyl_identification(h * x, AlgebraSpec.weyl())

    def test_specialize_at_one(self, R):
        x, y, h = gens(R)
        assert specialize_at_one(moyal_star(), x * y + h) == x * y + 1


class TestGroupAction:
    def test_single_pair(self):
        assert group_action_check([(DX, DY)], 3, 1).passed

    def test_quantum_plane_pair(self, R):
        x, y, _ = gens(R)
        pairs = [(PolyDiffCochain.partial(1, 0, x), PolyDiffCochain.partial(0, 1, y))]
        result = group_action_check(pairs, 2, 1)
        assert result.passed
        assert result.checked == 16


class TestParsing:
    def test_vector_field(self, R):
        x, y, _ = gens(R)
        assert parse_vector_field("x*dx + 1/2*dy") == PolyDiffCochain.vector_field(x, R(1) / 2)

    def test_pairs(self):
        pairs = parse_pairs("(dx,dy);(x*dx,y*dy)")
        assert len(pairs) == 2
        assert pairs[0] == (DX, DY)

    @pytest.mark.parametrize("text", ["(dx)", "(dx,dy,dx)", "(dx*dy,dx)", "(x,dy)"])
    def test_rejects(self, text):
        with pytest.raises(InvalidParameters):
            parse_pairs(text)
