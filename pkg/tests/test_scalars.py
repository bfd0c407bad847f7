"""Tests for exact scalar fields, q-integers, embeddings and h-series."""

from fractions import Fraction

import pytest

from src.core import scalars
from src.core.exceptions import (
    DivisibilityError,
    DivisionByZero,
    IncompatibleFields,
    InvalidParameters,
    NoEmbedding,
    PoleAtSpecialization,
)
from src.core.scalars import HSeries, ScalarField, embed, hbar_valuation, parse_descriptor, q_integer


class TestQInteger:
    def test_symbolic(self):
        field = ScalarField.ratfunc()
        q = field.q
        assert q_integer(3, q, field) == field.one + q + q * q

    @pytest.mark.parametrize("n", [0, 1, 4, 7])
    def test_classical_limit(self, n):
        field = ScalarField.rational()
        assert q_integer(n, 1, field) == field.convert(n)

    @pytest.mark.parametrize("N", [3, 5, 7])
    def test_vanishes_at_root_of_unity(self, N):
        field = ScalarField.cyclotomic(N)
        assert not q_integer(N, field.q, field)
        assert q_integer(N - 1, field.q, field)

    def test_minus_one(self):
        field = ScalarField.cyclotomic(2)
        assert field.q == -field.one
        assert not q_integer(2, field.q, field)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            q_integer(-1, 1, ScalarField.rational())


class TestDescriptors:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("symbolic", ("symbolic", None)),
            ("zeta:5", ("zeta", 5)),
            (" 3/2 ", ("value", Fraction(3, 2))),
            ("-2", ("value", Fraction(-2))),
        ],
    )
    def test_parse(self, text, expected):
        assert parse_descriptor(text) == expected

    @pytest.mark.parametrize("text", ["zeta:0", "zeta:x", "q", "1/0"])
    def test_rejected(self, text):
        with pytest.raises(InvalidParameters):
            parse_descriptor(text)


class TestFields:
    def test_describe(self):
        assert ScalarField.rational().describe() == "QQ"
        assert ScalarField.ratfunc(hbar=True).describe() == "QQ(q,h)"
        assert ScalarField.cyclotomic(5, hbar=True).describe() == "zeta_5(h)"

    def test_zeta_order(self):
        field = ScalarField.cyclotomic(5)
        assert field.q ** 5 == field.one
        assert field.q ** 1 != field.one

    def test_mixed_towers_rejected(self):
        with pytest.raises(IncompatibleFields):
            ScalarField.rational().convert(ScalarField.cyclotomic(5).q)

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            scalars.div(1, 0, ScalarField.rational())

    def test_no_h_generator(self):
        with pytest.raises(NoEmbedding):
            ScalarField.rational().h


class TestEmbed:
    def test_specialize_q(self):
        source = ScalarField.ratfunc()
        a = scalars.parse("(1+q)/(1-q)", source)
        assert embed(a, source, ScalarField.rational(), q_value=2) == ScalarField.rational().convert(-3)

    def test_pole(self):
        source = ScalarField.ratfunc()
        a = scalars.parse("1/(1-q)", source)
        with pytest.raises(PoleAtSpecialization):
            embed(a, source, ScalarField.rational(), q_value=1)

    def test_cyclotomic_does_not_embed_in_QQ(self):
        source = ScalarField.cyclotomic(5)
        with pytest.raises(NoEmbedding):
            embed(source.q, source, ScalarField.rational())

    def test_add_h(self):
        source = ScalarField.ratfunc()
        target = ScalarField.ratfunc(hbar=True)
        assert embed(source.q, source, target) == target.q


class TestValuation:
    def test_values(self):
        field = ScalarField.rational(hbar=True)
        h = field.h
        assert hbar_valuation(h ** 2 / (field.one + h), field) == 2
        assert hbar_valuation(field.one / h, field) == -1
        assert hbar_valuation(field.one + h, field) == 0
        assert hbar_valuation(field.zero, field) is None


class TestRender:
    def test_rational(self):
        field = ScalarField.rational()
        assert scalars.render(field.convert(Fraction(3, 2)), field) == "3/2"
        assert scalars.render(field.convert(-4), field) == "-4"

    def test_ratfunc_has_no_spaces(self):
        field = ScalarField.ratfunc(hbar=True)
        text = scalars.render(scalars.parse("(1+q)/(1-h)", field), field)
        assert " " not in text
        assert "/" in text

    def test_parse_render_agree(self):
        field = ScalarField.ratfunc()
        a = scalars.parse("(1+q)/(1-q^2)", field)
        assert scalars.parse(scalars.render(a, field), field) == a


class TestHSeries:
    def test_exp_is_a_homomorphism(self):
        field = ScalarField.rational()
        assert HSeries.exp(field, 4, 1) * HSeries.exp(field, 4, 2) == HSeries.exp(field, 4, 3)

    def test_division_inverts_multiplication(self):
        field = ScalarField.rational()
        a = HSeries.from_coeffs(field, [2, 1, 0, 5], 3)
        b = HSeries.exp(field, 3)
        assert (a * b) / b == a

    def test_reciprocal_of_exp(self):
        field = ScalarField.rational()
        one = HSeries.constant(field, 1, 4)
        assert one / HSeries.exp(field, 4) == HSeries.exp(field, 4, -1)

    def test_geometric_series_over_ratfunc(self):
        field = ScalarField.ratfunc()
        q = field.q
        denominator = HSeries.from_coeffs(field, [1, -q], 3)
        quotient = HSeries.constant(field, 1, 3) / denominator
        assert quotient == HSeries.from_coeffs(field, [1, q, q * q, q * q * q], 3)

    def test_division_truncates_to_lower_order(self):
        field = ScalarField.rational()
        quotient = HSeries.exp(field, 5) / HSeries.exp(field, 2)
        assert quotient == HSeries.constant(field, 1, 2)

    def test_division_by_non_unit_raises(self):
        field = ScalarField.rational()
        with pytest.raises(DivisionByZero):
            HSeries.exp(field, 2) / HSeries.from_coeffs(field, [0, 1], 2)

    def test_orders_meet(self):
        field = ScalarField.rational()
        total = HSeries.exp(field, 5) + HSeries.exp(field, 2)
        assert total.order == 2

    def test_divide_by_h(self):
        field = ScalarField.rational()
        s = HSeries.from_coeffs(field, [0, 1, 2], 2)
        assert s.divide_by_h() == HSeries.from_coeffs(field, [1, 2], 1)
        with pytest.raises(DivisibilityError):
            HSeries.exp(field, 2).divide_by_h()

    def test_valuation(self):
        field = ScalarField.rational()
        assert HSeries.from_coeffs(field, [0, 0, 3], 3).valuation() == 2
        assert HSeries.constant(field, 0, 2).valuation() is None

    def test_render(self):
        field = ScalarField.rational()
        assert HSeries.from_coeffs(field, [1, 0, -2], 2).render() == "1 - 2*h^2 (mod h^3)"

    def test_incompatible(self):
        with pytest.raises(IncompatibleFields):
            HSeries.exp(ScalarField.rational(), 2) + HSeries.exp(ScalarField.cyclotomic(3), 2)
