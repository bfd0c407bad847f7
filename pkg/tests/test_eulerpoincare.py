"""Tests for finite complexes, their deformations and the seeded fuzz."""

import numpy as np
import pytest

from src.core.eulerpoincare import (
    DEFORMATION,
    FiniteComplex,
    chi_bidegree_table,
    deform,
    fuzz,
    fuzz_case,
    invariance_report,
    random_complex,
    random_deformation,
    specialize,
)
from src.core.exceptions import NotAComplex, NotADeformation, OutOfRange, PoleAtSpecialization


class TestFiniteComplex:
    def test_characteristics_agree(self):
        C = FiniteComplex.from_lists((2, 3, 1), [[[1, 0], [0, 0], [0, 0]], [[0, 1, 0]]])
        assert C.cohomology_dims() == [1, 1, 0]
        assert C.chi_dimensional() == C.chi_homological() == 0

    def test_single_space(self):
        C = FiniteComplex.from_lists((3,), [])
        assert C.cohomology_dims() == [3]

    def test_square_must_vanish(self):
        with pytest.raises(NotAComplex):
            FiniteComplex.from_lists((1, 1, 1), [[[1]], [[1]]])

    def test_shapes_checked(self):
        with pytest.raises(NotAComplex):
            FiniteComplex.from_lists((2, 1), [[[1]]])
        with pytest.raises(NotAComplex):
            FiniteComplex.from_lists((2, 1, 1), [[[1, 0]]])

    @pytest.mark.parametrize("seed", range(10))
    def test_random_complexes_are_valid(self, seed):
        C = random_complex(np.random.default_rng(seed))
        assert C.chi_dimensional() == C.chi_homological()


class TestDeformations:
    def test_worked_example(self):
        base = FiniteComplex.from_lists((2, 1), [[[0, 0]]])
        D = deform(base, [[[[1, 0]]]])
        report = invariance_report(D)
        assert report.dims_base == [2, 1]
        assert report.dims_deformed == [1, 0]
        assert report.chi_equal and report.dims_nonincreasing
        assert specialize(D, 1).cohomology_dims() == [1, 0]
        assert specialize(D, 0).cohomology_dims() == [2, 1]

    def test_square_must_vanish(self):
        line = FiniteComplex.from_lists((1, 1, 1), [[[0]], [[0]]])
        with pytest.raises(NotADeformation):
            deform(line, [[[[1]]], [[[1]]]])

    def test_second_order_perturbation(self):
        base = FiniteComplex.from_lists((1, 1), [[[0]]])
        D = deform(base, [[[[0]], [[1]]]])
        assert D.cohomology_dims() == [0, 0]
        assert D.chi() == base.chi_homological()

    def test_pole(self):
        h = DEFORMATION.h
        one = DEFORMATION.one
        base = FiniteComplex.from_lists((1, 1), [[[0]]])
        D = deform(base, [[[[one / (one - h)]]]])
        assert D.cohomology_dims() == [0, 0]
        with pytest.raises(PoleAtSpecialization):
            specialize(D, 1)

    def test_wrong_perturbation_shape(self):
        base = FiniteComplex.from_lists((2, 1), [[[0, 0]]])
        with pytest.raises(NotADeformation):
            deform(base, [[[[1]]]])

    @pytest.mark.parametrize("seed", range(10))
    def test_random_deformations(self, seed):
        D = random_deformation(np.random.default_rng(seed))
        report = invariance_report(D)
        assert report.chi_equal
        assert report.dims_nonincreasing


class TestFuzz:
    def test_all_flags_pass(self):
        rows = fuzz(30, seed=7)
        assert len(rows) == 30
        assert [row.seed for row in rows] == list(range(7, 37))
        assert all(row.passed for row in rows)

    def test_deterministic(self):
        assert fuzz(5, seed=3) == fuzz(5, seed=3)
        assert fuzz_case(11) == fuzz_case(11)

    def test_workers_do_not_change_rows(self):
        assert fuzz(6, seed=1, workers=2) == fuzz(6, seed=1)

    def test_row_keys(self):
        row = fuzz_case(42).to_row()
        assert set(row) == {"seed", "dims_base", "dims_deformed", "chi", "flags"}
        assert set(row["flags"]) == {
            "chi_d_equals_chi_h",
            "chi_equal",
            "dims_nonincreasing",
            "generic_specialization",
        }

    def test_limits(self):
        with pytest.raises(OutOfRange):
            fuzz(1, max_len=1)


class TestChiTable:
    def test_entries(self):
        table = chi_bidegree_table((3, 3))
        assert table.entries[(-1, -1)] == 1
        assert all(v == 0 for k, v in table.entries.items() if k != (-1, -1))
        assert table.total() == 1
        assert len(table.entries) == 25

    def test_window_cross_check(self):
        table = chi_bidegree_table((1, 1), cross_check=True, check_bound=(0, 0))
        assert table.mismatches == []
