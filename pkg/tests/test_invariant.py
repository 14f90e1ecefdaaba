import itertools
from math import comb

import numpy as np
import pytest

from qcanet.invariant import (
    domain_walls,
    enumerate_sector,
    invariant_eigenvalue,
    invariant_table,
    sector_dimension,
    sector_strings,
)
from qcanet.states import index_to_bits


class TestEigenvalue:
    @pytest.mark.parametrize(
        "bits,expected",
        [
            ("00100", 2),
            ("01110", 2),
            ("01010", -2),
            ("00000", 6),
            ("11111", 2),
            ("0", 2),
            ("1", -2),
        ],
    )
    def test_worked_examples(self, bits, expected):
        assert invariant_eigenvalue(bits) == expected

    def test_walls_examples(self):
        assert domain_walls("00100") == 2
        assert domain_walls("01010") == 4
        assert domain_walls("00000") == 0

    @pytest.mark.parametrize("length", [1, 2, 3, 5, 8])
    def test_table_matches_scalar(self, length):
        table = invariant_table(length)
        for idx in range(1 << length):
            assert table[idx] == invariant_eigenvalue(index_to_bits(idx, length))

    def test_eigenvalue_range(self):
        # both pads are 0, so wall counts are even
        for length in (3, 4, 6):
            table = invariant_table(length)
            assert table.max() == length + 1
            assert np.all(((length + 1 - table) // 2) % 2 == 0)


class TestSectors:
    def test_known_dimensions(self):
        assert sector_dimension(5, 1) == 15
        assert sector_dimension(2, 1) == 3
        assert sector_dimension(5, 0) == 1

    @pytest.mark.parametrize("length", [1, 2, 3, 4, 5, 6, 7, 8])
    def test_closed_form_matches_enumeration(self, length):
        # brute force over every string of the chain
        by_walls: dict[int, int] = {}
        for bits in itertools.product("01", repeat=length):
            w = domain_walls("".join(bits))
            by_walls[w] = by_walls.get(w, 0) + 1
        for flips in range(length + 2):
            expected = by_walls.get(2 * flips, 0)
            assert sector_dimension(length, flips) == expected
            assert len(enumerate_sector(length, 2 * flips)) == expected

    def test_enumerated_strings_have_right_walls(self):
        for bits in enumerate_sector(6, 4):
            assert domain_walls(bits) == 4

    def test_sector_strings_match_enumeration(self):
        length, flips = 5, 1
        eig = length + 1 - 2 * (2 * flips)
        assert sector_strings(length, eig) == enumerate_sector(length, 2 * flips)

    def test_total_dimension_is_hilbert_space(self):
        for length in (4, 7):
            total = sum(sector_dimension(length, k) for k in range((length + 1) // 2 + 1))
            assert total == 1 << length

    def test_polynomial_not_exponential_in_l(self):
        # at fixed flip count the sector grows like a binomial in L, so the
        # occupied fraction of Hilbert space shrinks; no exponential fit is
        # asserted here, enumeration is the ground truth
        dims = [sector_dimension(length, 1) for length in (8, 12, 16)]
        assert dims == [comb(9, 2), comb(13, 2), comb(17, 2)]
