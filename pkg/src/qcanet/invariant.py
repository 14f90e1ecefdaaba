"""Domain-wall invariant of boundary-padded chains.

The conserved observable is the sum of ZZ terms over all bonds of the
chain padded with a fixed |0> at each end. Its eigenvalue on a basis
string with w domain walls is (L + 1) - 2w, so conservation of the
eigenvalue is conservation of the wall count.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .states import index_to_bits, validate_bits


def domain_walls(bits: str) -> int:
    """Number of 01/10 bonds in the 0-padded string."""
    validate_bits(bits)
    padded = "0" + bits + "0"
    return sum(a != b for a, b in zip(padded, padded[1:]))


def invariant_eigenvalue(bits: str) -> int:
    return len(bits) + 1 - 2 * domain_walls(bits)


def invariant_table(length: int) -> np.ndarray:
    """Eigenvalue for every basis index of a length-L chain."""
    idx = np.arange(1 << length, dtype=np.int64)
    padded_walls = np.zeros(idx.shape, dtype=np.int64)
    prev = np.zeros(idx.shape, dtype=np.int64)  # left pad
    for q in range(length):
        bit = (idx >> (length - 1 - q)) & 1
        padded_walls += prev ^ bit
        prev = bit
    padded_walls += prev  # right pad
    return length + 1 - 2 * padded_walls


def sector_dimension(length: int, flips: int) -> int:
    """Number of strings with the wall count of `flips` isolated flips.

    A string with 2k walls corresponds to a choice of 2k wall positions
    among the L+1 bonds of the padded chain, so the count is exactly
    C(L+1, 2k). This grows polynomially in L at fixed k.
    """
    if flips < 0:
        raise ValueError("flips must be >= 0")
    return comb(length + 1, 2 * flips)


def enumerate_sector(length: int, walls: int) -> list[str]:
    """All strings of a given padded wall count, lexicographically sorted.

    Walls come in pairs (both pads are 0), so odd wall counts yield an
    empty sector.
    """
    if walls % 2 == 1:
        return []
    out = []
    for slots in itertools.combinations(range(length + 1), walls):
        cur = 0
        chars = []
        for i in range(length):
            if i in slots:
                cur ^= 1
            chars.append(str(cur))
        out.append("".join(chars))
    return sorted(out)


def sector_indices(length: int, eigenvalue: int) -> np.ndarray:
    """Basis indices sharing an invariant eigenvalue."""
    table = invariant_table(length)
    return np.nonzero(table == eigenvalue)[0]


def sector_strings(length: int, eigenvalue: int) -> list[str]:
    return [index_to_bits(int(i), length) for i in sector_indices(length, eigenvalue)]
