"""Statevector update primitives, numpy edition.

Every function mutates a flat, C-contiguous complex128 array in place.
The trailing axes of the implied tensor are the qubit axes (leftmost
chain site is the most significant bit); any leading batch axis folds
into the first implied dimension, which is inferred from the array size.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def apply_matrix(state: np.ndarray, dim: int, right: int, mat: np.ndarray) -> None:
    """Apply a dim x dim matrix to a block of adjacent qubits.

    `right` is the total dimension of the qubits to the right of the block.
    """
    view = state.reshape(-1, dim, right)
    view[:] = np.einsum("ij,ajr->air", mat, view)


def apply_update_interior(state: np.ndarray, right: int, gate: np.ndarray, active) -> None:
    """Rotate a site conditioned on its two neighbors.

    `active` lists the (left, right) neighbor values that trigger `gate`;
    `right` is the total dimension to the right of the three-site window.
    """
    view = state.reshape(-1, 2, 2, 2, right)
    for m, n in active:
        lo = view[:, m, 0, n, :]
        hi = view[:, m, 1, n, :]
        new_lo = gate[0, 0] * lo + gate[0, 1] * hi
        new_hi = gate[1, 0] * lo + gate[1, 1] * hi
        view[:, m, 0, n, :] = new_lo
        view[:, m, 1, n, :] = new_hi


def apply_update_left(state: np.ndarray, right: int, gate: np.ndarray, active) -> None:
    """Rotate the leftmost site conditioned on its single real neighbor."""
    view = state.reshape(-1, 2, 2, right)
    for n in active:
        lo = view[:, 0, n, :]
        hi = view[:, 1, n, :]
        new_lo = gate[0, 0] * lo + gate[0, 1] * hi
        new_hi = gate[1, 0] * lo + gate[1, 1] * hi
        view[:, 0, n, :] = new_lo
        view[:, 1, n, :] = new_hi


def apply_update_right(state: np.ndarray, gate: np.ndarray, active) -> None:
    """Rotate the rightmost site conditioned on its single real neighbor."""
    view = state.reshape(-1, 2, 2)
    for m in active:
        lo = view[:, m, 0]
        hi = view[:, m, 1]
        new_lo = gate[0, 0] * lo + gate[0, 1] * hi
        new_hi = gate[1, 0] * lo + gate[1, 1] * hi
        view[:, m, 0] = new_lo
        view[:, m, 1] = new_hi


def damping_sweep(state: np.ndarray, length: int, gamma: float, unifs: np.ndarray) -> int:
    """One relaxation step toward |0> on every qubit of a single state.

    Implements the jump/no-jump unraveling of amplitude damping with decay
    probability `gamma` per qubit. `unifs` must hold one uniform draw per
    qubit; a draw is consumed for every qubit regardless of outcome so the
    stream position stays deterministic. Returns the number of jumps.
    """
    jumps = 0
    for q in range(length):
        right = 1 << (length - q - 1)
        view = state.reshape(-1, 2, right)
        excited = view[:, 1, :]
        p_one = float(np.sum(excited.real**2 + excited.imag**2))
        if unifs[q] < gamma * p_one:
            view[:, 0, :] = excited
            excited[:] = 0.0
            state *= 1.0 / np.sqrt(p_one)
            jumps += 1
        else:
            excited *= np.sqrt(1.0 - gamma)
            norm = 1.0 - gamma * p_one
            if norm > 0.0:
                state *= 1.0 / np.sqrt(norm)
    return jumps
