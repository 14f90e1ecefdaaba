"""Bit strings and statevectors for a 1D chain.

Sites are numbered 1..L from the left. Site 1 is the most significant
bit of a basis index, so the string "100" maps to index 4.
"""

from __future__ import annotations

import numpy as np

MAX_STATE_QUBITS = 24


class NormDriftError(RuntimeError):
    """Statevector norm drifted past tolerance during evolution."""


def bits_to_index(bits: str) -> int:
    return int(bits, 2)


def index_to_bits(index: int, length: int) -> str:
    return format(index, f"0{length}b")


def validate_bits(bits: str) -> str:
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"not a bit string: {bits!r}")
    return bits


def basis_state(bits: str) -> np.ndarray:
    validate_bits(bits)
    state = np.zeros(1 << len(bits), dtype=complex)
    state[bits_to_index(bits)] = 1.0
    return state


def flip_string(length: int, sites) -> str:
    """Bit string with |1> at the given 1-based sites."""
    chars = ["0"] * length
    for s in sites:
        if not 1 <= s <= length:
            raise ValueError(f"site {s} outside 1..{length}")
        chars[s - 1] = "1"
    return "".join(chars)


def central_flip(length: int) -> str:
    return flip_string(length, [(length + 1) // 2])


def isolated_flips(length: int, count: int) -> tuple[int, ...]:
    """Equally spaced 1-based sites for ``count`` isolated |1> flips.

    Sites land at round(i * (length + 1) / (count + 1)).  Raises when the
    spacing would put two flips on adjacent sites (the excitations must stay
    isolated) or off the chain.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    sites = tuple(int(np.floor(i * (length + 1) / (count + 1) + 0.5)) for i in range(1, count + 1))
    for s in sites:
        if not 1 <= s <= length:
            raise ValueError(f"flip site {s} outside 1..{length}")
    for a, b in zip(sites, sites[1:]):
        if b - a < 2:
            raise ValueError(f"flips at sites {a} and {b} are not isolated for length {length}")
    return sites


def check_norm(state: np.ndarray, tol: float = 1e-9) -> None:
    drift = abs(float(np.sum(state.real**2 + state.imag**2)) - 1.0)
    if drift > tol:
        raise NormDriftError(f"norm drift {drift:.3e} exceeds {tol:.1e}")


def num_qubits(state: np.ndarray) -> int:
    length = int(np.log2(state.size) + 0.5)
    if 1 << length != state.size:
        raise ValueError(f"state size {state.size} is not a power of two")
    return length


def population(source) -> np.ndarray:
    """Per-site probability of |1>, from a statevector or a counts table."""
    if hasattr(source, "populations"):
        return source.populations()
    state = np.asarray(source)
    length = num_qubits(state)
    probs = state.real**2 + state.imag**2
    pops = np.empty(length)
    for q in range(length):
        pops[q] = probs.reshape(1 << q, 2, -1)[:, 1, :].sum()
    return pops


def bit_table(length: int) -> np.ndarray:
    """(2^L, L) uint8 array of basis-index bits, site 1 in column 0."""
    idx = np.arange(1 << length)
    cols = [(idx >> (length - 1 - q)) & 1 for q in range(length)]
    return np.stack(cols, axis=1).astype(np.uint8)
