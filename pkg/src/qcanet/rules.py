"""Totalistic three-site update rules for a qubit chain."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)

ACTIVATIONS = {"H": HADAMARD, "X": PAULI_X}


def activation_matrix(activation) -> np.ndarray:
    """Resolve an activation given by name or as an explicit 2x2 unitary."""
    if isinstance(activation, str):
        try:
            mat = ACTIVATIONS[activation]
        except KeyError:
            raise ValueError(f"unknown activation {activation!r}; known: {sorted(ACTIVATIONS)}")
    else:
        mat = np.asarray(activation, dtype=complex)
    if mat.shape != (2, 2):
        raise ValueError(f"activation must be 2x2, got {mat.shape}")
    if not np.allclose(mat @ mat.conj().T, np.eye(2), atol=1e-12):
        raise ValueError("activation is not unitary within 1e-12")
    return mat


@dataclass(frozen=True, eq=False)
class RuleSpec:
    """A neighborhood-conditioned single-site update.

    Bit 2*left + right of `number` is the coefficient c[left][right]: the
    activation fires on a site whose neighbors hold the values (left,
    right). Sites past either end of the chain count as fixed |0>
    neighbors. Rule 6 (c01 = c10 = 1) fires on exactly one excited
    neighbor.
    """

    number: int
    activation: np.ndarray = field(default_factory=lambda: HADAMARD.copy())
    activation_name: str | None = None

    def __post_init__(self):
        if not 0 <= self.number <= 15:
            raise ValueError(f"rule number {self.number} outside 0..15")
        mat = activation_matrix(self.activation)
        object.__setattr__(self, "activation", mat)

    @classmethod
    def from_number(cls, number: int, activation="H") -> "RuleSpec":
        name = activation if isinstance(activation, str) else None
        return cls(number, activation_matrix(activation), name)

    @property
    def coefficients(self) -> np.ndarray:
        """2x2 int array c[left][right]."""
        c = np.zeros((2, 2), dtype=int)
        for m in range(2):
            for n in range(2):
                c[m, n] = (self.number >> (2 * m + n)) & 1
        return c

    @property
    def active_pairs(self) -> tuple[tuple[int, int], ...]:
        """Neighbor configurations (left, right) that trigger the activation."""
        return tuple(
            (m, n) for m in range(2) for n in range(2) if (self.number >> (2 * m + n)) & 1
        )

    def label(self) -> str:
        act = self.activation_name or "custom"
        return f"T{self.number}/{act}"


def goldilocks_rule(activation="H") -> RuleSpec:
    """Rule 6: activate exactly when one neighbor is excited."""
    return RuleSpec.from_number(6, activation)
