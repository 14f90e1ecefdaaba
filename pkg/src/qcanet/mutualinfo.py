"""Pairwise mutual information from measurement tables or statevectors.

The Shannon variant works on z-basis joint frequencies and is what a
measurement record can provide; the von Neumann variant needs the
statevector and upper-bounds it. Both return symmetric nonnegative
weight matrices with zero diagonal, in bits.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .states import bit_table, check_norm, num_qubits

NEGATIVE_EIG_TOL = 1e-10
_TINY = 1e-300  # keeps log2 finite where the weight is already zero


@dataclass
class MINetwork:
    length: int
    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.length, self.length):
            raise ValueError(f"weights must be {self.length}x{self.length}")
        if not np.array_equal(self.weights, self.weights.T):
            raise ValueError("weights must be symmetric")
        if np.any(np.diag(self.weights) != 0.0):
            raise ValueError("diagonal must be zero")
        if self.weights.min() < 0.0:
            raise ValueError("weights must be nonnegative")

    def to_csv(self, path, config_hash: str | None = None) -> None:
        with open(path, "w", newline="") as fh:
            if config_hash is not None:
                fh.write(f"# config={config_hash}\n")
            writer = csv.writer(fh)
            for row in self.weights:
                writer.writerow([f"{x:.12g}" for x in row])

    @classmethod
    def from_csv(cls, path) -> "MINetwork":
        rows = []
        with open(path, newline="") as fh:
            for line in fh:
                if line.startswith("#"):
                    continue
                rows.append([float(x) for x in line.strip().split(",")])
        weights = np.array(rows)
        return cls(len(weights), weights)


def _weighted_bits(source) -> tuple[np.ndarray, np.ndarray]:
    """(bit matrix, normalized weights) for counts, exact tables, or states."""
    if isinstance(source, np.ndarray):
        check_norm(source)
        return bit_table(num_qubits(source)), np.abs(source) ** 2
    items = source.items()
    if not items:
        raise ValueError("empty table has no statistics")
    bits = np.array([[int(c) for c in key] for key, _ in items], dtype=np.uint8)
    weights = np.array([value for _, value in items], dtype=float)
    total = weights.sum()
    if total <= 0.0:
        raise ValueError("table carries zero total weight")
    return bits, weights / total


def _pair_term(joint: np.ndarray, ma: np.ndarray, mb: np.ndarray) -> np.ndarray:
    joint = np.maximum(joint, 0.0)
    log_ratio = np.log2(np.maximum(joint, _TINY)) - np.log2(np.maximum(ma * mb, _TINY))
    return np.where(joint > 0.0, joint * log_ratio, 0.0)


def shannon_mi(source) -> MINetwork:
    """Pairwise z-basis mutual information in bits.

    Accepts a counts table, an exact probability table, or a normalized
    statevector (whose exact |amplitude|^2 distribution is used).
    """
    bits, weights = _weighted_bits(source)
    length = bits.shape[1]
    b = bits.astype(float)
    p1 = weights @ b
    p11 = b.T @ (weights[:, None] * b)
    pi = p1[:, None]
    pj = p1[None, :]
    mi = _pair_term(p11, pi, pj)
    mi += _pair_term(pi - p11, pi, 1.0 - pj)
    mi += _pair_term(pj - p11, 1.0 - pi, pj)
    mi += _pair_term(1.0 - pi - pj + p11, 1.0 - pi, 1.0 - pj)
    mi = np.maximum((mi + mi.T) / 2.0, 0.0)
    np.fill_diagonal(mi, 0.0)
    return MINetwork(length, mi)


def reduced_density_matrix(state: np.ndarray, sites) -> np.ndarray:
    """Partial trace onto one or two sites (1-based)."""
    length = num_qubits(state)
    sites = tuple(sites) if not isinstance(sites, int) else (sites,)
    if len(sites) not in (1, 2) or len(set(sites)) != len(sites):
        raise ValueError("sites must be one or two distinct positions")
    if not all(1 <= s <= length for s in sites):
        raise ValueError(f"sites {sites} outside 1..{length}")
    check_norm(state)
    arr = np.moveaxis(
        state.reshape((2,) * length), [s - 1 for s in sites], range(len(sites))
    )
    m = arr.reshape(1 << len(sites), -1)
    return m @ m.conj().T


def entropy_bits(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits; slightly negative eigenvalues are clamped."""
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -NEGATIVE_EIG_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {eigs.min()}")
    eigs = np.maximum(eigs, 0.0)
    nonzero = eigs[eigs > 0.0]
    return float(-(nonzero * np.log2(nonzero)).sum())


def _batched_entropies(rhos: np.ndarray) -> np.ndarray:
    eigs = np.linalg.eigvalsh(rhos)
    if eigs.min() < -NEGATIVE_EIG_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {eigs.min()}")
    eigs = np.maximum(eigs, 0.0)
    safe = np.where(eigs > 0.0, eigs, 1.0)
    return -(eigs * np.log2(safe)).sum(axis=-1)


def von_neumann_mi(state: np.ndarray) -> MINetwork:
    """I_ij = S(rho_i) + S(rho_j) - S(rho_ij), in bits."""
    length = num_qubits(state)
    check_norm(state)
    singles = np.stack([reduced_density_matrix(state, (s,)) for s in range(1, length + 1)])
    s_single = _batched_entropies(singles)
    pairs = [(i, j) for i in range(1, length + 1) for j in range(i + 1, length + 1)]
    weights = np.zeros((length, length))
    if pairs:
        rhos = np.stack([reduced_density_matrix(state, p) for p in pairs])
        s_pair = _batched_entropies(rhos)
        for (i, j), s_ij in zip(pairs, s_pair):
            weights[i - 1, j - 1] = weights[j - 1, i - 1] = (
                s_single[i - 1] + s_single[j - 1] - s_ij
            )
    weights = np.maximum(weights, 0.0)
    np.fill_diagonal(weights, 0.0)
    return MINetwork(length, weights)


def frobenius_rel_distance(a: MINetwork, b: MINetwork) -> float:
    """||A - B||_F / ||A||_F with A as the reference."""
    if a.length != b.length:
        raise ValueError("networks differ in size")
    ref = np.linalg.norm(a.weights)
    if ref == 0.0:
        raise ValueError("reference network has zero norm")
    return float(np.linalg.norm(a.weights - b.weights) / ref)
