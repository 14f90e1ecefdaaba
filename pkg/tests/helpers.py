"""Shared brute-force oracles, kept independent of the package kernels."""

from __future__ import annotations

import numpy as np

P0 = np.diag([1.0, 0.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def kron_chain(ops) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def dense_site_oracle(rule, length: int, site: int) -> np.ndarray:
    """Neighborhood-projected site update built directly from kron products."""
    coeff = rule.coefficients
    gate = rule.activation
    dim = 1 << length
    total = np.zeros((dim, dim), dtype=complex)
    for m in (0, 1):
        for n in (0, 1):
            if site == 1 and m == 1:
                continue
            if site == length and n == 1:
                continue
            ops = [I2] * length
            if site > 1:
                ops[site - 2] = P1 if m else P0
            ops[site - 1] = gate if coeff[m, n] else I2
            if site < length:
                ops[site] = P1 if n else P0
            total += kron_chain(ops)
    return total


def dense_cycle_oracle(rule, length: int) -> np.ndarray:
    dim = 1 << length
    even = np.eye(dim, dtype=complex)
    for site in range(2, length + 1, 2):
        even = dense_site_oracle(rule, length, site) @ even
    odd = np.eye(dim, dtype=complex)
    for site in range(1, length + 1, 2):
        odd = dense_site_oracle(rule, length, site) @ odd
    return odd @ even


def random_unitary2(rng) -> np.ndarray:
    """Haar-ish random 2x2 unitary from a QR decomposition."""
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def max_dev_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Max elementwise deviation after removing the best global phase."""
    tr = np.vdot(b.ravel(), a.ravel())
    phase = tr / abs(tr) if abs(tr) > 1e-300 else 1.0
    return float(np.max(np.abs(a - phase * b)))
