"""Native gate set for a linear chain of transmon-style qubits.

Single-qubit gates are expressed in the phased-XZ family
PhXZ(a, x, z) = Z^z Z^a X^x Z^-a; the two-qubit primitive is the
excitation-conserving family K(theta, zeta, chi, gamma, phi) whose
ideal member K(pi/4) is the inverse sqrt-iSWAP. CPHASE(phi) here means
diag(1, 1, 1, exp(-i*phi)), matching the sign of the K family's
conditional phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PHASE_ATOL = 1e-12


def xpow_matrix(t: float) -> np.ndarray:
    g = np.exp(1j * np.pi * t)
    c, s = (1 + g) / 2, (1 - g) / 2
    return np.array([[c, s], [s, c]])


def ypow_matrix(t: float) -> np.ndarray:
    g = np.exp(1j * np.pi * t)
    c, s = (1 + g) / 2, (1 - g) / 2
    return np.array([[c, -1j * s], [1j * s, c]])


def zpow_matrix(t: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * np.pi * t)]])


def phxz_matrix(a: float, x: float, z: float) -> np.ndarray:
    return zpow_matrix(z + a) @ xpow_matrix(x) @ zpow_matrix(-a)


def rx_matrix(t: float) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def rz_matrix(t: float) -> np.ndarray:
    return np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]])


def k_matrix(theta: float, zeta: float = 0.0, chi: float = 0.0, gamma: float = 0.0, phi: float = 0.0) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [1, 0, 0, 0],
            [0, np.exp(-1j * (gamma + zeta)) * c, -1j * np.exp(-1j * gamma + 1j * chi) * s, 0],
            [0, -1j * np.exp(-1j * (gamma + chi)) * s, np.exp(-1j * gamma + 1j * zeta) * c, 0],
            [0, 0, 0, np.exp(-2j * gamma - 1j * phi)],
        ]
    )


def cphase_matrix(phi: float) -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, np.exp(-1j * phi)]).astype(complex)


CZ_MATRIX = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.diag([1.0, -1.0]).astype(complex),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CH_MATRIX = np.block(
    [[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), HADAMARD]]
).astype(complex)

SINGLE_QUBIT_KINDS = frozenset({"phxz", "ypow", "x", "y", "z"})
TWO_QUBIT_KINDS = frozenset({"k", "cz", "cphase", "ch"})


@dataclass(frozen=True)
class Gate:
    """A placed gate. Sites are 1-based chain positions.

    For two-qubit kinds the site order is (control, target) for ch, and
    (i, j) as written for the symmetric k/cz/cphase kinds.
    """

    kind: str
    sites: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind in SINGLE_QUBIT_KINDS:
            if len(self.sites) != 1:
                raise ValueError(f"{self.kind} takes one site, got {self.sites}")
        elif self.kind in TWO_QUBIT_KINDS:
            if len(self.sites) != 2 or self.sites[0] == self.sites[1]:
                raise ValueError(f"{self.kind} takes two distinct sites, got {self.sites}")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    def matrix(self) -> np.ndarray:
        """Local matrix in the tensor order of `sites` as given."""
        if self.kind == "phxz":
            return phxz_matrix(*self.params)
        if self.kind == "ypow":
            return ypow_matrix(self.params[0])
        if self.kind in PAULI:
            return PAULI[self.kind].copy()
        if self.kind == "k":
            return k_matrix(*self.params)
        if self.kind == "cz":
            return CZ_MATRIX.copy()
        if self.kind == "cphase":
            return cphase_matrix(self.params[0])
        if self.kind == "ch":
            return CH_MATRIX.copy()
        raise AssertionError(self.kind)


def phxz(site: int, a: float, x: float, z: float) -> Gate:
    return Gate("phxz", (site,), (float(a), float(x), float(z)))


def identity_phxz(site: int) -> Gate:
    return phxz(site, 0.0, 0.0, 0.0)


def is_identity_phxz(gate: Gate, atol: float = PHASE_ATOL) -> bool:
    if gate.kind != "phxz":
        return False
    a, x, z = gate.params
    return abs(x) <= atol / np.pi and abs(float(np.remainder(z + 1.0, 2.0)) - 1.0) <= atol / np.pi


def phxz_from_matrix(mat: np.ndarray, atol: float = 1e-9) -> tuple[float, float, float]:
    """Canonical (a, x, z) with x in [0, 1], a and z in (-1, 1].

    The global phase of `mat` is dropped. Degenerate axes pin a = 0: at
    x = 0 the gate is a plain Z power, and at x = 1 the pair (a, z) is
    redundant because X Z^-a = Z^a X.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (2, 2):
        raise ValueError("need a 2x2 matrix")
    if not np.allclose(mat @ mat.conj().T, np.eye(2), atol=atol):
        raise ValueError("matrix is not unitary")
    det = np.linalg.det(mat)
    u = mat / np.sqrt(det)  # SU(2) representative
    # u = Rz(p2) Rx(T) Rz(p1) with T in [0, pi]
    big_t = 2.0 * np.arctan2(abs(u[1, 0]), abs(u[0, 0]))
    x = big_t / np.pi
    if x <= 1e-12:
        x = 0.0
        p1 = 0.0
        p2 = 2.0 * np.angle(u[1, 1])
    elif x >= 1 - 1e-12:
        x = 1.0
        p1 = 0.0
        p2 = -2.0 * np.angle(u[0, 1] / (-1j))
    else:
        sum_p = 2.0 * np.angle(u[1, 1])
        diff_p = 2.0 * (np.angle(u[0, 1]) + np.pi / 2)  # p1 - p2
        p1 = (sum_p + diff_p) / 2.0
        p2 = (sum_p - diff_p) / 2.0
    a = -p1 / np.pi
    z = p2 / np.pi - a
    a = float(np.remainder(a + 1.0, 2.0) - 1.0)
    z = float(np.remainder(z + 1.0, 2.0) - 1.0)
    if a == -1.0:
        a = 1.0
    if z == -1.0:
        z = 1.0
    if x == 0.0 or x == 1.0:
        a = 0.0  # both degeneracies were resolved with p1 = 0
    return float(a), float(x), float(z)


def merge_to_phxz(site: int, matrices) -> Gate:
    """Collapse a temporal sequence of single-qubit matrices to one PhXZ."""
    total = np.eye(2, dtype=complex)
    for m in matrices:
        total = m @ total
    return phxz(site, *phxz_from_matrix(total))
