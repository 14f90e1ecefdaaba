"""Two-qubit gate decompositions onto the native K family.

A controlled-phase of angle phi is built from two native K gates plus
single-qubit x and z rotations. The native gate is allowed to carry a
parasitic conditional phase phi_p: the same construction absorbs it
exactly when the rotation angles are computed with the true phi_p, and
leaves a calibrated-out error when computed with phi_p = 0.

The construction (temporal order, control = i, target = j):

    Rx(xi_i) x Rx(xi_j)
    Rz(phi_p/2) x Rz(phi_p/2)
    K(theta) CPHASE(phi_p)
    Rx(-2 alpha) on i
    Rz(pi + phi_p/2) x Rz(phi_p/2)
    K(theta) CPHASE(phi_p)
    Rx(-xi_i) x Rx(-xi_j)
    Rz(pi - phi/2) x Rz(-phi/2)

equals CPHASE(phi) = diag(1, 1, 1, e^{-i phi}) up to global phase, with

    sin(alpha) = sqrt((sin^2(phi/4) - sin^2(phi_p/2))
                      / (sin^2(theta) - sin^2(phi_p/2))),
    xi_i = atan2(tan(alpha) cos(theta), cos(phi_p/2)),
    xi_j = atan2(tan(alpha) sin(theta), sin(phi_p/2)).

The atan2 form evaluates the correct branch where the quadrant flips
and handles the phi_p -> 0 limit (xi_j -> pi/2) without a special case.
"""

from __future__ import annotations

import numpy as np

from .gates import Gate, phxz

DEFAULT_SWAP_ANGLE = np.pi / 4
DEFAULT_PARASITIC_PHI = np.pi / 23
RADICAND_SLACK = 1e-12


class DecompositionError(ValueError):
    """The requested conditional phase is unreachable at these gate angles."""


def cphase_angles(phi: float, parasitic_phi: float = 0.0, theta: float = DEFAULT_SWAP_ANGLE) -> tuple[float, float, float]:
    """Return (alpha, xi_i, xi_j) for the two-K controlled-phase construction."""
    num = np.sin(phi / 4.0) ** 2 - np.sin(parasitic_phi / 2.0) ** 2
    den = np.sin(theta) ** 2 - np.sin(parasitic_phi / 2.0) ** 2
    if den <= 0.0:
        raise DecompositionError(f"swap angle {theta} too small for parasitic phase {parasitic_phi}")
    radicand = num / den
    if radicand < -RADICAND_SLACK or radicand > 1.0 + RADICAND_SLACK:
        raise DecompositionError(
            f"phase {phi} unreachable with theta={theta}, parasitic={parasitic_phi}"
            f" (radicand {radicand:.3e})"
        )
    radicand = min(max(radicand, 0.0), 1.0)
    alpha = float(np.arcsin(np.sqrt(radicand)))
    tana = np.tan(alpha)
    xi_i = float(np.arctan2(tana * np.cos(theta), np.cos(parasitic_phi / 2.0)))
    xi_j = float(np.arctan2(tana * np.sin(theta), np.sin(parasitic_phi / 2.0)))
    return alpha, xi_i, xi_j


def _rx(site: int, angle: float) -> Gate:
    return phxz(site, 0.0, angle / np.pi, 0.0)


def _rz(site: int, angle: float) -> Gate:
    return phxz(site, 0.0, 0.0, angle / np.pi)


def decompose_cphase(
    control: int,
    target: int,
    phi: float,
    parasitic_phi: float = 0.0,
    theta: float = DEFAULT_SWAP_ANGLE,
) -> list[list[Gate]]:
    """CPHASE(phi) as moments of native gates, first moment first.

    Single-qubit rotations are emitted as PhXZ gates (equal to the
    rotations up to global phase). The two-qubit entries are the native
    K(theta) CPHASE(parasitic_phi) as actually executed.
    """
    alpha, xi_i, xi_j = cphase_angles(phi, parasitic_phi, theta)
    i, j = control, target
    k_gate = Gate("k", (i, j), (theta, 0.0, 0.0, 0.0, parasitic_phi))
    return [
        [_rx(i, xi_i), _rx(j, xi_j)],
        [_rz(i, parasitic_phi / 2.0), _rz(j, parasitic_phi / 2.0)],
        [k_gate],
        [_rx(i, -2.0 * alpha)],
        [_rz(i, np.pi + parasitic_phi / 2.0), _rz(j, parasitic_phi / 2.0)],
        [k_gate],
        [_rx(i, -xi_i), _rx(j, -xi_j)],
        [_rz(i, np.pi - phi / 2.0), _rz(j, -phi / 2.0)],
    ]


def decompose_cz(control: int, target: int, parasitic_phi: float = 0.0, theta: float = DEFAULT_SWAP_ANGLE) -> list[list[Gate]]:
    return decompose_cphase(control, target, np.pi, parasitic_phi, theta)


def decompose_ch(control: int, target: int, parasitic_phi: float = 0.0, theta: float = DEFAULT_SWAP_ANGLE) -> list[list[Gate]]:
    """Controlled-Hadamard as a y-conjugated controlled-Z."""
    before = [Gate("ypow", (target,), (-0.25,))]
    after = [Gate("ypow", (target,), (0.25,))]
    return [before, *decompose_cz(control, target, parasitic_phi, theta), after]


def correction_moments(k_gate: Gate, zeta: float, gamma: float) -> tuple[list[Gate], list[Gate]]:
    """Z-rotations that steer a drifted K back to K(theta, 0, 0, 0, phi).

    With the shorthand RZ(zi, zj) for a z-rotation pair, the exact
    relation for a drift (zeta, chi, gamma) is

        K(theta,0,0,0,phi) = RZ(-b,b) RZ(g,g) K(theta,zeta,chi,gamma,phi) RZ(-a,a)

    with a = (zeta+chi)/2 and b = (zeta-chi)/2. The hopping phase chi
    cannot be characterized, so it is taken as 0 here; the residual
    error then grows linearly with the true |chi|.
    """
    i, j = k_gate.sites
    a = zeta / 2.0
    b = zeta / 2.0
    pre = [_rz(i, -a), _rz(j, a)]
    post = [_rz(i, gamma - b), _rz(j, gamma + b)]
    return pre, post
