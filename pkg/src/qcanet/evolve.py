"""Cycle evolution of chain states under a totalistic rule.

One cycle updates every even site (left to right) and then every odd
site. Updates within a sweep commute because each conditions only on
the diagonal values of its neighbors, so the sweep order inside a
parity class is irrelevant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .rules import RuleSpec
from .states import (
    MAX_STATE_QUBITS,
    basis_state,
    check_norm,
    num_qubits,
    population,
    validate_bits,
)

MAX_DENSE_QUBITS = 12


@dataclass
class Trajectory:
    """Noiseless evolution record. populations has shape (t_max+1, L)."""

    rule: RuleSpec
    initial: str
    populations: np.ndarray
    states: list[np.ndarray] | None = None

    @property
    def length(self) -> int:
        return len(self.initial)

    @property
    def t_max(self) -> int:
        return self.populations.shape[0] - 1


def _apply_site(state: np.ndarray, rule: RuleSpec, length: int, site: int) -> None:
    pairs = rule.active_pairs
    if not pairs:
        return
    gate = rule.activation
    if length == 1:
        if (0, 0) in pairs:
            kernels.apply_matrix(state, 2, 1, gate)
    elif site == 1:
        active = [n for (m, n) in pairs if m == 0]
        if active:
            kernels.apply_update_left(state, 1 << (length - 2), gate, active)
    elif site == length:
        active = [m for (m, n) in pairs if n == 0]
        if active:
            kernels.apply_update_right(state, gate, active)
    else:
        kernels.apply_update_interior(state, 1 << (length - site - 1), gate, pairs)


def apply_cycle(state: np.ndarray, rule: RuleSpec, length: int, check: bool = True) -> np.ndarray:
    """Advance `state` by one cycle in place and return it."""
    for site in range(2, length + 1, 2):
        _apply_site(state, rule, length, site)
    for site in range(1, length + 1, 2):
        _apply_site(state, rule, length, site)
    if check:
        check_norm(state)
    return state


def evolve(
    initial: str | np.ndarray,
    rule: RuleSpec,
    cycles: int,
    record_states: bool | None = None,
) -> Trajectory:
    """Run `cycles` cycles from a basis string or an explicit statevector.

    States are kept per cycle only when requested (default: chains of at
    most 16 sites); populations are always recorded.
    """
    if isinstance(initial, str):
        validate_bits(initial)
        label = initial
        state = basis_state(initial)
    else:
        state = np.array(initial, dtype=complex)
        check_norm(state)
        label = "?" * num_qubits(state)
    length = num_qubits(state)
    if length > MAX_STATE_QUBITS:
        raise ValueError(f"chain of {length} sites exceeds the {MAX_STATE_QUBITS}-qubit cap")
    if cycles < 0:
        raise ValueError("cycles must be >= 0")
    if record_states is None:
        record_states = length <= 16

    pops = np.empty((cycles + 1, length))
    pops[0] = population(state)
    states = [state.copy()] if record_states else None
    for t in range(1, cycles + 1):
        apply_cycle(state, rule, length)
        pops[t] = population(state)
        if states is not None:
            states.append(state.copy())
    return Trajectory(rule=rule, initial=label, populations=pops, states=states)


def _check_dense(length: int) -> None:
    if length > MAX_DENSE_QUBITS:
        raise ValueError(f"dense operators limited to {MAX_DENSE_QUBITS} qubits, got {length}")


def site_update_unitary(rule: RuleSpec, length: int, site: int) -> np.ndarray:
    """Dense one-site update, including its neighbor projectors."""
    _check_dense(length)
    if not 1 <= site <= length:
        raise ValueError(f"site {site} outside 1..{length}")
    dim = 1 << length
    mat = np.eye(dim, dtype=complex)
    _apply_site(mat.ravel(), rule, length, site)
    return mat.T.copy()


def cycle_unitary(rule: RuleSpec, length: int) -> np.ndarray:
    """Dense unitary of one full cycle."""
    _check_dense(length)
    dim = 1 << length
    mat = np.eye(dim, dtype=complex)
    flat = mat.ravel()
    for site in range(2, length + 1, 2):
        _apply_site(flat, rule, length, site)
    for site in range(1, length + 1, 2):
        _apply_site(flat, rule, length, site)
    return mat.T.copy()


def commutator_invariant_norm(rule: RuleSpec, length: int, batch: int = 2048) -> float:
    """Frobenius norm of [O, U] for the cycle unitary U.

    O is diagonal in the computational basis, so the norm follows from
    columns of U alone: |[O,U]|_F^2 = sum_ab (d_a - d_b)^2 |U_ab|^2.
    Columns are produced in batches to cap memory.
    """
    from .invariant import invariant_table

    _check_dense(length)
    dim = 1 << length
    diag = invariant_table(length).astype(np.float64)
    acc = 0.0
    for start in range(0, dim, batch):
        stop = min(start + batch, dim)
        block = np.zeros((stop - start, dim), dtype=complex)
        block[np.arange(stop - start), np.arange(start, stop)] = 1.0
        flat = block.ravel()
        for site in range(2, length + 1, 2):
            _apply_site(flat, rule, length, site)
        for site in range(1, length + 1, 2):
            _apply_site(flat, rule, length, site)
        # row b of block is now U e_b, i.e. block[b, a] = U[a, b]
        diff = diag[None, :] - diag[start:stop, None]
        acc += float(np.sum(diff**2 * (block.real**2 + block.imag**2)))
    return float(np.sqrt(acc))


def _activation_json(rule: RuleSpec) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in rule.activation]


def export_trajectory(traj: Trajectory, path, write_states: bool = False, config_hash: str | None = None) -> None:
    """Write a trajectory as JSON; optionally dump raw statevectors.

    Statevectors go to <path stem>_states/cycle_<t>.c128 as little-endian
    complex128 pairs.
    """
    from pathlib import Path

    path = Path(path)
    doc = {
        "rule": traj.rule.number,
        "activation": _activation_json(traj.rule),
        "L": traj.length,
        "initial": traj.initial,
        "t_max": traj.t_max,
        "populations": [[float(p) for p in row] for row in traj.populations],
    }
    if config_hash is not None:
        doc["config_hash"] = config_hash
    path.write_text(json.dumps(doc, indent=1) + "\n")
    if write_states:
        if traj.states is None:
            raise ValueError("trajectory was run without recorded states")
        state_dir = path.parent / (path.stem + "_states")
        state_dir.mkdir(parents=True, exist_ok=True)
        for t, state in enumerate(traj.states):
            state.astype("<c16").tofile(state_dir / f"cycle_{t}.c128")


def load_trajectory(path) -> Trajectory:
    from pathlib import Path

    doc = json.loads(Path(path).read_text())
    act = np.array([[complex(re, im) for re, im in row] for row in doc["activation"]])
    rule = RuleSpec.from_number(doc["rule"], act)
    return Trajectory(
        rule=rule,
        initial=doc["initial"],
        populations=np.array(doc["populations"], dtype=float),
    )
