"""Moment-structured circuits on a chain.

A compiled circuit alternates full single-qubit moments with two-qubit
moments. Mixed moments are not allowed: every two-qubit moment acts as
a barrier for single-qubit merging, which keeps moment alignment stable
and makes merging idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .gates import (
    Gate,
    identity_phxz,
    is_identity_phxz,
    merge_to_phxz,
    phxz,
)
from .states import check_norm

SWAP4 = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


@dataclass(frozen=True)
class Moment:
    gates: tuple[Gate, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for gate in self.gates:
            for s in gate.sites:
                if s in seen:
                    raise ValueError(f"site {s} used twice in one moment")
                seen.add(s)
        kinds = {g.is_two_qubit for g in self.gates}
        if len(kinds) > 1:
            raise ValueError("moments may not mix single- and two-qubit gates")

    @property
    def is_two_qubit(self) -> bool:
        return bool(self.gates) and self.gates[0].is_two_qubit

    def sites(self) -> set[int]:
        out: set[int] = set()
        for gate in self.gates:
            out.update(gate.sites)
        return out

    def gate_on(self, site: int) -> Gate | None:
        for gate in self.gates:
            if site in gate.sites:
                return gate
        return None


@dataclass
class CompiledCircuit:
    """Gate moments plus the moment span of each cycle.

    cycle_spans[k] = (start, stop) delimits cycle k as moments
    [start, stop); a trailing single-qubit moment after the last cycle
    belongs to no cycle.
    """

    length: int
    moments: list[Moment]
    cycle_spans: list[tuple[int, int]] = field(default_factory=list)

    @property
    def n_cycles(self) -> int:
        return len(self.cycle_spans)

    def validate_sites(self) -> None:
        for moment in self.moments:
            for gate in moment.gates:
                if not all(1 <= s <= self.length for s in gate.sites):
                    raise ValueError(f"gate {gate} outside chain 1..{self.length}")
                if gate.is_two_qubit and abs(gate.sites[0] - gate.sites[1]) != 1:
                    raise ValueError(f"two-qubit gate on non-adjacent sites {gate.sites}")


def apply_gate(state: np.ndarray, length: int, gate: Gate) -> None:
    mat = gate.matrix()
    if not gate.is_two_qubit:
        site = gate.sites[0]
        kernels.apply_matrix(state, 2, 1 << (length - site), mat)
    else:
        lo, hi = sorted(gate.sites)
        if gate.sites[0] > gate.sites[1]:
            mat = SWAP4 @ mat @ SWAP4
        kernels.apply_matrix(state, 4, 1 << (length - hi), mat)


def simulate_circuit(
    circuit: CompiledCircuit, state: np.ndarray, check: bool = True
) -> np.ndarray:
    """Apply all moments to `state` in place and return it."""
    for moment in circuit.moments:
        for gate in moment.gates:
            apply_gate(state, circuit.length, gate)
    if check:
        check_norm(state)
    return state


def circuit_unitary(circuit: CompiledCircuit) -> np.ndarray:
    """Dense unitary of the whole circuit (12-qubit cap)."""
    from .evolve import MAX_DENSE_QUBITS

    if circuit.length > MAX_DENSE_QUBITS:
        raise ValueError(f"dense operators limited to {MAX_DENSE_QUBITS} qubits")
    dim = 1 << circuit.length
    mat = np.eye(dim, dtype=complex)
    flat = mat.ravel()
    for moment in circuit.moments:
        for gate in moment.gates:
            apply_gate(flat, circuit.length, gate)
    return mat.T.copy()


def _emit_segment(pending: dict[int, list[np.ndarray]], out: list[Moment]) -> None:
    if not pending:
        return
    merged = tuple(merge_to_phxz(site, mats) for site, mats in sorted(pending.items()))
    out.append(Moment(merged))
    pending.clear()


def merge_single_qubit_runs(circuit: CompiledCircuit) -> CompiledCircuit:
    """Collapse single-qubit runs between two-qubit moments to one PhXZ.

    Every two-qubit moment is a global barrier. Runs that multiply to
    the identity still emit an identity PhXZ so moment alignment is
    preserved. Cycle boundaries are carried over by two-qubit moment
    count.
    """
    boundary_t = _cycle_boundaries_by_two_qubit_count(circuit)
    out: list[Moment] = []
    pending: dict[int, list[np.ndarray]] = {}
    for moment in circuit.moments:
        if moment.is_two_qubit:
            _emit_segment(pending, out)
            out.append(moment)
        else:
            for gate in moment.gates:
                pending.setdefault(gate.sites[0], []).append(gate.matrix())
    _emit_segment(pending, out)
    return _respan(CompiledCircuit(circuit.length, out), boundary_t)


def _cycle_boundaries_by_two_qubit_count(circuit: CompiledCircuit) -> list[int]:
    """Two-qubit moment count at the end of each cycle span."""
    counts = []
    running = 0
    spans = iter(circuit.cycle_spans)
    span = next(spans, None)
    for idx, moment in enumerate(circuit.moments):
        if moment.is_two_qubit:
            running += 1
        while span is not None and idx == span[1] - 1:
            counts.append(running)
            span = next(spans, None)
    return counts


def _respan(circuit: CompiledCircuit, boundary_t: list[int]) -> CompiledCircuit:
    """Rebuild cycle spans so cycle k ends right after its boundary_t[k]-th
    two-qubit moment (inclusive of any single-qubit moment in between)."""
    spans: list[tuple[int, int]] = []
    running = 0
    start = 0
    targets = iter(boundary_t)
    target = next(targets, None)
    for idx, moment in enumerate(circuit.moments):
        if moment.is_two_qubit:
            running += 1
            while target is not None and running == target:
                spans.append((start, idx + 1))
                start = idx + 1
                target = next(targets, None)
    circuit.cycle_spans = spans
    return circuit


def pad_single_moments(circuit: CompiledCircuit) -> CompiledCircuit:
    """Fill every single-qubit moment with identity PhXZ on untouched sites
    and insert missing single-qubit moments between two-qubit moments."""
    out: list[Moment] = []
    prev_two = True
    for moment in circuit.moments:
        if moment.is_two_qubit:
            if prev_two:
                out.append(_full_identity_moment(circuit.length))
            out.append(moment)
            prev_two = True
        else:
            present = moment.sites()
            extra = tuple(
                identity_phxz(s) for s in range(1, circuit.length + 1) if s not in present
            )
            out.append(Moment(tuple(sorted(moment.gates + extra, key=lambda g: g.sites))))
            prev_two = False
    if prev_two:
        out.append(_full_identity_moment(circuit.length))
    boundary_t = _cycle_boundaries_by_two_qubit_count(circuit)
    return _respan(CompiledCircuit(circuit.length, out), boundary_t)


def _full_identity_moment(length: int) -> Moment:
    return Moment(tuple(identity_phxz(s) for s in range(1, length + 1)))


def insert_spin_echoes(circuit: CompiledCircuit) -> CompiledCircuit:
    """Replace identity pads on idle stretches with cancelling X pairs.

    A qubit's idle span is a maximal run of single-qubit moments where
    it carries an identity PhXZ, uninterrupted by any gate on it (idle
    two-qubit moments in between do not break the span). Spans of two or
    more idle layers get a Pauli X at the first and last layer when even
    in length, and at the first two layers when odd.
    """
    table: list[dict[int, Gate]] = [
        {s: moment.gate_on(s) for s in moment.sites()} for moment in circuit.moments
    ]
    for site in range(1, circuit.length + 1):
        idle: list[int] = []
        for idx, moment in enumerate(circuit.moments):
            gate = table[idx].get(site)
            if moment.is_two_qubit:
                if gate is not None:
                    _place_echoes(table, site, idle)
                    idle = []
            else:
                if gate is not None and is_identity_phxz(gate):
                    idle.append(idx)
                else:
                    _place_echoes(table, site, idle)
                    idle = []
        _place_echoes(table, site, idle)
    moments = []
    for idx, moment in enumerate(circuit.moments):
        if moment.is_two_qubit:
            moments.append(moment)
        else:
            moments.append(
                Moment(tuple(sorted(table[idx].values(), key=lambda g: g.sites)))
            )
    return CompiledCircuit(circuit.length, moments, list(circuit.cycle_spans))


def _place_echoes(table: list[dict[int, Gate]], site: int, idle: list[int]) -> None:
    if len(idle) < 2:
        return
    if len(idle) % 2 == 0:
        first, second = idle[0], idle[-1]
    else:
        first, second = idle[0], idle[1]
    table[first][site] = Gate("x", (site,))
    table[second][site] = Gate("x", (site,))


@dataclass
class GateCounts:
    two_qubit_per_cycle: list[int]
    single_qubit_per_cycle: list[int]
    trailing_single_qubit: int

    @property
    def two_qubit_total(self) -> int:
        return sum(self.two_qubit_per_cycle)

    @property
    def single_qubit_total(self) -> int:
        return sum(self.single_qubit_per_cycle) + self.trailing_single_qubit


def gate_counts(circuit: CompiledCircuit) -> GateCounts:
    twos = []
    singles = []
    for start, stop in circuit.cycle_spans:
        t = s = 0
        for moment in circuit.moments[start:stop]:
            for gate in moment.gates:
                if gate.is_two_qubit:
                    t += 1
                else:
                    s += 1
        twos.append(t)
        singles.append(s)
    covered = circuit.cycle_spans[-1][1] if circuit.cycle_spans else 0
    trailing = sum(
        len(m.gates) for m in circuit.moments[covered:] if not m.is_two_qubit
    )
    return GateCounts(twos, singles, trailing)


def circuit_to_json(circuit: CompiledCircuit, path, config_hash: str | None = None) -> None:
    doc = {
        "length": circuit.length,
        "cycle_spans": [list(span) for span in circuit.cycle_spans],
        "moments": [
            [
                {"kind": g.kind, "sites": list(g.sites), "params": list(g.params)}
                for g in moment.gates
            ]
            for moment in circuit.moments
        ],
    }
    if config_hash is not None:
        doc["config_hash"] = config_hash
    Path(path).write_text(json.dumps(doc) + "\n")


def circuit_from_json(path) -> CompiledCircuit:
    doc = json.loads(Path(path).read_text())
    moments = [
        Moment(
            tuple(
                Gate(g["kind"], tuple(g["sites"]), tuple(g["params"]))
                for g in entry
            )
        )
        for entry in doc["moments"]
    ]
    return CompiledCircuit(
        doc["length"], moments, [tuple(span) for span in doc["cycle_spans"]]
    )
