"""Lowering cycle evolution to the native gate set.

The three-site update with Hadamard activation factors into two
controlled-Hadamard gates, one per neighbor, because the two-neighbor
branch applies H twice. A cycle therefore becomes four columns of CH
gates: even targets controlled from the left, even targets from the
right, odd targets from the left, odd targets from the right. Each CH
lowers to two excitation-conserving K gates plus single-qubit
rotations; runs of rotations merge into one PhXZ per qubit per layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .circuit import (
    CompiledCircuit,
    Moment,
    insert_spin_echoes,
    merge_single_qubit_runs,
    pad_single_moments,
)
from .decompose import DEFAULT_SWAP_ANGLE, correction_moments, decompose_ch
from .gates import Gate
from .rules import RuleSpec, goldilocks_rule


@dataclass(frozen=True)
class CouplerParams:
    """Characterized K-gate parameters for one coupler."""

    theta: float
    zeta: float
    chi: float
    gamma: float
    phi: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.theta, self.zeta, self.chi, self.gamma, self.phi)


@dataclass
class Calibration:
    """Per-coupler K parameters, keyed by the bond's lower site."""

    couplers: dict[int, CouplerParams] = field(default_factory=dict)

    @classmethod
    def ideal(cls, length: int, parasitic_phi: float = 0.0) -> "Calibration":
        params = CouplerParams(DEFAULT_SWAP_ANGLE, 0.0, 0.0, 0.0, parasitic_phi)
        return cls({bond: params for bond in range(1, length)})

    def bond(self, site_a: int, site_b: int) -> CouplerParams:
        return self.couplers[min(site_a, site_b)]

    def to_json(self, path) -> None:
        doc = {
            str(bond): list(params.as_tuple())
            for bond, params in sorted(self.couplers.items())
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")

    @classmethod
    def from_json(cls, path) -> "Calibration":
        doc = json.loads(Path(path).read_text())
        return cls({int(bond): CouplerParams(*vals) for bond, vals in doc.items()})


def _column_pairs(length: int, target_parity: int, control_left: bool):
    """(control, target) pairs for one CH column; targets share a parity
    and controls are all left or all right neighbors."""
    pairs = []
    for target in range(1, length + 1):
        if target % 2 != target_parity:
            continue
        control = target - 1 if control_left else target + 1
        if 1 <= control <= length:
            pairs.append((control, target))
    return pairs


def cycle_columns(length: int) -> list[list[tuple[int, int]]]:
    """The four CH columns of one cycle, in application order."""
    return [
        _column_pairs(length, 0, True),
        _column_pairs(length, 0, False),
        _column_pairs(length, 1, True),
        _column_pairs(length, 1, False),
    ]


def _lower_column(
    pairs: list[tuple[int, int]],
    calibration: Calibration,
    compensate: bool,
) -> list[Moment]:
    """Lower one CH column to native moments, pairs in parallel.

    The decomposition angles use the coupler's characterized parasitic
    phase when compensating, zero otherwise; the emitted K gates always
    carry the full characterized parameters, wrapped in the corrective
    z-rotations that cancel the zeta and gamma phases.
    """
    per_pair: list[list[list[Gate]]] = []
    for control, target in pairs:
        params = calibration.bond(control, target)
        drift = params.phi if compensate else 0.0
        moments = decompose_ch(control, target, parasitic_phi=drift)
        lowered: list[list[Gate]] = []
        for moment in moments:
            gate = moment[0]
            if gate.kind != "k":
                lowered.append(moment)
                continue
            executed = Gate("k", gate.sites, params.as_tuple())
            pre, post = correction_moments(executed, params.zeta, params.gamma)
            lowered.extend([pre, [executed], post])
        per_pair.append(lowered)
    if not per_pair:
        return []
    depth = len(per_pair[0])
    out = []
    for idx in range(depth):
        gates: list[Gate] = []
        for lowered in per_pair:
            gates.extend(lowered[idx])
        out.append(Moment(tuple(sorted(gates, key=lambda g: g.sites))))
    return out


def compile_circuit(
    length: int,
    cycles: int,
    rule: RuleSpec | None = None,
    calibration: Calibration | None = None,
    compensate: bool = True,
    spin_echo: bool = True,
) -> CompiledCircuit:
    """Compile `cycles` rounds of the update rule to native gates.

    Only the Hadamard-activated one-hot rule lowers to CH columns; other
    rules are rejected. The result alternates single- and two-qubit
    moments, eight two-qubit layers per cycle for chains of three or
    more sites (a two-site chain has only two CH gates per cycle, hence
    four).
    """
    if rule is None:
        rule = goldilocks_rule()
    if rule.number != 6 or rule.activation_name != "H":
        raise ValueError("only the Hadamard-activated one-hot rule is compilable")
    if length < 2:
        raise ValueError("compilation needs at least two sites")
    if cycles < 0:
        raise ValueError("cycles must be nonnegative")
    if calibration is None:
        calibration = Calibration.ideal(length)
    for bond in range(1, length):
        if bond not in calibration.couplers:
            raise ValueError(f"calibration missing bond {bond}-{bond + 1}")

    moments: list[Moment] = []
    spans: list[tuple[int, int]] = []
    for _ in range(cycles):
        start = len(moments)
        for pairs in cycle_columns(length):
            moments.extend(_lower_column(pairs, calibration, compensate))
        spans.append((start, len(moments)))
    circuit = CompiledCircuit(length, moments, spans)
    circuit.validate_sites()
    circuit = merge_single_qubit_runs(circuit)
    circuit = pad_single_moments(circuit)
    if spin_echo:
        circuit = insert_spin_echoes(circuit)
    return circuit
