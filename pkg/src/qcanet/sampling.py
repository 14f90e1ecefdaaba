"""Finite-shot sampling, readout error, and trajectory-based gate noise.

Randomness comes from counter-based Philox streams: a root keyed by the
user seed is `jumped(k)` to give trajectory k its own independent
stream. Within a trajectory, draws happen in a fixed order ( per gate:
one uniform, plus one integer when the error fires; per layer: one
uniform per qubit for damping; per snapshot: shot and readout draws),
so every result is reproducible from (seed, trajectory index) alone.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .circuit import CompiledCircuit, apply_gate
from .compiler import Calibration, compile_circuit
from .invariant import domain_walls, enumerate_sector
from .rules import RuleSpec, goldilocks_rule
from .states import MAX_STATE_QUBITS, basis_state, check_norm

MAX_EXACT_TABLE_QUBITS = 16

PAULI_MATS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.diag([1.0, -1.0]).astype(complex),
)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing-style gate errors plus relaxation and readout error.

    Probabilities are per gate (e1, e2) and per bit read (e_r0, e_r1);
    t1_us is the relaxation time and tau_*_ns the layer durations that
    convert it into a per-layer damping probability.
    """

    e1: float = 0.0
    e2: float = 0.0
    e_r0: float = 0.0
    e_r1: float = 0.0
    t1_us: float = math.inf
    tau_1q_ns: float = 25.0
    tau_2q_ns: float = 32.0

    def __post_init__(self):
        for name in ("e1", "e2", "e_r0", "e_r1"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} outside [0, 1]")
        for name in ("t1_us", "tau_1q_ns", "tau_2q_ns"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def weber(cls) -> "NoiseModel":
        """Typical published performance figures for the target device."""
        return cls(e1=0.001, e2=0.014, e_r0=0.02, e_r1=0.07, t1_us=15.0)

    def damping_probability(self, tau_ns: float) -> float:
        return 1.0 - math.exp(-(tau_ns * 1e-3) / self.t1_us)

    @property
    def is_zero(self) -> bool:
        return (
            self.e1 == self.e2 == self.e_r0 == self.e_r1 == 0.0
            and math.isinf(self.t1_us)
        )

    def to_json(self, path) -> None:
        doc = {
            "e1": self.e1,
            "e2": self.e2,
            "e_r0": self.e_r0,
            "e_r1": self.e_r1,
            "t1_us": self.t1_us,
            "tau_1q_ns": self.tau_1q_ns,
            "tau_2q_ns": self.tau_2q_ns,
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")

    @classmethod
    def from_json(cls, path) -> "NoiseModel":
        doc = json.loads(Path(path).read_text())
        return cls(**doc)


@dataclass
class CountsTable:
    length: int
    counts: dict[str, int]

    def __post_init__(self):
        for key, value in self.counts.items():
            if len(key) != self.length or set(key) - {"0", "1"}:
                raise ValueError(f"bad bitstring key {key!r} for length {self.length}")
            if value < 0:
                raise ValueError(f"negative count for {key!r}")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def items(self):
        return sorted(self.counts.items())

    def merge(self, other: "CountsTable") -> "CountsTable":
        if other.length != self.length:
            raise ValueError("length mismatch")
        merged = dict(self.counts)
        for key, value in other.counts.items():
            merged[key] = merged.get(key, 0) + value
        return CountsTable(self.length, merged)

    def populations(self) -> np.ndarray:
        """Per-site frequency of reading 1."""
        total = self.total
        out = np.zeros(self.length)
        if total == 0:
            return out
        for key, value in self.counts.items():
            for site, char in enumerate(key):
                if char == "1":
                    out[site] += value
        return out / total

    def to_csv(self, path, config_hash: str | None = None) -> None:
        with open(path, "w", newline="") as fh:
            if config_hash is not None:
                fh.write(f"# config={config_hash}\n")
            writer = csv.writer(fh)
            writer.writerow(["bitstring", "count"])
            for key, value in self.items():
                writer.writerow([key, value])

    @classmethod
    def from_csv(cls, path) -> "CountsTable":
        counts: dict[str, int] = {}
        with open(path, newline="") as fh:
            rows = csv.reader(row for row in fh if not row.startswith("#"))
            header = next(rows)
            if header != ["bitstring", "count"]:
                raise ValueError(f"unexpected header {header}")
            for key, value in rows:
                counts[key] = counts.get(key, 0) + int(value)
        if not counts:
            raise ValueError("empty counts file")
        return cls(len(next(iter(counts))), counts)


@dataclass
class ProbTable:
    """Exact probability table over explicit bitstrings."""

    length: int
    probs: dict[str, float]

    def __post_init__(self):
        total = 0.0
        for key, value in self.probs.items():
            if len(key) != self.length:
                raise ValueError(f"bad bitstring key {key!r}")
            if value < 0.0:
                raise ValueError(f"negative probability for {key!r}")
            total += value
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def items(self):
        return sorted(self.probs.items())


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def _sample_indices(probs: np.ndarray, n_shots: int, rng) -> np.ndarray:
    cum = np.cumsum(probs)
    cum /= cum[-1]
    idx = np.searchsorted(cum, rng.random(n_shots), side="right")
    return np.minimum(idx, len(probs) - 1)


def _indices_to_table(indices: np.ndarray, length: int) -> CountsTable:
    values, counts = np.unique(indices, return_counts=True)
    table = {
        format(int(v), f"0{length}b"): int(c) for v, c in zip(values, counts)
    }
    return CountsTable(length, table)


def sample_counts(state: np.ndarray, n_shots: int, seed: int = 0) -> CountsTable:
    """Multinomial z-basis sample of a normalized statevector."""
    if n_shots < 1:
        raise ValueError("need at least one shot")
    check_norm(state)
    length = int(np.log2(state.size))
    probs = np.abs(state) ** 2
    idx = _sample_indices(probs, n_shots, _generator(seed))
    return _indices_to_table(idx, length)


def _flip_bits(bits: np.ndarray, model: NoiseModel, rng) -> np.ndarray:
    if model.e_r0 == 0.0 and model.e_r1 == 0.0:
        return bits
    flip_prob = np.where(bits == 1, model.e_r1, model.e_r0)
    return bits ^ (rng.random(bits.shape) < flip_prob)


def _indices_to_bits(indices: np.ndarray, length: int) -> np.ndarray:
    shifts = np.arange(length - 1, -1, -1)
    return ((indices[:, None] >> shifts) & 1).astype(np.uint8)


def _bits_to_indices(bits: np.ndarray) -> np.ndarray:
    powers = 1 << np.arange(bits.shape[1] - 1, -1, -1)
    return bits.astype(np.int64) @ powers


def apply_readout_error(counts: CountsTable, model: NoiseModel, seed: int = 0) -> CountsTable:
    """Flip each recorded bit independently: 0 reads 1 with e_r0, 1 reads 0 with e_r1."""
    if model.e_r0 == 0.0 and model.e_r1 == 0.0:
        return CountsTable(counts.length, dict(counts.counts))
    rng = _generator(seed)
    indices = np.concatenate(
        [np.full(value, int(key, 2), dtype=np.int64) for key, value in counts.items()]
    )
    bits = _flip_bits(_indices_to_bits(indices, counts.length), model, rng)
    return _indices_to_table(_bits_to_indices(bits), counts.length)


def uniform_random_counts(length: int, n_shots: int, seed: int = 0) -> CountsTable:
    """N uniform draws over all length-L bitstrings."""
    if length > MAX_STATE_QUBITS:
        raise ValueError(f"length limited to {MAX_STATE_QUBITS}")
    rng = _generator(seed)
    idx = rng.integers(0, 1 << length, size=n_shots)
    return _indices_to_table(idx, length)


def exact_uniform_distribution(length: int) -> ProbTable:
    if length > MAX_EXACT_TABLE_QUBITS:
        raise ValueError(f"exact tables limited to {MAX_EXACT_TABLE_QUBITS} qubits")
    p = 1.0 / (1 << length)
    return ProbTable(length, {format(i, f"0{length}b"): p for i in range(1 << length)})


def sector_uniform_distribution(length: int, reference: str) -> ProbTable:
    """Uniform distribution over the invariant sector of `reference`."""
    strings = enumerate_sector(length, domain_walls(reference))
    p = 1.0 / len(strings)
    return ProbTable(length, {s: p for s in strings})


def _inject_pauli(state, length: int, sites, e: float, rng) -> None:
    if rng.random() >= e:
        return
    if len(sites) == 1:
        which = (int(rng.integers(3)),)
    else:
        draw = int(rng.integers(15)) + 1  # skip identity x identity
        which = (draw // 4 - 1, draw % 4 - 1)  # -1 marks identity factor
    for site, pauli in zip(sites, which):
        if pauli >= 0:
            kernels.apply_matrix(state, 2, 1 << (length - site), PAULI_MATS[pauli])


@dataclass
class NoisyRun:
    """Per-cycle measurement tables from Monte-Carlo trajectories."""

    length: int
    cycles: int
    counts_per_cycle: list[CountsTable]
    trajectories: int


def noisy_evolve(
    initial: str,
    cycles: int,
    model: NoiseModel,
    n_shots: int = 100_000,
    n_trajectories: int = 100,
    seed: int = 0,
    rule: RuleSpec | None = None,
    calibration: Calibration | None = None,
    compensate: bool = True,
) -> NoisyRun:
    """Sample the compiled circuit under the noise model, per cycle.

    Each trajectory evolves the statevector through every moment of a
    `cycles`-deep compiled circuit; after each gate a Pauli error fires
    with probability e1 or e2, and each layer applies amplitude damping
    to every qubit for the layer's duration. The cycle-t measurement
    applies the closing rotation layer on a copy (a t-cycle circuit is
    exactly the shared prefix plus that one layer) and adds readout
    error. Cycle 0 measures the prepared state directly.
    """
    length = len(initial)
    if length > MAX_STATE_QUBITS:
        raise ValueError(f"chains limited to {MAX_STATE_QUBITS} qubits")
    if rule is None:
        rule = goldilocks_rule()
    if n_trajectories < 1:
        raise ValueError("need at least one trajectory")
    circuit = compile_circuit(
        length, cycles, rule=rule, calibration=calibration, compensate=compensate
    )
    closer = compile_circuit(
        length, 1, rule=rule, calibration=calibration, compensate=compensate
    ).moments[-1]

    shots = [
        n_shots // n_trajectories + (1 if k < n_shots % n_trajectories else 0)
        for k in range(n_trajectories)
    ]
    root = np.random.Philox(key=seed)
    per_cycle: list[dict[str, int]] = [{} for _ in range(cycles + 1)]
    for traj in range(n_trajectories):
        if shots[traj] == 0:
            continue
        rng = np.random.Generator(root.jumped(traj))
        _run_trajectory(
            circuit, closer, initial, model, shots[traj], rng, per_cycle
        )
    tables = [CountsTable(length, counts) for counts in per_cycle]
    return NoisyRun(length, cycles, tables, n_trajectories)


def _measure(state, length, model, n_shots, rng, accum: dict[str, int]) -> None:
    probs = np.abs(state) ** 2
    idx = _sample_indices(probs, n_shots, rng)
    bits = _flip_bits(_indices_to_bits(idx, length), model, rng)
    values, counts = np.unique(_bits_to_indices(bits), return_counts=True)
    for value, count in zip(values, counts):
        key = format(int(value), f"0{length}b")
        accum[key] = accum.get(key, 0) + int(count)


def _noisy_moment(state, length, moment, model, rng) -> None:
    for gate in moment.gates:
        apply_gate(state, length, gate)
        e = model.e2 if gate.is_two_qubit else model.e1
        _inject_pauli(state, length, gate.sites, e, rng)
    tau = model.tau_2q_ns if moment.is_two_qubit else model.tau_1q_ns
    gamma = model.damping_probability(tau)
    kernels.damping_sweep(state, length, gamma, rng.random(length))


def _run_trajectory(
    circuit: CompiledCircuit,
    closer,
    initial: str,
    model: NoiseModel,
    n_shots: int,
    rng,
    per_cycle: list[dict[str, int]],
) -> None:
    length = circuit.length
    state = basis_state(initial)
    _measure(state, length, model, n_shots, rng, per_cycle[0])
    boundaries = {stop: t for t, (_, stop) in enumerate(circuit.cycle_spans, start=1)}
    for idx, moment in enumerate(circuit.moments):
        _noisy_moment(state, length, moment, model, rng)
        cycle = boundaries.get(idx + 1)
        if cycle is not None:
            snapshot = state.copy()
            _noisy_moment(snapshot, length, closer, model, rng)
            check_norm(snapshot, tol=1e-6)
            _measure(snapshot, length, model, n_shots, rng, per_cycle[cycle])
