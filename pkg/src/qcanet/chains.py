"""Picking qubit chains from a device error map.

Chains are simple paths in the device's coupling grid, ranked by the
sum of per-qubit readout and relaxation penalties plus per-coupler
two-qubit error. The search is exhaustive and only meant for toy grids.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

MAX_GRID_QUBITS = 60
TAU_REF_US = 6.84  # reference circuit duration for the relaxation penalty

Coord = tuple[int, int]


class InfeasibleChainError(ValueError):
    """No simple path of the requested length exists in the grid."""


@dataclass(frozen=True)
class QubitMetrics:
    e_r1: float
    t1_us: float

    def __post_init__(self):
        if not 0.0 <= self.e_r1 <= 1.0:
            raise ValueError(f"readout error {self.e_r1} outside [0, 1]")
        if self.t1_us <= 0.0:
            raise ValueError(f"relaxation time {self.t1_us} must be positive")


@dataclass
class DeviceMetrics:
    qubits: dict[Coord, QubitMetrics]
    couplers: dict[tuple[Coord, Coord], float] = field(default_factory=dict)

    def __post_init__(self):
        self.couplers = {
            self._key(a, b): e2 for (a, b), e2 in self.couplers.items()
        }
        for (a, b), e2 in self.couplers.items():
            if a not in self.qubits or b not in self.qubits:
                raise ValueError(f"coupler {a}-{b} references unknown qubit")
            if not 0.0 <= e2 <= 1.0:
                raise ValueError(f"two-qubit error {e2} outside [0, 1]")

    @staticmethod
    def _key(a: Coord, b: Coord) -> tuple[Coord, Coord]:
        return (a, b) if a <= b else (b, a)

    def coupler_error(self, a: Coord, b: Coord) -> float:
        return self.couplers[self._key(a, b)]

    def neighbors(self, coord: Coord) -> list[Coord]:
        out = []
        for a, b in self.couplers:
            if a == coord:
                out.append(b)
            elif b == coord:
                out.append(a)
        return sorted(out)

    @classmethod
    def uniform_grid(
        cls, rows: int, cols: int, e_r1: float = 0.07, t1_us: float = 15.0, e2: float = 0.014
    ) -> "DeviceMetrics":
        qubits = {
            (r, c): QubitMetrics(e_r1, t1_us) for r in range(rows) for c in range(cols)
        }
        couplers = {}
        for r in range(rows):
            for c in range(cols):
                if c + 1 < cols:
                    couplers[((r, c), (r, c + 1))] = e2
                if r + 1 < rows:
                    couplers[((r, c), (r + 1, c))] = e2
        return cls(qubits, couplers)

    def to_json(self, path) -> None:
        doc = {
            "qubits": [
                {"row": r, "col": c, "e_r1": m.e_r1, "t1_us": m.t1_us}
                for (r, c), m in sorted(self.qubits.items())
            ],
            "couplers": [
                {"a": list(a), "b": list(b), "e2": e2}
                for (a, b), e2 in sorted(self.couplers.items())
            ],
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")

    @classmethod
    def from_json(cls, path) -> "DeviceMetrics":
        doc = json.loads(Path(path).read_text())
        qubits = {
            (q["row"], q["col"]): QubitMetrics(q["e_r1"], q["t1_us"])
            for q in doc["qubits"]
        }
        couplers = {
            (tuple(c["a"]), tuple(c["b"])): c["e2"] for c in doc["couplers"]
        }
        return cls(qubits, couplers)


def chain_cost(metrics: DeviceMetrics, path: Iterable[Coord]) -> float:
    path = list(path)
    cost = sum(
        metrics.qubits[q].e_r1 + TAU_REF_US / metrics.qubits[q].t1_us for q in path
    )
    cost += sum(metrics.coupler_error(a, b) for a, b in zip(path, path[1:]))
    return cost


def _all_simple_paths(metrics: DeviceMetrics, length: int) -> list[tuple[Coord, ...]]:
    """Every simple path on `length` qubits, one orientation per path."""
    paths = []
    adjacency = {q: metrics.neighbors(q) for q in metrics.qubits}

    def extend(path: list[Coord], visited: set[Coord]) -> None:
        if len(path) == length:
            tup = tuple(path)
            if tup <= tup[::-1]:
                paths.append(tup)
            return
        for nxt in adjacency[path[-1]]:
            if nxt not in visited:
                visited.add(nxt)
                path.append(nxt)
                extend(path, visited)
                path.pop()
                visited.remove(nxt)

    for start in sorted(metrics.qubits):
        extend([start], {start})
    return paths


def chain_select(
    metrics: DeviceMetrics, length: int, n_chains: int = 1
) -> list[tuple[Coord, ...]]:
    """Up to `n_chains` length-`length` paths, cheapest first.

    Later picks prefer paths vertex-disjoint from earlier ones and fall
    back to overlapping paths only when no disjoint path remains. Ties
    break on the lexicographically smaller path, so the result is a
    pure function of the metrics.
    """
    if len(metrics.qubits) > MAX_GRID_QUBITS:
        raise ValueError(f"exhaustive search limited to {MAX_GRID_QUBITS} qubits")
    if length < 1 or length > len(metrics.qubits):
        raise InfeasibleChainError(f"no {length}-qubit path in a {len(metrics.qubits)}-qubit grid")
    ranked = sorted(
        _all_simple_paths(metrics, length),
        key=lambda p: (chain_cost(metrics, p), p),
    )
    if not ranked:
        raise InfeasibleChainError(f"no simple path of length {length} exists")
    selected: list[tuple[Coord, ...]] = []
    used: set[Coord] = set()
    remaining = list(ranked)
    while remaining and len(selected) < n_chains:
        pick = next((p for p in remaining if used.isdisjoint(p)), remaining[0])
        selected.append(pick)
        used.update(pick)
        remaining.remove(pick)
    return selected
