"""Config-driven experiment runs and sweeps.

A run evolves one initial condition (noiselessly or through the
compiled circuit with trajectory noise), post-selects, builds per-cycle
mutual-information networks, and writes everything under
``<out>/<config-hash>/``. The config hash is a digest of the canonical
JSON document, repeated in a header comment of every CSV, so any
artifact can be traced back to the exact parameters that produced it.
Reruns with the same config are byte-identical; a run directory with a
manifest is considered complete and sweeps will reuse it.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .circuit import gate_counts
from .compiler import Calibration, compile_circuit
from .evolve import apply_cycle
from .mutualinfo import MINetwork, shannon_mi, von_neumann_mi
from .networks import (
    Baseline,
    CoherenceWindow,
    clustering,
    coherence_window,
    node_strengths,
    path_length,
    random_baseline,
    strength_histogram,
)
from .postselect import filter_counts
from .rules import RuleSpec, activation_matrix
from .sampling import NoiseModel, noisy_evolve, sample_counts
from .states import (
    MAX_STATE_QUBITS,
    basis_state,
    flip_string,
    isolated_flips,
    population,
)

VN_MAX_QUBITS = 14  # von Neumann matrices are only written for small chains
DEFAULT_SEEDS = (0, 1, 2, 3)
SWEEP_AXES = ("length", "filling")


class ConfigError(ValueError):
    """Invalid experiment configuration, carrying the offending field."""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment point; hashes and serializes to a flat JSON document.

    `noise` is None for noiseless emulation, "weber" for the built-in
    transmon-like model, or a path to a NoiseModel JSON file. When
    `isolated` is set the initial flips must be pairwise non-adjacent
    (the equally-spaced preset guarantees that).
    """

    length: int
    flips: tuple[int, ...] = ()
    rule_number: int = 6
    activation: str | list = "H"  # name or explicit 2x2 matrix
    t_max: int = 30
    network_t_max: int = 19
    n_shots: int = 100_000
    n_trajectories: int = 100
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    noise: str | None = None
    baseline_mode: str = "exact"
    isolated: bool = True
    parasitic_phi: float = 0.0
    compensate: bool = True
    out_dir: str = "runs"

    def __post_init__(self):
        object.__setattr__(self, "flips", tuple(int(s) for s in self.flips))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not 2 <= self.length <= MAX_STATE_QUBITS:
            raise ConfigError("length", f"must be in 2..{MAX_STATE_QUBITS}")
        for s in self.flips:
            if not 1 <= s <= self.length:
                raise ConfigError("flips", f"site {s} outside 1..{self.length}")
        if len(set(self.flips)) != len(self.flips):
            raise ConfigError("flips", "sites must be distinct")
        if self.isolated:
            ordered = sorted(self.flips)
            for a, b in zip(ordered, ordered[1:]):
                if b - a < 2:
                    raise ConfigError(
                        "flips", f"sites {a} and {b} are adjacent but isolated=true"
                    )
        if not 0 <= self.rule_number <= 15:
            raise ConfigError("rule_number", "must be in 0..15")
        try:
            activation_matrix(self.activation)
        except ValueError as exc:
            raise ConfigError("activation", str(exc)) from exc
        if self.t_max < 0:
            raise ConfigError("t_max", "must be >= 0")
        if self.network_t_max < 0:
            raise ConfigError("network_t_max", "must be >= 0")
        if self.n_shots < 1:
            raise ConfigError("n_shots", "must be >= 1")
        if self.n_trajectories < 1:
            raise ConfigError("n_trajectories", "must be >= 1")
        if not self.seeds:
            raise ConfigError("seeds", "need at least one seed")
        if self.baseline_mode not in ("exact", "sampled"):
            raise ConfigError("baseline_mode", "must be 'exact' or 'sampled'")
        if self.noise is not None and not isinstance(self.noise, str):
            raise ConfigError("noise", "must be null, 'weber', or a file path")

    @classmethod
    def isolated_preset(cls, length: int, count: int, **overrides) -> "ExperimentConfig":
        """Equally spaced `count`-flip initial condition."""
        try:
            sites = isolated_flips(length, count)
        except ValueError as exc:
            raise ConfigError("flips", str(exc)) from exc
        return cls(length=length, flips=sites, **overrides)

    @property
    def initial(self) -> str:
        return flip_string(self.length, self.flips)

    @property
    def rule(self) -> RuleSpec:
        return RuleSpec.from_number(self.rule_number, self.activation)

    def to_doc(self) -> dict:
        doc = {}
        for f in fields(self):
            value = getattr(self, f.name)
            doc[f.name] = list(value) if isinstance(value, tuple) else value
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        for key in doc:
            if key not in known:
                raise ConfigError(key, "unknown field")
        return cls(**doc)

    @property
    def config_hash(self) -> str:
        doc = self.to_doc()
        doc.pop("out_dir")  # same parameters, same identity, wherever they land
        text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_doc(), indent=2) + "\n")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_doc(json.loads(Path(path).read_text()))


def resolve_noise(reference: str | None) -> NoiseModel | None:
    if reference is None:
        return None
    if reference == "weber":
        return NoiseModel.weber()
    return NoiseModel.from_json(reference)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    root: Path
    populations: np.ndarray  # (t_max + 1, L)
    retained: np.ndarray  # (n_seeds, network cycles + 1)
    clustering_series: np.ndarray  # seed-mean, post-selected
    path_series: np.ndarray
    raw_clustering_series: np.ndarray | None
    baseline: Baseline
    window: CoherenceWindow
    files: list[str]

    @property
    def config_hash(self) -> str:
        return self.config.config_hash


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _write_csv(path: Path, header, rows, config_hash: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# config={config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def read_series_csv(path) -> dict[str, np.ndarray]:
    """Columns of a hash-stamped CSV, keyed by header name."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    header, data = rows[0], rows[1:]
    columns = np.array([[float(x) for x in row] for row in data])
    return {name: columns[:, k] for k, name in enumerate(header)}


def _network_measures(net: MINetwork) -> tuple[float, float]:
    return clustering(net), path_length(net).value


def _write_window(path: Path, window: CoherenceWindow, config_hash: str) -> None:
    doc = {"config": config_hash, "start": window.start, "end": window.end}
    path.write_text(json.dumps(doc, indent=2) + "\n")


def _write_baseline(path: Path, base: Baseline, mode: str, config_hash: str) -> None:
    doc = {
        "config": config_hash,
        "mode": mode,
        "clustering": base.clustering,
        "path_length": base.path.value,
        "path_reachable_mean": base.path.reachable_mean,
        "unreachable_pairs": base.path.unreachable_pairs,
        "retained_fraction": base.retained_fraction,
        "strengths": [float(s) for s in base.strengths],
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")


def run_experiment(config: ExperimentConfig, root=None) -> ExperimentResult:
    """Evolve, sample, post-select, analyze, and export one config.

    Artifacts land in `<root>/<config-hash>/`: per-cycle counts and MI
    matrices under `cycle_<t>/`, series CSVs and the baseline, window,
    and manifest at the top. The manifest is written last, so its
    presence marks a complete run.
    """
    model = resolve_noise(config.noise)
    out = Path(root if root is not None else config.out_dir) / config.config_hash
    out.mkdir(parents=True, exist_ok=True)
    config.to_json(out / "config.json")
    files = ["config.json"]

    if model is None:
        result = _run_noiseless(config, out, files)
    else:
        result = _run_noisy(config, model, out, files)

    manifest = {
        "config_hash": config.config_hash,
        "length": config.length,
        "initial": config.initial,
        "noise": config.noise,
        "files": sorted(result.files),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    result.files.append("manifest.json")
    return result


def _finish(
    config, out, files, populations, retained, c_series, ell_series, raw_c, base
) -> ExperimentResult:
    h = config.config_hash
    length = config.length
    _write_csv(
        out / "populations.csv",
        ["cycle"] + [f"n{s}" for s in range(1, length + 1)],
        [[t] + [_fmt(x) for x in row] for t, row in enumerate(populations)],
        h,
    )
    files.append("populations.csv")

    mean_retained = retained.mean(axis=0)
    seed_labels = config.seeds[: retained.shape[0]]  # noiseless runs hold one series
    _write_csv(
        out / "retained.csv",
        ["cycle", "mean"] + [f"seed{s}" for s in seed_labels],
        [
            [t, _fmt(mean_retained[t])] + [_fmt(x) for x in retained[:, t]]
            for t in range(retained.shape[1])
        ],
        h,
    )
    files.append("retained.csv")

    _write_csv(
        out / "measures.csv",
        ["cycle", "C", "ell", "retained_fraction"],
        [
            [t, _fmt(c_series[t]), _fmt(ell_series[t]), _fmt(mean_retained[t])]
            for t in range(len(c_series))
        ],
        h,
    )
    files.append("measures.csv")

    baseline_series = [base.clustering] * len(c_series)
    window = coherence_window(c_series, baseline_series)
    _write_window(out / "window.json", window, h)
    _write_baseline(out / "baseline.json", base, config.baseline_mode, h)
    files += ["window.json", "baseline.json"]

    return ExperimentResult(
        config=config,
        root=out,
        populations=populations,
        retained=retained,
        clustering_series=c_series,
        path_series=ell_series,
        raw_clustering_series=raw_c,
        baseline=base,
        window=window,
        files=files,
    )


def _run_noiseless(config, out, files) -> ExperimentResult:
    length = config.length
    rule = config.rule
    h = config.config_hash
    net_t = min(config.t_max, config.network_t_max)

    state = basis_state(config.initial)
    populations = np.empty((config.t_max + 1, length))
    retained = np.ones((1, net_t + 1))
    c_series = np.empty(net_t + 1)
    ell_series = np.empty(net_t + 1)
    strength_rows = []

    for t in range(config.t_max + 1):
        if t > 0:
            apply_cycle(state, rule, length)
        populations[t] = population(state)
        if t > net_t:
            continue
        cycle_dir = out / f"cycle_{t}"
        cycle_dir.mkdir(exist_ok=True)
        counts = sample_counts(state, config.n_shots, seed=config.seeds[0] + t)
        counts.to_csv(cycle_dir / "counts.csv", config_hash=h)
        retained[0, t] = filter_counts(counts, config.initial).retained_fraction
        net = shannon_mi(state)
        net.to_csv(cycle_dir / "mi_shannon.csv", config_hash=h)
        files += [f"cycle_{t}/counts.csv", f"cycle_{t}/mi_shannon.csv"]
        if length <= VN_MAX_QUBITS:
            von_neumann_mi(state).to_csv(cycle_dir / "mi_vn.csv", config_hash=h)
            files.append(f"cycle_{t}/mi_vn.csv")
        c_series[t], ell_series[t] = _network_measures(net)
        strength_rows.append([t] + [_fmt(g) for g in node_strengths(net)])

    _write_csv(
        out / "strengths.csv",
        ["cycle"] + [f"g{s}" for s in range(1, length + 1)],
        strength_rows,
        h,
    )
    files.append("strengths.csv")

    base = random_baseline(
        length,
        config.initial,
        mode=config.baseline_mode,
        n_shots=config.n_shots,
        seed=config.seeds[0],
    )
    return _finish(
        config, out, files, populations, retained, c_series, ell_series, None, base
    )


def _run_noisy(config, model, out, files) -> ExperimentResult:
    length = config.length
    h = config.config_hash
    net_t = min(config.t_max, config.network_t_max)
    calibration = (
        Calibration.ideal(length, parasitic_phi=config.parasitic_phi)
        if config.parasitic_phi
        else None
    )

    runs = [
        noisy_evolve(
            config.initial,
            config.t_max,
            model,
            n_shots=config.n_shots,
            n_trajectories=config.n_trajectories,
            seed=seed,
            rule=config.rule,
            calibration=calibration,
            compensate=config.compensate,
        )
        for seed in config.seeds
    ]

    populations = np.empty((config.t_max + 1, length))
    for t in range(config.t_max + 1):
        table = runs[0].counts_per_cycle[t]
        for run in runs[1:]:
            table = table.merge(run.counts_per_cycle[t])
        populations[t] = table.populations()

    retained = np.zeros((len(config.seeds), net_t + 1))
    c_post = np.zeros((len(config.seeds), net_t + 1))
    ell_post = np.zeros((len(config.seeds), net_t + 1))
    c_raw = np.zeros((len(config.seeds), net_t + 1))
    for t in range(net_t + 1):
        cycle_dir = out / f"cycle_{t}"
        cycle_dir.mkdir(exist_ok=True)
        kept_merged = None
        for k, (seed, run) in enumerate(zip(config.seeds, runs)):
            counts = run.counts_per_cycle[t]
            counts.to_csv(cycle_dir / f"counts_seed{seed}.csv", config_hash=h)
            files.append(f"cycle_{t}/counts_seed{seed}.csv")
            result = filter_counts(counts, config.initial)
            retained[k, t] = result.retained_fraction
            c_raw[k, t] = clustering(shannon_mi(counts))
            if result.kept.total:
                net = shannon_mi(result.kept)
                c_post[k, t], ell_post[k, t] = _network_measures(net)
                kept_merged = (
                    result.kept if kept_merged is None else kept_merged.merge(result.kept)
                )
            else:
                c_post[k, t] = 0.0
                ell_post[k, t] = math.inf
        if kept_merged is not None and kept_merged.total:
            shannon_mi(kept_merged).to_csv(cycle_dir / "mi_shannon.csv", config_hash=h)
            files.append(f"cycle_{t}/mi_shannon.csv")

    base = random_baseline(
        length,
        config.initial,
        mode=config.baseline_mode,
        n_shots=config.n_shots,
        seed=config.seeds[0],
    )
    return _finish(
        config,
        out,
        files,
        populations,
        retained,
        c_post.mean(axis=0),
        ell_post.mean(axis=0),
        c_raw.mean(axis=0),
        base,
    )


def compile_stats(
    length: int,
    cycles: int,
    rule: RuleSpec | None = None,
    parasitic_phi: float = 0.0,
    compensate: bool = True,
) -> dict:
    """Gate-volume report for the compiled circuit."""
    calibration = Calibration.ideal(length, parasitic_phi) if parasitic_phi else None
    circuit = compile_circuit(
        length, cycles, rule=rule, calibration=calibration, compensate=compensate
    )
    counts = gate_counts(circuit)
    return {
        "length": length,
        "cycles": cycles,
        "two_qubit_per_cycle": counts.two_qubit_per_cycle,
        "single_qubit_per_cycle": counts.single_qubit_per_cycle,
        "trailing_single_qubit": counts.trailing_single_qubit,
        "two_qubit_total": counts.two_qubit_total,
        "single_qubit_total": counts.single_qubit_total,
    }


@dataclass
class SweepResult:
    axis: str
    values: list
    root: Path
    clustering_table: list[tuple]  # (value, mean, std)
    path_table: list[tuple]
    histogram: tuple[np.ndarray, np.ndarray]
    retained_surface: np.ndarray  # (cycles + 1, n_values)
    files: list[str]


def _point_config(base: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    if axis == "length":
        count = max(len(base.flips), 1)
        return replace(base, length=int(value), flips=isolated_flips(int(value), count))
    if axis == "filling":
        return replace(base, flips=isolated_flips(base.length, int(value)))
    if axis in {f.name for f in fields(base)}:
        return replace(base, **{axis: value})
    raise ConfigError(axis, f"unknown sweep axis; presets: {SWEEP_AXES}")


def _run_point(doc: dict, root: str) -> str:
    config = ExperimentConfig.from_doc(doc)
    run_experiment(config, root=root)
    return config.config_hash


def _atomic_write(path: Path, write) -> None:
    tmp = path.with_name(path.name + ".tmp")
    write(tmp)
    os.replace(tmp, path)


def sweep(
    base: ExperimentConfig,
    axis: str,
    values,
    workers: int = 1,
    root=None,
) -> SweepResult:
    """Run one experiment per axis value and aggregate the measures.

    Points whose run directory already carries a manifest are reused,
    not recomputed, so an interrupted sweep resumes where it stopped.
    Aggregates: window-averaged clustering and path length per value,
    one node-strength histogram over all window cycles, and the
    retained-fraction surface (cycle x value).
    """
    values = list(values)
    if not values:
        raise ConfigError(axis, "empty sweep axis")
    root = Path(root if root is not None else base.out_dir)
    configs = [_point_config(base, axis, v) for v in values]

    pending = [
        c for c in configs if not (root / c.config_hash / "manifest.json").exists()
    ]
    if workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            list(pool.map(_run_point, [c.to_doc() for c in pending], [str(root)] * len(pending)))
    else:
        for c in pending:
            run_experiment(c, root=root)

    clustering_table = []
    path_table = []
    strengths_all = []
    retained_columns = []
    for value, c in zip(values, configs):
        point = root / c.config_hash
        measures = read_series_csv(point / "measures.csv")
        window_doc = json.loads((point / "window.json").read_text())
        retained_columns.append(read_series_csv(point / "retained.csv")["mean"])
        if window_doc["start"] is None:
            clustering_table.append((value, math.nan, math.nan))
            path_table.append((value, math.nan, math.nan))
            continue
        lo, hi = window_doc["start"], window_doc["end"]
        c_win = measures["C"][lo : hi + 1]
        ell_win = measures["ell"][lo : hi + 1]
        clustering_table.append((value, float(c_win.mean()), float(c_win.std())))
        path_table.append((value, float(ell_win.mean()), float(ell_win.std())))
        strengths = read_series_csv(point / "strengths.csv")
        for t in range(lo, hi + 1):
            row = [strengths[k][t] for k in strengths if k != "cycle"]
            strengths_all.extend(row)

    hist, edges = strength_histogram(strengths_all)
    depth = min(len(col) for col in retained_columns)
    surface = np.column_stack([col[:depth] for col in retained_columns])

    sweep_id = hashlib.sha256(
        json.dumps([base.config_hash, axis, values], default=str).encode()
    ).hexdigest()[:12]
    sweep_dir = root / f"sweep_{sweep_id}"
    sweep_dir.mkdir(parents=True, exist_ok=True)
    files = []

    def table_writer(name, header, rows):
        def write(tmp):
            _write_csv(tmp, header, rows, sweep_id)

        _atomic_write(sweep_dir / name, write)
        files.append(name)

    table_writer(
        f"clustering_vs_{axis}.csv",
        [axis, "C_mean", "C_std"],
        [[v, _fmt(m), _fmt(s)] for v, m, s in clustering_table],
    )
    table_writer(
        f"path_vs_{axis}.csv",
        [axis, "ell_mean", "ell_std"],
        [[v, _fmt(m), _fmt(s)] for v, m, s in path_table],
    )
    table_writer(
        "strength_histogram.csv",
        ["bin_lo", "bin_hi", "count"],
        [
            [_fmt(edges[k]), _fmt(edges[k + 1]), int(hist[k])]
            for k in range(len(hist))
        ],
    )
    table_writer(
        "retained_surface.csv",
        ["cycle"] + [str(v) for v in values],
        [[t] + [_fmt(x) for x in surface[t]] for t in range(depth)],
    )

    return SweepResult(
        axis=axis,
        values=values,
        root=sweep_dir,
        clustering_table=clustering_table,
        path_table=path_table,
        histogram=(hist, edges),
        retained_surface=surface,
        files=files,
    )
