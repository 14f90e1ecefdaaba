"""Goldilocks QCA emulation, compilation, and network analysis."""

from .rules import RuleSpec, goldilocks_rule
from .states import basis_state, central_flip, flip_string, isolated_flips, population
from .evolve import Trajectory, apply_cycle, cycle_unitary, evolve
from .invariant import domain_walls, invariant_eigenvalue, sector_dimension
from .gates import Gate
from .decompose import decompose_ch, decompose_cphase, decompose_cz
from .circuit import (
    CompiledCircuit,
    Moment,
    circuit_unitary,
    gate_counts,
    simulate_circuit,
)
from .compiler import Calibration, compile_circuit
from .chains import DeviceMetrics, InfeasibleChainError, chain_cost, chain_select
from .sampling import (
    CountsTable,
    NoiseModel,
    NoisyRun,
    ProbTable,
    apply_readout_error,
    noisy_evolve,
    sample_counts,
)
from .postselect import FilterResult, detectability, filter_counts, retained_series
from .mutualinfo import (
    MINetwork,
    entropy_bits,
    frobenius_rel_distance,
    reduced_density_matrix,
    shannon_mi,
    von_neumann_mi,
)
from .networks import (
    Baseline,
    CoherenceWindow,
    PathLength,
    clustering,
    coherence_window,
    edge_list,
    node_strengths,
    path_length,
    random_baseline,
    strength_histogram,
    write_graphml,
)
from .experiment import (
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    compile_stats,
    resolve_noise,
    run_experiment,
    sweep,
)

__all__ = [
    "RuleSpec",
    "goldilocks_rule",
    "basis_state",
    "central_flip",
    "flip_string",
    "isolated_flips",
    "population",
    "Trajectory",
    "apply_cycle",
    "cycle_unitary",
    "evolve",
    "domain_walls",
    "invariant_eigenvalue",
    "sector_dimension",
    "Gate",
    "decompose_ch",
    "decompose_cphase",
    "decompose_cz",
    "CompiledCircuit",
    "Moment",
    "circuit_unitary",
    "gate_counts",
    "simulate_circuit",
    "Calibration",
    "compile_circuit",
    "DeviceMetrics",
    "InfeasibleChainError",
    "chain_cost",
    "chain_select",
    "CountsTable",
    "NoiseModel",
    "NoisyRun",
    "ProbTable",
    "apply_readout_error",
    "noisy_evolve",
    "sample_counts",
    "FilterResult",
    "detectability",
    "filter_counts",
    "retained_series",
    "MINetwork",
    "entropy_bits",
    "frobenius_rel_distance",
    "reduced_density_matrix",
    "shannon_mi",
    "von_neumann_mi",
    "Baseline",
    "CoherenceWindow",
    "PathLength",
    "clustering",
    "coherence_window",
    "edge_list",
    "node_strengths",
    "path_length",
    "random_baseline",
    "strength_histogram",
    "write_graphml",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentResult",
    "compile_stats",
    "resolve_noise",
    "run_experiment",
    "sweep",
]
