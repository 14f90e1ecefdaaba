"""Command-line harness around the emulation and analysis pipeline.

Each subcommand is a thin wrapper over one library entry point and
composes through files: tabular data moves as CSV with header rows,
structured results as JSON documents printed to stdout (and optionally
written with --out).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chains import DeviceMetrics, chain_cost, chain_select
from .evolve import evolve
from .experiment import (
    ConfigError,
    ExperimentConfig,
    compile_stats,
    read_series_csv,
    resolve_noise,
    run_experiment,
    sweep,
)
from .mutualinfo import shannon_mi
from .networks import (
    clustering,
    coherence_window,
    edge_list,
    node_strengths,
    path_length,
    write_graphml,
)
from .postselect import filter_counts
from .rules import RuleSpec
from .sampling import CountsTable, noisy_evolve, sample_counts
from .states import flip_string, isolated_flips


def _sites(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def _axis_values(text: str):
    values = []
    for token in text.split(","):
        token = token.strip()
        try:
            values.append(int(token))
        except ValueError:
            try:
                values.append(float(token))
            except ValueError:
                values.append(token)
    return values


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, default=str)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        return ExperimentConfig.from_json(args.config)
    if args.length is None:
        raise ConfigError("length", "give --config or --length")
    if args.flips is not None:
        flips = args.flips
    else:
        flips = isolated_flips(args.length, args.filling)
    seeds = args.seeds if args.seeds is not None else (args.seed,)
    return ExperimentConfig(
        length=args.length,
        flips=flips,
        rule_number=args.rule,
        activation=args.activation,
        t_max=args.cycles,
        network_t_max=args.network_cycles,
        n_shots=args.shots,
        n_trajectories=args.trajectories,
        seeds=seeds,
        noise=args.noise,
        baseline_mode=args.baseline,
        parasitic_phi=args.parasitic_phi,
        compensate=not args.no_compensation,
        out_dir=args.out,
    )


def _add_initial_args(parser) -> None:
    parser.add_argument("-L", "--length", type=int, default=None, help="chain length")
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--filling",
        type=int,
        default=1,
        help="number of equally spaced initial |1> flips (default 1)",
    )
    group.add_argument(
        "--flips", type=_sites, default=None, help="explicit 1-based flip sites, comma-separated"
    )
    parser.add_argument("--rule", type=int, default=6, help="totalistic rule number")
    parser.add_argument("--activation", default="H", help="activation unitary name")


def _add_experiment_args(parser) -> None:
    _add_initial_args(parser)
    parser.add_argument("--config", default=None, help="experiment config JSON (overrides flags)")
    parser.add_argument("--cycles", type=int, default=30, help="cycles to evolve")
    parser.add_argument(
        "--network-cycles", type=int, default=19, help="last cycle with network analysis"
    )
    parser.add_argument("--shots", type=int, default=100_000, help="measurement shots per cycle")
    parser.add_argument(
        "--trajectories", type=int, default=100, help="Monte-Carlo trajectories per seed"
    )
    parser.add_argument(
        "--noise", default=None, help="noise model: 'weber' or a NoiseModel JSON path"
    )
    parser.add_argument(
        "--seeds", type=_sites, default=None, help="comma-separated seeds (default: --seed)"
    )
    parser.add_argument(
        "--baseline", choices=("exact", "sampled"), default="exact", help="baseline mode"
    )
    parser.add_argument(
        "--parasitic-phi", type=float, default=0.0, help="parasitic cphase angle per coupler"
    )
    parser.add_argument(
        "--no-compensation", action="store_true", help="skip parasitic-phase compensation"
    )


def cmd_emulate(args) -> int:
    config = _config_from_args(args)
    result = run_experiment(config, root=args.out)
    _emit(
        {
            "config_hash": result.config_hash,
            "directory": str(result.root),
            "initial": config.initial,
            "window": {"start": result.window.start, "end": result.window.end},
            "baseline_clustering": result.baseline.clustering,
            "files": sorted(result.files),
        },
        None,
    )
    return 0


def cmd_sample(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    flips = args.flips if args.flips is not None else isolated_flips(args.length, args.filling)
    initial = flip_string(args.length, flips)
    rule = RuleSpec.from_number(args.rule, args.activation)
    model = resolve_noise(args.noise)
    written = []
    if model is None:
        traj = evolve(initial, rule, args.cycles, record_states=True)
        for t, state in enumerate(traj.states):
            table = sample_counts(state, args.shots, seed=args.seed + t)
            path = out / f"counts_cycle{t}.csv"
            table.to_csv(path)
            written.append(str(path))
    else:
        run = noisy_evolve(
            initial,
            args.cycles,
            model,
            n_shots=args.shots,
            n_trajectories=args.trajectories,
            seed=args.seed,
            rule=rule,
        )
        for t, table in enumerate(run.counts_per_cycle):
            path = out / f"counts_cycle{t}.csv"
            table.to_csv(path)
            written.append(str(path))
    _emit({"initial": initial, "cycles": args.cycles, "files": written}, None)
    return 0


def cmd_postselect(args) -> int:
    counts = CountsTable.from_csv(args.counts)
    result = filter_counts(counts, args.reference)
    kept_path = args.kept or str(Path(args.counts).with_suffix(".kept.csv"))
    result.kept.to_csv(kept_path)
    _emit(
        {
            "reference": args.reference,
            "retained_fraction": result.retained_fraction,
            "kept_shots": result.kept_shots,
            "total_shots": result.total_shots,
            "insufficient": result.insufficient(),
            "kept_file": kept_path,
        },
        None,
    )
    return 0


def cmd_analyze(args) -> int:
    counts = CountsTable.from_csv(args.counts)
    if args.reference:
        counts = filter_counts(counts, args.reference).kept
        if counts.total == 0:
            print("no shots survive post-selection", file=sys.stderr)
            return 2
    net = shannon_mi(counts)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    net.to_csv(out / "mi.csv")
    with open(out / "edges.csv", "w", newline="") as fh:
        fh.write("i,j,weight\n")
        for i, j, w in edge_list(net):
            fh.write(f"{i},{j},{w:.12g}\n")
    write_graphml(net, out / "network.graphml")
    ell = path_length(net)
    _emit(
        {
            "length": net.length,
            "clustering": clustering(net),
            "path_length": ell.value if ell.finite else "inf",
            "path_reachable_mean": ell.reachable_mean,
            "unreachable_pairs": ell.unreachable_pairs,
            "strengths": [float(g) for g in node_strengths(net)],
            "files": [str(out / n) for n in ("mi.csv", "edges.csv", "network.graphml")],
        },
        out / "measures.json",
    )
    return 0


def cmd_window(args) -> int:
    series = read_series_csv(args.measures)
    if args.baseline_value is not None:
        baseline = [args.baseline_value] * len(series["C"])
    else:
        baseline = list(read_series_csv(args.baseline)["C"])
    window = coherence_window(series["C"], baseline)
    inside = (
        []
        if window.empty
        else [int(t) for t in series["cycle"][window.start : window.end + 1]]
    )
    doc = {"start": window.start, "end": window.end, "cycles": inside}
    if not window.empty:
        c_win = series["C"][window.start : window.end + 1]
        doc["window_mean_C"] = float(c_win.mean())
    _emit(doc, args.report)
    return 0


def cmd_sweep(args) -> int:
    base = ExperimentConfig.from_json(args.config)
    result = sweep(base, args.axis, args.values, workers=args.workers, root=args.out)
    _emit(
        {
            "axis": result.axis,
            "values": result.values,
            "directory": str(result.root),
            "clustering": [(v, m, s) for v, m, s in result.clustering_table],
            "path_length": [(v, m, s) for v, m, s in result.path_table],
            "files": result.files,
        },
        None,
    )
    return 0


def cmd_compile_stats(args) -> int:
    rule = RuleSpec.from_number(args.rule, args.activation)
    report = compile_stats(
        args.length,
        args.cycles,
        rule=rule,
        parasitic_phi=args.parasitic_phi,
        compensate=not args.no_compensation,
    )
    _emit(report, args.report)
    return 0


def cmd_chain_pick(args) -> int:
    if args.device:
        metrics = DeviceMetrics.from_json(args.device)
    else:
        rows, cols = (int(x) for x in args.grid.split("x"))
        metrics = DeviceMetrics.uniform_grid(rows, cols)
    chains = chain_select(metrics, args.length, n_chains=args.count)
    _emit(
        {
            "length": args.length,
            "chains": [
                {"path": [list(q) for q in chain], "cost": chain_cost(metrics, chain)}
                for chain in chains
            ],
        },
        args.report,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcanet",
        description="Goldilocks QCA emulation, compilation, sampling, and network analysis",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--out", default="runs", help="output directory")
    common.add_argument("--workers", type=int, default=1, help="parallel sweep workers")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("emulate", parents=[common], help="run one full experiment bundle")
    _add_experiment_args(p)
    p.set_defaults(func=cmd_emulate)

    p = sub.add_parser("sample", parents=[common], help="write per-cycle measurement counts")
    _add_initial_args(p)
    p.add_argument("--cycles", type=int, default=10)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--trajectories", type=int, default=100)
    p.add_argument("--noise", default=None, help="'weber' or a NoiseModel JSON path")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("postselect", parents=[common], help="filter counts to the reference sector")
    p.add_argument("counts", help="counts CSV")
    p.add_argument("--reference", required=True, help="initial bitstring")
    p.add_argument("--kept", default=None, help="output CSV for surviving counts")
    p.set_defaults(func=cmd_postselect)

    p = sub.add_parser("analyze", parents=[common], help="MI network and measures from counts")
    p.add_argument("counts", help="counts CSV")
    p.add_argument("--reference", default=None, help="post-select to this sector first")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("window", parents=[common], help="coherence window of a measures series")
    p.add_argument("measures", help="measures CSV with cycle and C columns")
    p.add_argument("--baseline-value", type=float, default=None, help="constant baseline C")
    p.add_argument("--baseline", default=None, help="baseline measures CSV")
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("sweep", parents=[common], help="run and aggregate an axis of experiments")
    p.add_argument("--config", required=True, help="base experiment config JSON")
    p.add_argument("--axis", required=True, help="'length', 'filling', or a config field")
    p.add_argument("--values", required=True, type=_axis_values, help="comma-separated values")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compile-stats", parents=[common], help="gate-volume report")
    p.add_argument("-L", "--length", type=int, required=True)
    p.add_argument("--cycles", type=int, required=True)
    p.add_argument("--rule", type=int, default=6)
    p.add_argument("--activation", default="H")
    p.add_argument("--parasitic-phi", type=float, default=0.0)
    p.add_argument("--no-compensation", action="store_true")
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_compile_stats)

    p = sub.add_parser("chain-pick", parents=[common], help="select low-error qubit chains")
    p.add_argument("-L", "--length", type=int, required=True)
    p.add_argument("--device", default=None, help="device metrics JSON")
    p.add_argument("--grid", default="2x12", help="uniform RxC grid when no device file")
    p.add_argument("--count", type=int, default=1, help="number of chains")
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_chain_pick)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
