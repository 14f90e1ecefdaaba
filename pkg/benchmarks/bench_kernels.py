"""Timing comparison between the compiled kernels and the numpy fallback.

The backend is chosen once at import time, so each backend runs in its own
subprocess (QCANET_PURE_PYTHON=1 forces the fallback). The parent collects
the JSON reports and prints per-workload wall times with the speedup.

Usage:
    python3 benchmarks/bench_kernels.py [--lengths 11,15,19] [--repeats 5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _time_best(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run_workloads(lengths, repeats: int) -> dict:
    import numpy as np

    from qcanet import kernels
    from qcanet.evolve import apply_cycle, evolve
    from qcanet.rules import goldilocks_rule
    from qcanet.sampling import NoiseModel, noisy_evolve
    from qcanet.states import basis_state, central_flip

    rule = goldilocks_rule()
    results = {}

    for length in lengths:
        state = basis_state(central_flip(length))
        results[f"cycle L={length}"] = _time_best(
            lambda: apply_cycle(state, rule, length), repeats
        )

    for length in lengths:
        rng = np.random.default_rng(0)
        state = rng.standard_normal(2**length) + 1j * rng.standard_normal(2**length)
        state /= np.linalg.norm(state)
        unifs = rng.random(length)
        # copy first: the sweep mutates the state in place
        results[f"damping L={length}"] = _time_best(
            lambda: kernels.damping_sweep(state.copy(), length, 0.01, unifs), repeats
        )

    results["evolve L=13 t=20"] = _time_best(
        lambda: evolve(central_flip(13), rule, 20), max(1, repeats // 2)
    )
    results["noisy L=9 t=5 x20"] = _time_best(
        lambda: noisy_evolve(
            central_flip(9), 5, NoiseModel.weber(), n_shots=200, n_trajectories=20, seed=0
        ),
        max(1, repeats // 2),
    )
    return {"backend": kernels.BACKEND, "results": results}


def run_child(pure_python: bool, args) -> dict:
    env = dict(os.environ)
    if pure_python:
        env["QCANET_PURE_PYTHON"] = "1"
    else:
        env.pop("QCANET_PURE_PYTHON", None)
    argv = [
        sys.executable,
        os.path.abspath(__file__),
        "--json",
        "--lengths", ",".join(str(n) for n in args.lengths),
        "--repeats", str(args.repeats),
    ]
    out = subprocess.run(argv, env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--lengths",
        type=lambda s: [int(x) for x in s.split(",")],
        default=[11, 15, 19],
        help="chain lengths for the cycle and damping workloads",
    )
    parser.add_argument("--repeats", type=int, default=5, help="repeats per timing (best-of)")
    parser.add_argument(
        "--json", action="store_true", help="run the workloads here and print JSON"
    )
    args = parser.parse_args()

    if args.json:
        print(json.dumps(run_workloads(args.lengths, args.repeats)))
        return 0

    fast = run_child(pure_python=False, args=args)
    slow = run_child(pure_python=True, args=args)
    if fast["backend"] == slow["backend"]:
        print("compiled extension unavailable; both runs used the numpy fallback")

    width = max(len(name) for name in fast["results"])
    print(f"{'workload':<{width}}  {fast['backend']:>10}  {slow['backend']:>10}  {'speedup':>8}")
    for name, t_fast in fast["results"].items():
        t_slow = slow["results"][name]
        print(f"{name:<{width}}  {t_fast:>9.2e}s  {t_slow:>9.2e}s  {t_slow / t_fast:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
