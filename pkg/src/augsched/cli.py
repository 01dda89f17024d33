"""Command line front end for the scheduling experiments.

Runs one algorithm over a list of load levels on a grid or file graph,
appends one metrics row per load to the output CSV, and can dump a
message trace of one recorded control round.
"""

from __future__ import annotations

import argparse
import sys

from .graph import Graph, load_graph
from .harness import (
    ExperimentConfig,
    build_grid,
    capture_trace,
    run_simulation,
    uniform_load_vector,
    write_metrics,
)
from .traffic import PRESETS, grid_load_vector


def _parse_graph(spec: str) -> tuple[Graph, int | None]:
    """grid:RxC builds a grid (returning its column count), file:PATH loads a file."""
    if spec.startswith("grid:"):
        dims = spec[len("grid:") :]
        parts = dims.lower().split("x")
        if len(parts) != 2:
            raise ValueError(f"grid spec {spec!r} must look like grid:11x11")
        try:
            rows, cols = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"grid spec {spec!r} must use integer dimensions") from None
        return build_grid(rows, cols), cols
    if spec.startswith("file:"):
        return load_graph(spec[len("file:") :]), None
    raise ValueError(f"graph spec {spec!r} must start with grid: or file:")


def _parse_lambdas(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ValueError(f"load list {text!r} must be comma separated numbers") from None
    if not values:
        raise ValueError("load list is empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="augsched",
        description="Simulate queue backlogs under the augmenting scheduler or the greedy baseline.",
    )
    parser.add_argument("--graph", required=True, help="grid:RxC or file:PATH")
    parser.add_argument("--algo", choices=["aug", "mm"], default="aug")
    parser.add_argument("--k", type=int, default=2, help="augmentation size bound")
    parser.add_argument("--p", type=float, default=0.2, help="seed probability")
    parser.add_argument(
        "--preset",
        choices=sorted(PRESETS),
        help="structured grid load pattern; omit for uniform per-link rates",
    )
    parser.add_argument(
        "--lambda",
        dest="lambdas",
        required=True,
        help="comma separated load levels, e.g. 0.8,0.9,0.95",
    )
    parser.add_argument("--slots", type=int, default=100_000, help="slots per load level")
    parser.add_argument("--warmup", type=int, default=None, help="slots excluded from averages")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, help="metrics CSV, appended to if present")
    parser.add_argument("--trace", default=None, help="write one recorded control round here")
    parser.add_argument("--slope-threshold", type=float, default=0.01)
    parser.add_argument("--phase-time", type=float, default=0.0)
    parser.add_argument("--cycle-time", type=float, default=1.0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        graph, cols = _parse_graph(args.graph)
        if args.preset is not None:
            if cols is None:
                raise ValueError("presets describe grid loads; use --graph grid:RxC")
            heavy, light, vertical = PRESETS[args.preset]
            rates = grid_load_vector(graph, cols, heavy, light, vertical)
        else:
            rates = uniform_load_vector(graph)
        lambdas = _parse_lambdas(args.lambdas)
        if args.trace is not None and args.algo != "aug":
            raise ValueError("traces only exist for the augmentation scheduler")
        cfg = ExperimentConfig(
            graph=graph,
            rates=rates,
            algo=args.algo,
            lambdas=lambdas,
            horizon=args.slots,
            k=args.k,
            p=args.p,
            warmup=args.warmup,
            seed=args.seed,
            slope_threshold=args.slope_threshold,
            phase_time=args.phase_time,
            cycle_time=args.cycle_time,
        )
        rows = []
        for lam in lambdas:
            row, _ = run_simulation(cfg, lam, args.seed)
            rows.append(row)
            print(
                f"lambda={lam} algo={args.algo} avg_backlog={row.avg_total_backlog:.2f} "
                f"slope={row.backlog_slope:.4f} stable={str(row.stable).lower()}"
            )
        write_metrics(args.out, rows)
        if args.trace is not None:
            with open(args.trace, "w") as fh:
                fh.write(capture_trace(cfg, lambdas[0], args.seed))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
