"""Slotted simulation loop, stability metrics, and the delimited output.

One simulation runs a single (load, algorithm, seed) cell: every slot
recomputes the schedule from the current queues, serves scheduled links
that have work, then applies fresh arrivals. The augmentation scheduler
carries its unmasked schedule into the next slot as the base matching;
masking affects only the service vector.
"""

from __future__ import annotations

import csv
import os
import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .baseline import maximal_matching
from .graph import Graph, Matching
from .protocol import mask_zero_queues, run_control_part, serialize_trace
from .traffic import (
    grid_load_vector,
    make_arrivals,
    sample_arrivals,
    step_queues,
    zero_queues,
)

CSV_HEADER = [
    "lambda",
    "algorithm",
    "k",
    "p",
    "seed",
    "horizon",
    "avg_total_backlog",
    "final_total_backlog",
    "backlog_slope",
    "stable",
    "control_overhead_fraction",
]

ALGORITHMS = ("aug", "mm")


def build_grid(rows: int, cols: int) -> Graph:
    """Row-major grid: node (r, c) is r*cols + c, right links before down links."""
    if rows < 1 or cols < 1:
        raise ValueError(f"grid needs positive dimensions, got {rows}x{cols}")
    links = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                links.append((v, v + 1))
            if r + 1 < rows:
                links.append((v, v + cols))
    return Graph(rows * cols, links)


def uniform_load_vector(graph: Graph) -> tuple[float, ...]:
    """Unit load split evenly over all links."""
    if graph.link_count == 0:
        raise ValueError("graph has no links to load")
    share = 1.0 / graph.link_count
    return (share,) * graph.link_count


def overhead_fraction(k: int, phase_time: float, cycle_time: float) -> float:
    """Fraction of a slot spent on the 4k+2 control phases."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if phase_time < 0:
        raise ValueError(f"phase time must be nonnegative, got {phase_time}")
    if cycle_time <= 0:
        raise ValueError(f"cycle time must be positive, got {cycle_time}")
    spent = (4 * k + 2) * phase_time
    if spent > cycle_time:
        raise ValueError(
            f"control phases need {spent} time units but the slot only has {cycle_time}"
        )
    return spent / cycle_time


def classify_stability(series: np.ndarray, threshold: float) -> tuple[bool, float]:
    """Fit a line to the final half of the backlog series.

    Returns (stable, slope in packets per slot); stable means the slope
    stays at or below the threshold.
    """
    series = np.asarray(series, dtype=np.float64)
    tail = series[len(series) // 2 :]
    if len(tail) < 4:
        raise ValueError(f"series too short to classify, tail has {len(tail)} points")
    slope = float(np.polyfit(np.arange(len(tail)), tail, 1)[0])
    return slope <= threshold, slope


@dataclass(frozen=True)
class MetricsRow:
    lam: float
    algorithm: str
    k: int
    p: float
    seed: int
    horizon: int
    avg_total_backlog: float
    final_total_backlog: int
    backlog_slope: float
    stable: bool
    control_overhead_fraction: float


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to sweep one algorithm over a list of loads."""

    graph: Graph
    rates: tuple[float, ...]  # per-link arrival rates at unit load
    algo: str
    lambdas: tuple[float, ...]
    horizon: int
    k: int = 2
    p: float = 0.2
    warmup: int | None = None  # default: first fifth of the horizon
    seed: int = 0
    slope_threshold: float = 0.01
    phase_time: float = 0.0
    cycle_time: float = 1.0

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}, expected one of {ALGORITHMS}")
        if not self.lambdas:
            raise ValueError("need at least one load value")
        for lam in self.lambdas:
            if lam <= 0:
                raise ValueError(f"load values must be positive, got {lam}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be at least 1, got {self.horizon}")
        if self.warmup is not None and not 0 <= self.warmup < self.horizon:
            raise ValueError(f"warmup {self.warmup} must lie inside the horizon")
        if self.algo == "aug":
            if self.k < 1:
                raise ValueError(f"k must be at least 1, got {self.k}")
            if not 0.0 < self.p < 1.0:
                raise ValueError(f"p must lie strictly inside (0, 1), got {self.p}")
        overhead_fraction(max(self.k, 1), self.phase_time, self.cycle_time)

    def effective_warmup(self) -> int:
        return self.horizon // 5 if self.warmup is None else self.warmup


def _run_loop(
    cfg: ExperimentConfig, lam: float, seed: int
) -> tuple[np.ndarray, np.ndarray, Matching, random.Random]:
    """Drive the slot loop; returns (series, final queues, final schedule, rng)."""
    graph = cfg.graph
    proc = make_arrivals(graph, cfg.rates, lam)
    arrival_rng = np.random.default_rng(seed)
    sched_rng = random.Random(seed)

    q = zero_queues(graph)
    schedule = Matching(graph, frozenset())
    series = np.zeros(cfg.horizon, dtype=np.int64)

    for slot in range(cfg.horizon):
        if cfg.algo == "aug":
            outcome = run_control_part(
                graph, q, schedule, cfg.k, cfg.p, sched_rng,
                record_trace=False, validate=False,
            )
            schedule = outcome.new_matching
        else:
            schedule = maximal_matching(graph, q, sched_rng)
        service = mask_zero_queues(schedule, q)
        arrivals = sample_arrivals(proc, arrival_rng)
        q = step_queues(q, arrivals, service)
        series[slot] = q.sum()

    return series, q, schedule, sched_rng


def run_simulation(
    cfg: ExperimentConfig, lam: float, seed: int
) -> tuple[MetricsRow, np.ndarray]:
    """Simulate one load level and return its metrics row plus the backlog series."""
    series, _, _, _ = _run_loop(cfg, lam, seed)
    warmup = cfg.effective_warmup()
    stable, slope = classify_stability(series, cfg.slope_threshold)
    is_aug = cfg.algo == "aug"
    row = MetricsRow(
        lam=lam,
        algorithm=cfg.algo,
        k=cfg.k if is_aug else 0,
        p=cfg.p if is_aug else 0.0,
        seed=seed,
        horizon=cfg.horizon,
        avg_total_backlog=float(series[warmup:].mean()),
        final_total_backlog=int(series[-1]),
        backlog_slope=slope,
        stable=stable,
        control_overhead_fraction=(
            overhead_fraction(cfg.k, cfg.phase_time, cfg.cycle_time) if is_aug else 0.0
        ),
    )
    return row, series


def run_sweep(cfg: ExperimentConfig) -> list[MetricsRow]:
    """One row per load level, all with the config's seed."""
    return [run_simulation(cfg, lam, cfg.seed)[0] for lam in cfg.lambdas]


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_metrics(path: str, rows: Iterable[MetricsRow]) -> None:
    """Append rows, emitting the header only when the file starts empty.

    Output is byte-stable for identical inputs: floats use repr, booleans
    are lowercase, rows end with a bare newline.
    """
    need_header = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        if need_header:
            fh.write(",".join(CSV_HEADER) + "\n")
        for row in rows:
            values = [
                row.lam, row.algorithm, row.k, row.p, row.seed, row.horizon,
                row.avg_total_backlog, row.final_total_backlog,
                row.backlog_slope, row.stable, row.control_overhead_fraction,
            ]
            fh.write(",".join(_format_value(v) for v in values) + "\n")


def read_metrics(path: str) -> list[MetricsRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected header {reader.fieldnames} in {path}")
        rows = []
        for rec in reader:
            rows.append(
                MetricsRow(
                    lam=float(rec["lambda"]),
                    algorithm=rec["algorithm"],
                    k=int(rec["k"]),
                    p=float(rec["p"]),
                    seed=int(rec["seed"]),
                    horizon=int(rec["horizon"]),
                    avg_total_backlog=float(rec["avg_total_backlog"]),
                    final_total_backlog=int(rec["final_total_backlog"]),
                    backlog_slope=float(rec["backlog_slope"]),
                    stable=rec["stable"] == "true",
                    control_overhead_fraction=float(rec["control_overhead_fraction"]),
                )
            )
        return rows


def grid_preset_rates(graph: Graph, cols: int, preset_rates: tuple[float, float, float]) -> tuple[float, ...]:
    """Unit-load rate vector for a grid experiment preset."""
    heavy, light, vertical = preset_rates
    return grid_load_vector(graph, cols, heavy, light, vertical)


def capture_trace(cfg: ExperimentConfig, lam: float, seed: int) -> str:
    """Serialize one fully recorded control round.

    Replays the simulation for the given cell, then runs a single extra
    recorded round against the final queues and schedule, so the trace
    reflects a state the experiment actually reached.
    """
    if cfg.algo != "aug":
        raise ValueError("traces only exist for the augmentation scheduler")
    _, q, schedule, sched_rng = _run_loop(cfg, lam, seed)
    outcome = run_control_part(
        cfg.graph, q, schedule, cfg.k, cfg.p, sched_rng,
        record_trace=True, validate=True,
    )
    return serialize_trace(outcome.trace)
