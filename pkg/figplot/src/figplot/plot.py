"""Backlog-versus-load curves from scheduler metrics CSVs.

Consumes the delimited metrics format produced by the simulation CLI
(one row per load level, algorithm, and seed) and renders one curve per
scheduler configuration, averaging the backlog across seeds at each
load. Only the documented column schema is relied on; the producing
package is never imported.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

EXPECTED_HEADER = [
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


@dataclass(frozen=True)
class MetricsPoint:
    lam: float
    algorithm: str
    k: int
    p: float
    seed: int
    avg_total_backlog: float


@dataclass(frozen=True)
class Curve:
    label: str
    lambdas: tuple[float, ...]
    backlogs: tuple[float, ...]


def read_points(path: str) -> list[MetricsPoint]:
    """Parse one metrics CSV; the header must match the schema exactly."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EXPECTED_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        points = []
        for rec in reader:
            points.append(
                MetricsPoint(
                    lam=float(rec["lambda"]),
                    algorithm=rec["algorithm"],
                    k=int(rec["k"]),
                    p=float(rec["p"]),
                    seed=int(rec["seed"]),
                    avg_total_backlog=float(rec["avg_total_backlog"]),
                )
            )
        return points


def read_many(paths: list[str]) -> list[MetricsPoint]:
    points: list[MetricsPoint] = []
    for path in paths:
        points.extend(read_points(path))
    return points


def config_label(algorithm: str, k: int, p: float) -> str:
    """Legend text: scheduler parameters for aug rows, plain MM otherwise."""
    if algorithm == "mm":
        return "MM"
    return f"k={k}, p={p:g}"


def build_curves(
    points: list[MetricsPoint],
    lambda_min: float | None = None,
    lambda_max: float | None = None,
) -> list[Curve]:
    """Group points into per-configuration curves, seed-averaged per load.

    Curves come back with augmenting-scheduler configurations first
    (ordered by k then p), greedy baseline last.
    """
    kept = [
        pt
        for pt in points
        if (lambda_min is None or pt.lam >= lambda_min)
        and (lambda_max is None or pt.lam <= lambda_max)
    ]
    if not kept:
        raise ValueError("no rows left after the load range filter")
    grouped: dict[tuple[str, int, float], dict[float, list[float]]] = {}
    for pt in kept:
        key = (pt.algorithm, pt.k, pt.p)
        grouped.setdefault(key, {}).setdefault(pt.lam, []).append(pt.avg_total_backlog)

    def sort_key(key):
        algorithm, k, p = key
        return (1 if algorithm == "mm" else 0, algorithm, k, p)

    curves = []
    for key in sorted(grouped, key=sort_key):
        algorithm, k, p = key
        by_lam = grouped[key]
        lams = tuple(sorted(by_lam))
        means = tuple(sum(by_lam[lam]) / len(by_lam[lam]) for lam in lams)
        curves.append(Curve(label=config_label(algorithm, k, p), lambdas=lams, backlogs=means))
    return curves


def render_backlog_figure(curves: list[Curve], out_path: str) -> None:
    """Render the curves to a raster image file."""
    if not curves:
        raise ValueError("nothing to plot")
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    try:
        for curve in curves:
            ax.plot(curve.lambdas, curve.backlogs, marker="o", label=curve.label)
        ax.set_xlabel("offered load")
        ax.set_ylabel("average total backlog (packets)")
        ax.grid(True, alpha=0.4)
        ax.legend()
        fig.tight_layout()
        fig.savefig(out_path, dpi=150)
    finally:
        plt.close(fig)
