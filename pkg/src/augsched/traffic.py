"""Per-link Bernoulli arrivals and queue evolution for the slotted model.

Queues live on links. Each slot adds the arrival indicator and subtracts
one unit from every scheduled link with work, so q stays nonnegative by
construction. Rate vectors are plain per-link probabilities; the grid
helper builds the structured load pattern used by the experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, check_queues

# (heavy horizontal, light horizontal, vertical) rates at lambda = 1
PRESETS: dict[str, tuple[float, float, float]] = {
    "fig5": (0.7, 0.1, 0.1),
    "fig6": (0.89, 0.1, 0.01),
}


@dataclass(frozen=True)
class ArrivalProcess:
    """Independent Bernoulli arrivals, one rate per link."""

    graph: Graph
    rates: tuple[float, ...]

    def __post_init__(self):
        if len(self.rates) != self.graph.link_count:
            raise ValueError(
                f"need {self.graph.link_count} rates, got {len(self.rates)}"
            )
        for eid, r in enumerate(self.rates):
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"rate {r} on link {eid} is outside [0, 1]")


def sample_arrivals(proc: ArrivalProcess, rng: np.random.Generator) -> np.ndarray:
    """One slot of arrivals: 0/1 per link."""
    return (rng.random(len(proc.rates)) < np.asarray(proc.rates)).astype(np.int64)


def step_queues(q: np.ndarray, arrivals: np.ndarray, service: np.ndarray) -> np.ndarray:
    """q' = q + arrivals - service; service must already respect empty queues."""
    out = q + arrivals - service
    assert (out >= 0).all(), "service drove a queue negative"
    return out


def scale_rates(rates: tuple[float, ...], lam: float) -> tuple[float, ...]:
    if lam < 0:
        raise ValueError(f"load scale must be nonnegative, got {lam}")
    scaled = tuple(r * lam for r in rates)
    for eid, r in enumerate(scaled):
        if r > 1.0:
            raise ValueError(f"scaled rate {r} on link {eid} exceeds 1")
    return scaled


def grid_load_vector(
    graph: Graph,
    cols: int,
    heavy_rate: float,
    light_rate: float,
    vertical_rate: float,
) -> tuple[float, ...]:
    """Structured rates for a row-major grid at unit load.

    Horizontal links alternate heavy/light along each row, starting
    heavy; every vertical link gets the vertical rate. Link direction is
    recovered from endpoint arithmetic, so the graph must be a row-major
    grid with the given column count.
    """
    rates = [0.0] * graph.link_count
    for eid, (u, v) in enumerate(graph.links):
        if v - u == cols:
            rates[eid] = vertical_rate
        elif v - u == 1 and u // cols == v // cols:
            rates[eid] = heavy_rate if u % cols % 2 == 0 else light_rate
        else:
            raise ValueError(
                f"link {eid} ({u},{v}) does not fit a {cols}-column grid"
            )
    return tuple(rates)


def make_arrivals(graph: Graph, rates: tuple[float, ...], lam: float) -> ArrivalProcess:
    """Arrival process at load lam times the unit-load rate vector."""
    return ArrivalProcess(graph, scale_rates(rates, lam))


def total_backlog(q: np.ndarray) -> int:
    return int(q.sum())


def zero_queues(graph: Graph) -> np.ndarray:
    q = np.zeros(graph.link_count, dtype=np.int64)
    check_queues(graph, q)
    return q
