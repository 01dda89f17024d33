"""Brute-force matching oracles for small graphs.

Exhaustive enumeration keeps these functions trustworthy as ground truth
for the scheduler and the decomposition; the link cap guards against
accidental use on instances where enumeration cannot finish.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .graph import Graph, Matching, check_queues, matching_weight

ENUMERATION_LINK_CAP = 24


def _matching_id_sets(graph: Graph) -> Iterator[tuple[int, ...]]:
    links = graph.links
    used = bytearray(graph.node_count)
    chosen: list[int] = []

    def extend(start: int) -> Iterator[tuple[int, ...]]:
        yield tuple(chosen)
        for eid in range(start, len(links)):
            u, v = links[eid]
            if used[u] or used[v]:
                continue
            used[u] = used[v] = 1
            chosen.append(eid)
            yield from extend(eid + 1)
            chosen.pop()
            used[u] = used[v] = 0

    return extend(0)


def enumerate_matchings(graph: Graph, cap: int = ENUMERATION_LINK_CAP) -> Iterator[Matching]:
    """Yield every matching of the graph exactly once (including the empty one)."""
    if graph.link_count > cap:
        raise ValueError(
            f"graph has {graph.link_count} links, enumeration is capped at {cap}"
        )
    for ids in _matching_id_sets(graph):
        yield Matching(graph, frozenset(ids))


@dataclass(frozen=True)
class OracleResult:
    optimal_matching: Matching
    optimal_weight: int


def max_weight_matching(graph: Graph, q: Sequence[int], cap: int = ENUMERATION_LINK_CAP) -> OracleResult:
    """Exhaustive maximum weight matching.

    Ties are broken toward the lexicographically smallest sorted id
    tuple, so the all-zero queue vector yields the empty matching.
    """
    if graph.link_count > cap:
        raise ValueError(
            f"graph has {graph.link_count} links, enumeration is capped at {cap}"
        )
    check_queues(graph, q)
    best_ids: tuple[int, ...] = ()
    best_weight = 0
    for ids in _matching_id_sets(graph):
        weight = sum(q[eid] for eid in ids)
        if weight > best_weight:
            best_weight = weight
            best_ids = ids
        elif weight == best_weight and ids < best_ids:
            best_ids = ids
    return OracleResult(Matching(graph, frozenset(best_ids)), int(best_weight))


def lyapunov_value(graph: Graph, q: Sequence[int], m: Matching, beta: float) -> float:
    """Sum of squared queues plus the squared shortfall below beta times optimal.

    A diagnostic potential: it shrinks as queues drain and as the
    schedule approaches the target weight fraction beta.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    check_queues(graph, q)
    opt = max_weight_matching(graph, q).optimal_weight
    shortfall = max(0.0, beta * opt - matching_weight(m, q))
    return float(sum(int(x) ** 2 for x in q)) + shortfall**2


def delta_lower_bound(p: float, n: int, k: int, max_degree: int) -> float:
    """Crude lower bound on the chance one control round reaches the weight target.

    Counts only the single most constrained outcome: every node's seed
    coin landing the required way and every growth choice picking the
    required neighbor, hence the exponent n.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly inside (0, 1), got {p}")
    if n < 1 or k < 1 or max_degree < 1:
        raise ValueError("n, k, and max_degree must all be at least 1")
    ratio = min(1.0, (p / (1.0 - p)) ** n)
    return ratio * ((1.0 - p) / (k * max_degree)) ** n
