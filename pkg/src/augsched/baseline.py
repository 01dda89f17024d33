"""Randomized greedy maximal matching over links with pending work."""

from __future__ import annotations

import random
from typing import Sequence

from .graph import Graph, Matching


def maximal_matching(graph: Graph, q: Sequence[int], rng: random.Random) -> Matching:
    """Greedy maximal matching on the positive-queue links, in random order.

    Links with empty queues are ignored entirely, so the result is
    maximal only within the subgraph that has work to send.
    """
    order = [eid for eid in range(graph.link_count) if q[eid] > 0]
    rng.shuffle(order)
    used = [False] * graph.node_count
    picked = []
    for eid in order:
        u, v = graph.links[eid]
        if used[u] or used[v]:
            continue
        used[u] = True
        used[v] = True
        picked.append(eid)
    return Matching(graph, frozenset(picked))
