"""Shared builders and a scripted rng for deterministic protocol replays."""

from __future__ import annotations

import random

from augsched import Graph, Matching


class ScriptedRng:
    """Stand-in for random.Random that plays back queued values.

    Each method pops from its own queue and checks the value is legal for
    the requested range, so a test fails loudly the moment the code under
    test asks for randomness the script did not anticipate.
    """

    def __init__(self, randoms=(), randints=(), randranges=()):
        self.randoms = list(randoms)
        self.randints = list(randints)
        self.randranges = list(randranges)

    def random(self):
        assert self.randoms, "unexpected random() call"
        return self.randoms.pop(0)

    def randint(self, a, b):
        assert self.randints, "unexpected randint() call"
        value = self.randints.pop(0)
        assert a <= value <= b, f"scripted randint {value} outside [{a}, {b}]"
        return value

    def randrange(self, n):
        assert self.randranges, "unexpected randrange() call"
        value = self.randranges.pop(0)
        assert 0 <= value < n, f"scripted randrange {value} outside [0, {n})"
        return value

    def assert_exhausted(self):
        assert not self.randoms, f"{len(self.randoms)} random() values unused"
        assert not self.randints, f"{len(self.randints)} randint() values unused"
        assert not self.randranges, f"{len(self.randranges)} randrange() values unused"


def single_seed_example():
    """Tree where one seed grows a four-link alternating path and switches.

    Returns (graph, base matching, queues). Node 0 seeds, walks
    0-1-2-3-4 alternating base/non-base/base/non-base, and stops at node
    4 which has no matched link. Gain is -2+4-1+5 = 6.
    """
    graph = Graph(7, [(0, 1), (1, 2), (1, 5), (2, 3), (3, 4), (3, 6)])
    base = Matching(graph, frozenset({0, 3}))
    q = [2, 4, 0, 1, 5, 0]
    return graph, base, q


def contended_example():
    """Four simultaneous seeds: one cycle closure, one path, one collision pair.

    Returns (graph, base matching, queues). Seeds 0, 4, 9, 11 with
    intended size 2 each. Seed 0 wraps the 4-cycle (its final request
    hits its own seed and the terminus then closes the cycle), seed 4
    grows the full 4-link path, and seeds 9 and 11 collide at node 13 in
    phase 2, leaving both with a single dangling matched link.
    """
    links = [
        (0, 1), (1, 2), (2, 3), (3, 0),          # 4-cycle
        (4, 5), (5, 6), (6, 7), (7, 8),          # 5-node path
        (9, 10), (10, 13), (11, 12), (12, 13),   # two paths meeting at 13
    ]
    graph = Graph(14, links)
    base = Matching(graph, frozenset({0, 2, 5, 7, 8, 10}))
    q = [1, 4, 1, 3, 5, 2, 4, 1, 2, 7, 3, 9]
    return graph, base, q


def random_connected_graph(rng: random.Random, max_nodes: int = 9) -> Graph:
    """Random spanning tree plus a few extra links; stays under the oracle cap."""
    n = rng.randint(2, max_nodes)
    link_set = set()
    for i in range(1, n):
        link_set.add((rng.randrange(i), i))
    for _ in range(rng.randint(0, n)):
        a, b = rng.sample(range(n), 2)
        link_set.add((min(a, b), max(a, b)))
    return Graph(n, sorted(link_set))


def random_matching(graph: Graph, rng: random.Random) -> Matching:
    """Random (not necessarily maximal) matching via a shuffled greedy pass."""
    used = set()
    members = []
    ids = list(range(graph.link_count))
    rng.shuffle(ids)
    for eid in ids:
        u, v = graph.links[eid]
        if u in used or v in used:
            continue
        if rng.random() < 0.5:
            used.add(u)
            used.add(v)
            members.append(eid)
    return Matching(graph, frozenset(members))


def random_queues(graph: Graph, rng: random.Random, hi: int = 20) -> list[int]:
    return [rng.randint(0, hi) for _ in range(graph.link_count)]
