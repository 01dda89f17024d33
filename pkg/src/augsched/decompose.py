"""Decomposing the gap to the optimum into small disjoint augmentations.

The symmetric difference between the current matching and a maximum
weight matching splits into alternating paths and even cycles. Cutting
each component at well chosen links leaves pieces of size at most k
whose combined gain carries a guaranteed fraction of the optimum: at
least k/(k+1) of the component's optimal-side weight for paths and
k/(k+2) for cycles, minus the current-side weight. Summed over all
components this certifies that some size-k disjoint augmentation set
lifts the matching weight to at least k/(k+2) of the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import (
    Augmentation,
    Graph,
    Matching,
    _node_chain,
    are_disjoint,
    augment_all,
    augmentation_gain,
    check_queues,
    matching_weight,
)
from .oracle import max_weight_matching


@dataclass(frozen=True)
class DifferenceComponent:
    """One connected component of current-vs-optimal symmetric difference.

    c1 holds the optimal-side links, c2 the current-side links; together
    they partition the component. links are stored in traversal order
    (paths from their lower numbered endpoint, cycles starting at their
    lowest link id).
    """

    kind: str  # "path" | "cycle"
    links: tuple[int, ...]
    c1: frozenset[int]
    c2: frozenset[int]
    base: Matching

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "c1", frozenset(self.c1))
        object.__setattr__(self, "c2", frozenset(self.c2))
        if self.kind not in ("path", "cycle"):
            raise ValueError(f"kind must be 'path' or 'cycle', got {self.kind!r}")
        if not self.links:
            raise ValueError("component must have at least one link")
        if self.c1 & self.c2:
            raise ValueError("c1 and c2 overlap")
        if self.c1 | self.c2 != set(self.links):
            raise ValueError("c1 and c2 do not partition the component links")
        if self.c1 & self.base.members or self.c2 - self.base.members:
            raise ValueError("side assignment disagrees with the base matching")
        graph = self.base.graph
        chain = _node_chain(graph, self.links)
        flags = [eid in self.c1 for eid in self.links]
        for i in range(len(flags) - 1):
            if flags[i] == flags[i + 1]:
                raise ValueError("component links do not alternate between sides")
        if self.kind == "path":
            if len(set(chain)) != len(chain):
                raise ValueError("path component revisits a node")
            if abs(len(self.c1) - len(self.c2)) > 1:
                raise ValueError("alternating path sides differ by more than one link")
        else:
            if len(self.links) < 4 or len(self.links) % 2 != 0:
                raise ValueError("cycle component must have even length >= 4")
            if chain[0] != chain[-1] or len(set(chain[:-1])) != len(chain) - 1:
                raise ValueError("cycle component does not close simply")
            if flags[0] == flags[-1]:
                raise ValueError("cycle component does not alternate around the cycle")
            if len(self.c1) != len(self.c2):
                raise ValueError("cycle component sides must have equal size")

    def size(self) -> int:
        """Number of optimal-side links, i.e. links an augmentation would add."""
        return len(self.c1)

    def side_weights(self, q: Sequence[int]) -> tuple[int, int]:
        return (
            int(sum(q[e] for e in self.c1)),
            int(sum(q[e] for e in self.c2)),
        )


def _canonical_path_order(graph: Graph, links: Sequence[int]) -> tuple[int, ...]:
    """Order path links starting from the lower numbered endpoint."""
    links = tuple(links)
    if len(links) <= 1:
        return links
    chain = _node_chain(graph, links)
    if chain[-1] < chain[0]:
        return tuple(reversed(links))
    return links


def _as_augmentation(kind: str, links: Sequence[int], base: Matching) -> Augmentation:
    if kind == "path":
        links = _canonical_path_order(base.graph, links)
    return Augmentation(kind, tuple(links), base)


def symmetric_difference_components(current: Matching, optimal: Matching) -> list[DifferenceComponent]:
    """Split current-vs-optimal symmetric difference into path/cycle components.

    Components come back ordered by their smallest link id. Every node
    touches at most two difference links (asserted); this is what makes
    the split into simple paths and even cycles possible.
    """
    if current.graph is not optimal.graph:
        raise ValueError("matchings live on different graphs")
    graph = current.graph
    diff = current.members ^ optimal.members
    incident: dict[int, list[int]] = {}
    for eid in sorted(diff):
        for node in graph.links[eid]:
            incident.setdefault(node, []).append(eid)
    for node, eids in incident.items():
        assert len(eids) <= 2, f"node {node} touches {len(eids)} difference links"

    def other_end(eid: int, node: int) -> int:
        u, v = graph.links[eid]
        return v if node == u else u

    components: list[DifferenceComponent] = []
    seen: set[int] = set()
    for start in sorted(diff):
        if start in seen:
            continue
        # gather the whole component around `start`
        comp: set[int] = {start}
        frontier = [start]
        nodes: set[int] = set()
        while frontier:
            eid = frontier.pop()
            for node in graph.links[eid]:
                nodes.add(node)
                for nxt in incident[node]:
                    if nxt not in comp:
                        comp.add(nxt)
                        frontier.append(nxt)
        seen |= comp
        degree_one = sorted(n for n in nodes if len([e for e in incident[n] if e in comp]) == 1)
        ordered: list[int] = []
        if degree_one:
            assert len(degree_one) == 2, f"path component with {len(degree_one)} endpoints"
            kind = "path"
            node = degree_one[0]
            prev = None
            while True:
                nxt = [e for e in incident[node] if e in comp and e != prev]
                if not nxt:
                    break
                ordered.append(nxt[0])
                node = other_end(nxt[0], node)
                prev = nxt[0]
        else:
            kind = "cycle"
            first = min(comp)
            u, v = graph.links[first]
            succ_u = [e for e in incident[u] if e in comp and e != first][0]
            succ_v = [e for e in incident[v] if e in comp and e != first][0]
            # walk in whichever direction meets the smaller link id next
            if succ_v <= succ_u:
                node, nxt = v, succ_v
            else:
                node, nxt = u, succ_u
            ordered = [first]
            prev = first
            while nxt != first:
                ordered.append(nxt)
                node = other_end(nxt, node)
                prev = nxt
                nxt = [e for e in incident[node] if e in comp and e != prev][0]
        if kind == "path":
            ordered = list(_canonical_path_order(graph, ordered))
        components.append(
            DifferenceComponent(
                kind=kind,
                links=tuple(ordered),
                c1=frozenset(e for e in comp if e in optimal.members),
                c2=frozenset(e for e in comp if e in current.members),
                base=current,
            )
        )
    return components


def path_offset_candidates(
    c: DifferenceComponent, q: Sequence[int], k: int
) -> list[tuple[int, list[Augmentation], int]]:
    """All k+1 offset cuts of an alternating path, with their total gains.

    c1 links are numbered 1..M from the path's first link; offset i
    deletes every c1 link whose number is congruent to i modulo k+1. The
    surviving fragments of offset i form one candidate augmentation set.
    Every c2 link survives in all candidates; every c1 link is deleted in
    exactly one. That bookkeeping gives the exact identity

        sum of candidate gains over all offsets = k*C1q - (k+1)*C2q
    """
    if c.kind != "path":
        raise ValueError("offset cuts are defined for path components")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    positions = [i for i, eid in enumerate(c.links) if eid in c.c1]
    out: list[tuple[int, list[Augmentation], int]] = []
    for offset in range(1, k + 2):
        deleted = {positions[m] for m in range(len(positions)) if (m + 1 - offset) % (k + 1) == 0}
        augs: list[Augmentation] = []
        total = 0
        run: list[int] = []
        for i, eid in enumerate(c.links):
            if i in deleted:
                if run:
                    augs.append(_as_augmentation("path", run, c.base))
                    run = []
            else:
                run.append(eid)
        if run:
            augs.append(_as_augmentation("path", run, c.base))
        for a in augs:
            total += augmentation_gain(a, c.base, q)
        out.append((offset, augs, total))
    return out


def decompose_path(c: DifferenceComponent, q: Sequence[int], k: int) -> list[Augmentation]:
    """Cut an alternating path into disjoint augmentations of size <= k.

    Small components pass through whole. Larger ones take the best of
    the k+1 offset cuts (ties broken toward the smallest offset), which
    is guaranteed a gain of at least k/(k+1) of the optimal-side weight
    minus the current-side weight.
    """
    if c.kind != "path":
        raise ValueError("decompose_path needs a path component")
    check_queues(c.base.graph, q)
    c1q, c2q = c.side_weights(q)
    if c.size() <= k:
        return [_as_augmentation("path", c.links, c.base)]
    best: tuple[int, list[Augmentation], int] | None = None
    for offset, augs, total in path_offset_candidates(c, q, k):
        if best is None or total > best[2]:
            best = (offset, augs, total)
    assert best is not None
    for a in best[1]:
        size = sum(1 for e in a.links if e not in c.base.members)
        assert size <= k, f"fragment size {size} exceeds k={k}"
    assert (k + 1) * best[2] >= k * c1q - (k + 1) * c2q, (
        f"path cut gain {best[2]} below guarantee for k={k}: "
        f"(k+1)*gain={(k + 1) * best[2]} < k*C1q-(k+1)*C2q={k * c1q - (k + 1) * c2q}"
    )
    return best[1]


def decompose_cycle(c: DifferenceComponent, q: Sequence[int], k: int) -> list[Augmentation]:
    """Cut an alternating cycle into disjoint augmentations of size <= k.

    Small cycles pass through whole. Larger ones drop the lightest
    optimal-side link (ties toward the lowest id) and fall back to the
    path cut; the lightest link costs at most a 1/(k+2) share, which is
    where the k/(k+2) guarantee comes from.
    """
    if c.kind != "cycle":
        raise ValueError("decompose_cycle needs a cycle component")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    check_queues(c.base.graph, q)
    c1q, c2q = c.side_weights(q)
    if c.size() <= k:
        return [_as_augmentation("cycle", c.links, c.base)]
    drop = min(c.c1, key=lambda e: (q[e], e))
    pos = c.links.index(drop)
    path_links = c.links[pos + 1 :] + c.links[:pos]
    path_c = DifferenceComponent(
        kind="path",
        links=_canonical_path_order(c.base.graph, path_links),
        c1=c.c1 - {drop},
        c2=c.c2,
        base=c.base,
    )
    augs = decompose_path(path_c, q, k)
    total = sum(augmentation_gain(a, c.base, q) for a in augs)
    assert (k + 2) * total >= k * c1q - (k + 2) * c2q, (
        f"cycle cut gain {total} below guarantee for k={k}: "
        f"(k+2)*gain={(k + 2) * total} < k*C1q-(k+2)*C2q={k * c1q - (k + 2) * c2q}"
    )
    return augs


def build_target_set(current: Matching, q: Sequence[int], k: int) -> list[Augmentation]:
    """Disjoint size-k augmentations certifying the k/(k+2) weight fraction.

    Decomposes every symmetric difference component against an exact
    maximum weight matching and asserts, in exact integer arithmetic,
    that applying the whole set reaches at least k/(k+2) of the optimal
    weight.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    graph = current.graph
    check_queues(graph, q)
    opt = max_weight_matching(graph, q)
    augs: list[Augmentation] = []
    for comp in symmetric_difference_components(current, opt.optimal_matching):
        if comp.kind == "path":
            augs.extend(decompose_path(comp, q, k))
        else:
            augs.extend(decompose_cycle(comp, q, k))
    for i, a in enumerate(augs):
        size = sum(1 for e in a.links if e not in current.members)
        assert size <= k, f"augmentation size {size} exceeds k={k}"
        for b in augs[i + 1 :]:
            assert are_disjoint(a, b, current), "target set augmentations overlap"
    new = augment_all(current, augs)
    new_weight = matching_weight(new, q)
    assert (k + 2) * new_weight >= k * opt.optimal_weight, (
        f"target set reaches weight {new_weight}, below k/(k+2) of optimum {opt.optimal_weight}"
    )
    return augs
