"""Core value types for link scheduling under node-exclusive interference.

A Graph is a finite simple undirected graph with dense integer link ids.
A Matching is a set of pairwise non-adjacent links; it doubles as a
schedule, since node-exclusive interference admits exactly the matchings.
An Augmentation is an alternating path or cycle relative to a base
matching; applying it toggles its links in and out of the matching.

All queue arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class Graph:
    """Undirected simple graph with links indexed 0..|E|-1 in insertion order."""

    def __init__(self, node_count: int, links: Iterable[tuple[int, int]]):
        if node_count < 0:
            raise ValueError(f"node_count must be nonnegative, got {node_count}")
        self.node_count = node_count
        self.links: list[tuple[int, int]] = []
        self._id_by_pair: dict[tuple[int, int], int] = {}
        for u, v in links:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"link ({u}, {v}) has an endpoint outside 0..{node_count - 1}")
            if u == v:
                raise ValueError(f"self-loop at node {u} is not allowed")
            pair = (u, v) if u < v else (v, u)
            if pair in self._id_by_pair:
                raise ValueError(f"duplicate link {pair}")
            self._id_by_pair[pair] = len(self.links)
            self.links.append(pair)
        # adjacency[v] lists (neighbor, link_id), sorted by neighbor id
        self.adjacency: list[list[tuple[int, int]]] = [[] for _ in range(node_count)]
        for eid, (u, v) in enumerate(self.links):
            self.adjacency[u].append((v, eid))
            self.adjacency[v].append((u, eid))
        for nbrs in self.adjacency:
            nbrs.sort()

    @property
    def link_count(self) -> int:
        return len(self.links)

    def link_between(self, u: int, v: int) -> int | None:
        """Link id joining u and v, or None if they are not adjacent."""
        pair = (u, v) if u < v else (v, u)
        return self._id_by_pair.get(pair)

    def endpoints(self, link_id: int) -> tuple[int, int]:
        self.check_link_id(link_id)
        return self.links[link_id]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def check_link_id(self, link_id: int) -> None:
        if not (0 <= link_id < len(self.links)):
            raise ValueError(f"link id {link_id} outside 0..{len(self.links) - 1}")

    def __repr__(self) -> str:
        return f"Graph(nodes={self.node_count}, links={len(self.links)})"


def parse_graph(text: str) -> Graph:
    """Parse the plain text graph format.

    First non-comment line is `nodes <N>`; every following line is
    `link <u> <v>`. Lines starting with `#` and blank lines are skipped.
    Link ids follow file order.
    """
    node_count = None
    links: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "nodes":
            if node_count is not None:
                raise ValueError(f"line {lineno}: repeated nodes header")
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'nodes <N>'")
            node_count = int(parts[1])
        elif parts[0] == "link":
            if node_count is None:
                raise ValueError(f"line {lineno}: link before nodes header")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'link <u> <v>'")
            links.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"line {lineno}: unknown directive {parts[0]!r}")
    if node_count is None:
        raise ValueError("missing 'nodes <N>' header")
    return Graph(node_count, links)


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def dump_graph(graph: Graph) -> str:
    lines = [f"nodes {graph.node_count}"]
    lines.extend(f"link {u} {v}" for u, v in graph.links)
    return "\n".join(lines) + "\n"


def is_matching(graph: Graph, links: Iterable[int]) -> bool:
    """True iff the given link ids are pairwise non-adjacent."""
    seen_nodes: set[int] = set()
    for eid in links:
        graph.check_link_id(eid)
        u, v = graph.links[eid]
        if u in seen_nodes or v in seen_nodes:
            return False
        seen_nodes.add(u)
        seen_nodes.add(v)
    return True


@dataclass(frozen=True)
class Matching:
    """Immutable set of pairwise non-adjacent link ids over a graph."""

    graph: Graph
    members: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        if not is_matching(self.graph, members):
            raise ValueError(f"links {sorted(members)} are not a matching")

    def node_link(self) -> list[int]:
        """Per-node incident member link id, -1 where unmatched."""
        out = [-1] * self.graph.node_count
        for eid in self.members:
            u, v = self.graph.links[eid]
            out[u] = eid
            out[v] = eid
        return out

    def __contains__(self, link_id: int) -> bool:
        return link_id in self.members

    def __repr__(self) -> str:
        return f"Matching({sorted(self.members)})"


def check_queues(graph: Graph, q: Sequence[int]) -> None:
    """Validate a queue vector: one nonnegative integer per link."""
    if len(q) != graph.link_count:
        raise ValueError(f"queue vector has length {len(q)}, expected {graph.link_count}")
    for eid, value in enumerate(q):
        if value < 0:
            raise ValueError(f"queue for link {eid} is negative: {value}")


def matching_weight(m: Matching, q: Sequence[int]) -> int:
    """Total queue weight of the matching's links."""
    return int(sum(q[eid] for eid in m.members))


def _node_chain(graph: Graph, links: Sequence[int]) -> list[int]:
    """Node sequence visited by a link sequence; raises if not a chain.

    For a single link the orientation is the stored (low, high) order.
    """
    if not links:
        return []
    if len(links) == 1:
        u, v = graph.links[links[0]]
        return [u, v]
    a0 = set(graph.links[links[0]])
    a1 = set(graph.links[links[1]])
    shared = a0 & a1
    if len(shared) != 1:
        raise ValueError(f"links {links[0]} and {links[1]} do not chain")
    first = (a0 - shared).pop()
    chain = [first, shared.pop()]
    for eid in links[1:]:
        u, v = graph.links[eid]
        if chain[-1] == u:
            chain.append(v)
        elif chain[-1] == v:
            chain.append(u)
        else:
            raise ValueError(f"link {eid} does not continue the chain at node {chain[-1]}")
    return chain


@dataclass(frozen=True)
class Augmentation:
    """Alternating path or cycle relative to a base matching.

    links are stored in traversal order. For cycles the last link closes
    back to the first node of the chain. Validity (checked on
    construction): the links form a simple path or cycle, base membership
    alternates along it, and applying it to the base yields a matching.
    """

    kind: str  # "path" | "cycle"
    links: tuple[int, ...]
    base: Matching

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        if self.kind not in ("path", "cycle"):
            raise ValueError(f"kind must be 'path' or 'cycle', got {self.kind!r}")
        self._validate()

    def _validate(self) -> None:
        graph = self.base.graph
        links = self.links
        if len(set(links)) != len(links):
            raise ValueError(f"repeated link in augmentation {links}")
        if not links:
            if self.kind != "path":
                raise ValueError("empty augmentation must be a path")
            return
        chain = _node_chain(graph, links)
        if self.kind == "path":
            if len(set(chain)) != len(chain):
                raise ValueError(f"path revisits a node: {chain}")
        else:
            if len(links) < 3:
                raise ValueError("cycle needs at least three links")
            if chain[0] != chain[-1]:
                raise ValueError(f"links {links} do not close a cycle")
            inner = chain[:-1]
            if len(set(inner)) != len(inner):
                raise ValueError(f"cycle revisits a node: {chain}")
        flags = [eid in self.base.members for eid in links]
        for i in range(len(flags) - 1):
            if flags[i] == flags[i + 1]:
                raise ValueError("base membership does not alternate along the augmentation")
        if self.kind == "cycle" and flags[-1] == flags[0]:
            raise ValueError("base membership does not alternate around the cycle")
        # the toggled link set must itself be a matching
        toggled = set(self.base.members)
        for eid in links:
            if eid in toggled:
                toggled.discard(eid)
            else:
                toggled.add(eid)
        if not is_matching(graph, toggled):
            raise ValueError("applying the augmentation does not yield a matching")

    def links_in_base(self) -> tuple[int, ...]:
        return tuple(e for e in self.links if e in self.base.members)

    def links_outside_base(self) -> tuple[int, ...]:
        return tuple(e for e in self.links if e not in self.base.members)

    def __repr__(self) -> str:
        return f"Augmentation({self.kind}, links={list(self.links)})"


def _require_same_base(a: Augmentation, base: Matching) -> None:
    if a.base.graph is not base.graph or a.base.members != base.members:
        raise ValueError("augmentation was built against a different base matching")


def augmentation_gain(a: Augmentation, base: Matching, q: Sequence[int]) -> int:
    """Weight entering minus weight leaving when the augmentation is applied."""
    _require_same_base(a, base)
    gain = 0
    for eid in a.links:
        if eid in base.members:
            gain -= int(q[eid])
        else:
            gain += int(q[eid])
    return gain


def augmentation_size(a: Augmentation, base: Matching, k: int | None = None) -> int:
    """Number of links the augmentation adds to the base.

    When k is given, asserts the structural cap of 2k + 1 total links for
    a size <= k augmentation.
    """
    _require_same_base(a, base)
    size = sum(1 for eid in a.links if eid not in base.members)
    if k is not None and size <= k:
        assert len(a.links) <= 2 * k + 1, (
            f"size-{size} augmentation has {len(a.links)} links, cap is {2 * k + 1}"
        )
    return size


def apply_augmentation(base: Matching, a: Augmentation) -> Matching:
    """Toggle the augmentation's links in the base matching."""
    _require_same_base(a, base)
    members = set(base.members)
    for eid in a.links:
        if eid in members:
            members.discard(eid)
        else:
            members.add(eid)
    return Matching(base.graph, frozenset(members))


def are_disjoint(a: Augmentation, b: Augmentation, base: Matching) -> bool:
    """True iff no non-base link of one touches any node of the other's non-base links.

    Sharing a base link (or a node via base links only) is allowed; the
    shared base link simply leaves the matching once.
    """
    _require_same_base(a, base)
    _require_same_base(b, base)
    graph = base.graph
    nodes_a: set[int] = set()
    for eid in a.links_outside_base():
        nodes_a.update(graph.links[eid])
    for eid in b.links_outside_base():
        u, v = graph.links[eid]
        if u in nodes_a or v in nodes_a:
            return False
    return True


def augment_all(base: Matching, augs: Iterable[Augmentation]) -> Matching:
    """Apply a collection of pairwise disjoint augmentations at once.

    Base links shared between augmentations are removed once; the result
    must still be a matching (guaranteed for disjoint augmentations).
    """
    members = set(base.members)
    added: set[int] = set()
    removed: set[int] = set()
    for a in augs:
        _require_same_base(a, base)
        removed.update(a.links_in_base())
        added.update(a.links_outside_base())
    members -= removed
    members |= added
    return Matching(base.graph, frozenset(members))
