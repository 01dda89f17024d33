"""Phase-synchronous control protocol that grows bounded-size augmentations.

Each control round runs 4k+2 phases. Random seed nodes start
augmentations relative to the previous schedule and grow them one link
per phase through REQ/ACK handshakes, alternating between links inside
and outside the previous matching. Links inside the previous matching
are committed before their REQ; a failed handshake leaves such a link
in place, which is why two augmentations may end up sharing one of
them. Growth stops on contention, on running out of eligible links, or
on reaching the intended size; a stopped augmentation may close into a
cycle when its terminus borders its seed. The terminus switches the
augmentation if and only if its gain is positive, and the decision is
relayed back to the seed in the remaining phases.

Every node transmits at most three control messages per round: one ACK,
one REQ, and one relay hop.

Randomness discipline (relied on by replay tests): one rng.random() per
node in id order for seed election, then one rng.randint(1, k) per seed
in id order for intended sizes, then one rng.randrange(len(candidates))
per random link choice, taken in phase order and within a phase in
ascending active-node order, with candidates sorted by neighbor id.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .graph import (
    Augmentation,
    Graph,
    Matching,
    augmentation_gain,
    check_queues,
    matching_weight,
)

ROLE_INACTIVE = "inactive"
ROLE_SEED = "seed"
ROLE_ACTIVE = "active"
ROLE_USED = "used"
ROLE_TERMINUS = "terminus"


@dataclass
class NodeState:
    role: str = ROLE_INACTIVE
    aug_id: int | None = None
    intended_size: int | None = None
    is_seed: bool = False


class PhaseMessage(NamedTuple):
    phase: int
    kind: str  # "REQ" | "ACK" | "FWD"
    from_node: int
    to_node: int
    link: int


@dataclass
class Trace:
    """Message and state log of one control round spanning all 4k+2 phases."""

    phase_count: int
    messages: list[PhaseMessage] = field(default_factory=list)
    role_changes: list[tuple[int, int, str]] = field(default_factory=list)
    node_states: list[NodeState] = field(default_factory=list)

    def messages_in_phase(self, phase: int) -> list[PhaseMessage]:
        return [m for m in self.messages if m.phase == phase]


def serialize_trace(trace: Trace, include_backprop: bool = False) -> str:
    """Line format: `phase=<n> kind=<REQ|ACK> from=<u> to=<v> link=<id>`.

    Relay records (kind FWD) are bookkeeping and are skipped unless
    include_backprop is set.
    """
    lines = []
    for m in trace.messages:
        if m.kind == "FWD" and not include_backprop:
            continue
        lines.append(f"phase={m.phase} kind={m.kind} from={m.from_node} to={m.to_node} link={m.link}")
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class AugmentationBuild:
    """One augmentation under construction, owned by its seed.

    links grow in build order; nodes lists the joined chain (a failed
    handshake on a committed matching link leaves that link's far node
    out of the chain). running_gain tracks the gain incrementally and is
    checked against a recomputation at the end of the round.
    """

    seed_node: int
    intended_size: int
    links: list[int] = field(default_factory=list)
    nodes: list[int] = field(default_factory=list)
    nonbase_count: int = 0
    running_gain: int = 0
    status: str = "growing"  # "growing" | "terminated"
    switch: bool = False
    closed: bool = False
    began_with_base: bool | None = None
    last_in_base: bool | None = None
    terminus_node: int | None = None
    link_set: set[int] = field(default_factory=set)

    def kind(self) -> str:
        return "cycle" if self.closed else "path"

    def to_augmentation(self, base: Matching) -> Augmentation | None:
        """Validated immutable view; None for an empty build."""
        if not self.links:
            return None
        return Augmentation(self.kind(), tuple(self.links), base)


@dataclass
class ControlOutcome:
    augmentations: list[AugmentationBuild]
    new_matching: Matching
    trace: Trace


def elect_seeds(graph: Graph, p: float, rng: random.Random) -> set[int]:
    """Each node independently becomes a seed with probability p."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly inside (0, 1), got {p}")
    return {v for v in range(graph.node_count) if rng.random() < p}


def mask_zero_queues(m: Matching, q: Sequence[int]) -> np.ndarray:
    """0/1 service indicator: a scheduled link serves only a positive queue."""
    out = np.zeros(m.graph.link_count, dtype=np.int64)
    for eid in m.members:
        if q[eid] > 0:
            out[eid] = 1
    return out


def run_control_part(
    graph: Graph,
    q: Sequence[int],
    prev: Matching,
    k: int,
    p: float,
    rng: random.Random,
    record_trace: bool = True,
    validate: bool = True,
) -> ControlOutcome:
    """Run one 4k+2 phase control round and return the new schedule.

    q and prev describe the state the round reacts to; prev must be a
    matching on graph. With record_trace the returned trace carries every
    REQ/ACK/relay message and all role changes; without it only cheap
    structural checks run, which keeps the simulation loop fast. validate
    additionally rebuilds every augmentation as a checked value object
    and reconciles its incremental gain.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if prev.graph is not graph:
        raise ValueError("previous matching belongs to a different graph")
    check_queues(graph, q)

    n = graph.node_count
    adj = graph.adjacency
    links = graph.links
    phase_count = 4 * k + 2

    match_link = [-1] * n
    for eid in prev.members:
        u, v = links[eid]
        match_link[u] = eid
        match_link[v] = eid

    trace = Trace(phase_count=phase_count)
    messages = trace.messages
    roles = [ROLE_INACTIVE] * n
    aug_of: list[int | None] = [None] * n
    tx_count = [0] * n

    def log_role(phase: int, node: int, role: str) -> None:
        roles[node] = role
        if record_trace:
            trace.role_changes.append((phase, node, role))

    seeds = elect_seeds(graph, p, rng)
    builds: list[AugmentationBuild] = []
    for s in sorted(seeds):
        intended = rng.randint(1, k)
        aug_of[s] = len(builds)
        builds.append(AugmentationBuild(seed_node=s, intended_size=intended, nodes=[s]))
        log_role(0, s, ROLE_SEED)

    def make_terminus(bi: int, phase: int) -> None:
        b = builds[bi]
        b.status = "terminated"
        b.terminus_node = b.nodes[-1]
        log_role(phase, b.nodes[-1], ROLE_TERMINUS)

    active = list(range(len(builds)))  # seeds are already in node id order
    for phase in range(1, 2 * k + 2):
        reqs: list[tuple[int, int, int, int, bool]] = []
        for bi in active:
            b = builds[bi]
            v = b.nodes[-1]
            need_base = (match_link[v] != -1) if not b.links else (not b.last_in_base)
            if need_base:
                ml = match_link[v]
                if ml == -1 or ml in b.link_set:
                    make_terminus(bi, phase)
                    continue
                # matching links are committed before the handshake
                b.links.append(ml)
                b.link_set.add(ml)
                b.running_gain -= int(q[ml])
                b.last_in_base = True
                if b.began_with_base is None:
                    b.began_with_base = True
                u, w = links[ml]
                reqs.append((bi, v, w if u == v else u, ml, True))
            else:
                if b.nonbase_count >= b.intended_size:
                    make_terminus(bi, phase)
                    continue
                cands = [(u, lid) for (u, lid) in adj[v] if lid not in b.link_set]
                if not cands:
                    make_terminus(bi, phase)
                    continue
                u, lid = cands[rng.randrange(len(cands))]
                reqs.append((bi, v, u, lid, False))

        target_count: dict[int, int] = {}
        for _, _, u, _, _ in reqs:
            target_count[u] = target_count.get(u, 0) + 1

        next_active: list[int] = []
        for bi, v, u, lid, pre in reqs:
            tx_count[v] += 1
            if record_trace:
                messages.append(PhaseMessage(phase, "REQ", v, u, lid))
            # all requests of a phase resolve against phase-start state
            if target_count[u] > 1 or aug_of[u] is not None:
                make_terminus(bi, phase)
                continue
            b = builds[bi]
            tx_count[u] += 1
            if record_trace:
                messages.append(PhaseMessage(phase, "ACK", u, v, lid))
            aug_of[u] = bi
            if not pre:
                b.links.append(lid)
                b.link_set.add(lid)
                b.nonbase_count += 1
                b.running_gain += int(q[lid])
                b.last_in_base = False
                if b.began_with_base is None:
                    b.began_with_base = False
            b.nodes.append(u)
            log_role(phase, v, ROLE_USED)
            log_role(phase, u, ROLE_ACTIVE)
            next_active.append(bi)
        next_active.sort(key=lambda bi: builds[bi].nodes[-1])
        active = next_active

    # phase budget exhausted: anyone still growing is a terminus
    for bi in active:
        make_terminus(bi, 2 * k + 1)

    switched_gain_total = 0
    for b in builds:
        assert b.status == "terminated", "augmentation left growing after the final phase"
        t = b.nodes[-1]
        s = b.seed_node
        if (
            b.links
            and t != s
            and b.began_with_base
            and b.last_in_base
            and b.nonbase_count < b.intended_size
            and len(b.nodes) == len(b.links) + 1
        ):
            close = graph.link_between(s, t)
            if close is not None and close not in b.link_set:
                assert close not in prev.members, "closing link cannot be a matching link"
                b.links.append(close)
                b.link_set.add(close)
                b.nonbase_count += 1
                b.running_gain += int(q[close])
                b.closed = True
        b.switch = b.running_gain > 0
        if b.switch:
            switched_gain_total += b.running_gain
        assert b.nonbase_count <= k, f"augmentation size {b.nonbase_count} exceeds k={k}"
        assert len(b.links) <= 2 * k + 1, f"{len(b.links)} links exceeds the 2k+1 cap"

    # cheap structural guarantees, kept on even in the fast path
    claimed: dict[int, int] = {}
    for bi, b in enumerate(builds):
        for eid in b.links:
            if eid in prev.members:
                continue
            for node in links[eid]:
                owner = claimed.setdefault(node, bi)
                assert owner == bi, f"node {node} touched by non-matching links of two augmentations"
                ml = match_link[node]
                assert ml == -1 or ml in b.link_set, (
                    f"augmentation adds link {eid} without covering matching link {ml}"
                )

    members = set(prev.members)
    for b in builds:
        if not b.switch:
            continue
        for eid in b.links:
            if eid in prev.members:
                members.discard(eid)
            else:
                members.add(eid)
    new_matching = Matching(graph, frozenset(members))
    assert matching_weight(new_matching, q) >= matching_weight(prev, q) + switched_gain_total, (
        "switched augmentations lost weight"
    )

    # decision relay back to the seeds, one hop per phase
    for b in builds:
        hops = len(b.nodes) - 1
        for j in range(hops):
            sender = b.nodes[hops - j]
            receiver = b.nodes[hops - j - 1]
            tx_count[sender] += 1
            if record_trace:
                messages.append(PhaseMessage(2 * k + 2 + j, "FWD", sender, receiver, b.links[hops - j - 1]))

    bad = [v for v in range(n) if tx_count[v] > 3]
    assert not bad, f"nodes {bad} exceed three control transmissions"

    if validate:
        for b in builds:
            aug = b.to_augmentation(prev)
            if aug is None:
                assert b.running_gain == 0 and not b.switch
                continue
            assert augmentation_gain(aug, prev, q) == b.running_gain, (
                "incremental gain disagrees with recomputation"
            )

    if record_trace:
        for v in range(n):
            trace.node_states.append(
                NodeState(
                    role=roles[v],
                    aug_id=aug_of[v],
                    intended_size=builds[aug_of[v]].intended_size
                    if aug_of[v] is not None and builds[aug_of[v]].seed_node == v
                    else None,
                    is_seed=v in seeds,
                )
            )

    return ControlOutcome(augmentations=builds, new_matching=new_matching, trace=trace)


def apply_switch_decisions(prev: Matching, outcome: ControlOutcome) -> Matching:
    """Re-derive the new schedule from the switch flags; must agree exactly."""
    members = set(prev.members)
    for b in outcome.augmentations:
        if not b.switch:
            continue
        for eid in b.links:
            if eid in prev.members:
                members.discard(eid)
            else:
                members.add(eid)
    rebuilt = Matching(prev.graph, frozenset(members))
    assert rebuilt.members == outcome.new_matching.members, (
        "switch decisions do not reproduce the returned matching"
    )
    return rebuilt
