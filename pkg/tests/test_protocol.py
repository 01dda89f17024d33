import random

import numpy as np
import pytest

from augsched import (
    Graph,
    Matching,
    apply_switch_decisions,
    augmentation_gain,
    are_disjoint,
    elect_seeds,
    mask_zero_queues,
    matching_weight,
    run_control_part,
    serialize_trace,
)
from conftest import (
    ScriptedRng,
    contended_example,
    random_connected_graph,
    random_matching,
    random_queues,
    single_seed_example,
)


class TestElectSeeds:
    def test_scripted_election(self):
        g = Graph(4, [(0, 1), (2, 3)])
        rng = ScriptedRng(randoms=[0.1, 0.9, 0.3, 0.5])
        assert elect_seeds(g, 0.4, rng) == {0, 2}
        rng.assert_exhausted()

    def test_probability_validated(self):
        g = Graph(2, [(0, 1)])
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError, match="p must"):
                elect_seeds(g, bad, random.Random(0))

    def test_election_rate_near_p(self):
        g = Graph(2000, [(i, i + 1) for i in range(1999)])
        rng = random.Random(0)
        count = len(elect_seeds(g, 0.3, rng))
        # binomial(2000, 0.3): mean 600, sigma ~20.5; allow 3 sigma
        assert abs(count - 600) < 62


class TestMaskZeroQueues:
    def test_only_positive_scheduled_links_serve(self):
        g = Graph(6, [(0, 1), (2, 3), (4, 5)])
        m = Matching(g, frozenset({0, 1}))
        mask = mask_zero_queues(m, [3, 0, 9])
        assert mask.tolist() == [1, 0, 0]


class TestSingleSeedGolden:
    """One seed walks a four-link alternating path down a tree and switches."""

    def run(self):
        graph, base, q = single_seed_example()
        rng = ScriptedRng(
            randoms=[0.0] + [0.9] * 6,  # node 0 seeds at p=0.5
            randints=[2],               # intended size
            randranges=[0, 0],          # first candidate at nodes 1 and 3
        )
        outcome = run_control_part(graph, q, base, k=2, p=0.5, rng=rng)
        rng.assert_exhausted()
        return base, q, outcome

    def test_exact_message_trace(self):
        _, _, outcome = self.run()
        assert serialize_trace(outcome.trace) == (
            "phase=1 kind=REQ from=0 to=1 link=0\n"
            "phase=1 kind=ACK from=1 to=0 link=0\n"
            "phase=2 kind=REQ from=1 to=2 link=1\n"
            "phase=2 kind=ACK from=2 to=1 link=1\n"
            "phase=3 kind=REQ from=2 to=3 link=3\n"
            "phase=3 kind=ACK from=3 to=2 link=3\n"
            "phase=4 kind=REQ from=3 to=4 link=4\n"
            "phase=4 kind=ACK from=4 to=3 link=4\n"
        )

    def test_augmentation_and_switch(self):
        base, q, outcome = self.run()
        (b,) = outcome.augmentations
        assert b.links == [0, 1, 3, 4]
        assert b.nodes == [0, 1, 2, 3, 4]
        assert b.running_gain == 6
        assert b.switch and not b.closed
        assert b.terminus_node == 4
        aug = b.to_augmentation(base)
        assert augmentation_gain(aug, base, q) == 6
        assert outcome.new_matching.members == {1, 4}

    def test_decision_relay_walks_back_to_seed(self):
        _, _, outcome = self.run()
        fwd = [m for m in outcome.trace.messages if m.kind == "FWD"]
        assert [(m.phase, m.from_node, m.to_node, m.link) for m in fwd] == [
            (6, 4, 3, 4), (7, 3, 2, 3), (8, 2, 1, 1), (9, 1, 0, 0),
        ]
        assert outcome.trace.phase_count == 10
        # serialization hides the relay unless asked
        assert "FWD" not in serialize_trace(outcome.trace)
        assert serialize_trace(outcome.trace, include_backprop=True).count("FWD") == 4

    def test_final_roles(self):
        _, _, outcome = self.run()
        states = outcome.trace.node_states
        assert [s.role for s in states] == [
            "used", "used", "used", "used", "terminus", "inactive", "inactive",
        ]
        assert states[0].is_seed and states[0].intended_size == 2
        assert [s.aug_id for s in states] == [0, 0, 0, 0, 0, None, None]


class TestContendedGolden:
    """Four seeds: a cycle closure, a full path, and a two-way collision."""

    def run(self):
        graph, base, q = contended_example()
        randoms = [0.9] * 14
        for seed in (0, 4, 9, 11):
            randoms[seed] = 0.0
        rng = ScriptedRng(randoms=randoms, randints=[2, 2, 2, 2], randranges=[0] * 6)
        outcome = run_control_part(graph, q, base, k=2, p=0.5, rng=rng)
        rng.assert_exhausted()
        return base, q, outcome

    def test_exact_message_trace(self):
        _, _, outcome = self.run()
        assert serialize_trace(outcome.trace).splitlines() == [
            "phase=1 kind=REQ from=0 to=1 link=0",
            "phase=1 kind=ACK from=1 to=0 link=0",
            "phase=1 kind=REQ from=4 to=5 link=4",
            "phase=1 kind=ACK from=5 to=4 link=4",
            "phase=1 kind=REQ from=9 to=10 link=8",
            "phase=1 kind=ACK from=10 to=9 link=8",
            "phase=1 kind=REQ from=11 to=12 link=10",
            "phase=1 kind=ACK from=12 to=11 link=10",
            "phase=2 kind=REQ from=1 to=2 link=1",
            "phase=2 kind=ACK from=2 to=1 link=1",
            "phase=2 kind=REQ from=5 to=6 link=5",
            "phase=2 kind=ACK from=6 to=5 link=5",
            "phase=2 kind=REQ from=10 to=13 link=9",
            "phase=2 kind=REQ from=12 to=13 link=11",
            "phase=3 kind=REQ from=2 to=3 link=2",
            "phase=3 kind=ACK from=3 to=2 link=2",
            "phase=3 kind=REQ from=6 to=7 link=6",
            "phase=3 kind=ACK from=7 to=6 link=6",
            "phase=4 kind=REQ from=3 to=0 link=3",
            "phase=4 kind=REQ from=7 to=8 link=7",
            "phase=4 kind=ACK from=8 to=7 link=7",
        ]

    def test_collision_leaves_both_requesters_terminated(self):
        _, _, outcome = self.run()
        by_seed = {b.seed_node: b for b in outcome.augmentations}
        assert by_seed[9].terminus_node == 10
        assert by_seed[11].terminus_node == 12
        # both keep their committed matching link but gain nothing
        assert by_seed[9].links == [8] and by_seed[9].running_gain == -2
        assert by_seed[11].links == [10] and by_seed[11].running_gain == -3
        assert not by_seed[9].switch and not by_seed[11].switch

    def test_cycle_closes_on_failed_request_to_own_seed(self):
        base, q, outcome = self.run()
        b = outcome.augmentations[0]
        assert b.seed_node == 0 and b.terminus_node == 3
        assert b.closed and b.kind() == "cycle"
        assert b.links == [0, 1, 2, 3]
        assert b.running_gain == 5 and b.switch
        aug = b.to_augmentation(base)
        assert aug.kind == "cycle"
        assert augmentation_gain(aug, base, q) == 5

    def test_path_stops_at_intended_size(self):
        _, _, outcome = self.run()
        b = outcome.augmentations[1]
        assert b.seed_node == 4 and b.terminus_node == 8
        assert b.links == [4, 5, 6, 7] and not b.closed
        assert b.running_gain == 6 and b.switch

    def test_new_matching_and_weight_accounting(self):
        base, q, outcome = self.run()
        assert outcome.new_matching.members == {1, 3, 4, 6, 8, 10}
        gains = sum(b.running_gain for b in outcome.augmentations if b.switch)
        assert gains == 11
        assert matching_weight(outcome.new_matching, q) == matching_weight(base, q) + gains
        assert apply_switch_decisions(base, outcome).members == outcome.new_matching.members

    def test_relay_phases_fit_budget(self):
        _, _, outcome = self.run()
        fwd = [m for m in outcome.trace.messages if m.kind == "FWD"]
        assert max(m.phase for m in fwd) == 9 <= outcome.trace.phase_count
        first_hops = sorted(
            (m.phase, m.from_node, m.to_node, m.link) for m in fwd if m.phase == 6
        )
        assert first_hops == [(6, 3, 2, 2), (6, 8, 7, 7), (6, 10, 9, 8), (6, 12, 11, 10)]

    def test_no_node_transmits_more_than_three_times(self):
        _, _, outcome = self.run()
        counts = {}
        for m in outcome.trace.messages:
            counts[m.from_node] = counts.get(m.from_node, 0) + 1
        assert max(counts.values()) <= 3
        # node 3 hits the cap: ACK, failed REQ, then the relay hop
        assert counts[3] == 3


class TestSharedMatchingLink:
    """Two seeds grab the same matching link from opposite ends; both switch."""

    def run(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        base = Matching(g, frozenset({1}))
        q = [5, 1, 7]
        rng = ScriptedRng(
            randoms=[0.0, 0.9, 0.9, 0.0], randints=[1, 1], randranges=[0, 0]
        )
        outcome = run_control_part(g, q, base, k=1, p=0.5, rng=rng)
        rng.assert_exhausted()
        return base, q, outcome

    def test_both_augmentations_switch(self):
        base, q, outcome = self.run()
        a, b = outcome.augmentations
        assert a.links == [0, 1] and a.running_gain == 4 and a.switch
        assert b.links == [2, 1] and b.running_gain == 6 and b.switch
        assert are_disjoint(a.to_augmentation(base), b.to_augmentation(base), base)

    def test_weight_gain_exceeds_sum_of_gains(self):
        # the shared link's removal is double counted in the gains, so the
        # realized improvement (11) beats the summed gains (10)
        base, q, outcome = self.run()
        assert outcome.new_matching.members == {0, 2}
        realized = matching_weight(outcome.new_matching, q) - matching_weight(base, q)
        claimed = sum(b.running_gain for b in outcome.augmentations if b.switch)
        assert realized == 11 > claimed == 10

    def test_dangling_requests_cross(self):
        _, _, outcome = self.run()
        phase2 = outcome.trace.messages_in_phase(2)
        assert [(m.kind, m.from_node, m.to_node) for m in phase2] == [
            ("REQ", 1, 2), ("REQ", 2, 1),
        ]


class TestProtocolEdges:
    def test_isolated_seed_terminates_empty(self):
        g = Graph(3, [(0, 1)])
        base = Matching(g, frozenset())
        rng = ScriptedRng(randoms=[0.9, 0.9, 0.0], randints=[2])
        outcome = run_control_part(g, [4], base, k=2, p=0.5, rng=rng)
        rng.assert_exhausted()
        (b,) = outcome.augmentations
        assert b.links == [] and not b.switch and b.running_gain == 0
        assert b.terminus_node == 2
        assert outcome.new_matching.members == base.members
        assert outcome.trace.messages == []

    def test_head_on_collision_terminates_both_empty(self):
        g = Graph(3, [(0, 1), (1, 2)])
        base = Matching(g, frozenset())
        rng = ScriptedRng(
            randoms=[0.0, 0.9, 0.0], randints=[1, 1], randranges=[0, 0]
        )
        outcome = run_control_part(g, [3, 3], base, k=1, p=0.5, rng=rng)
        a, b = outcome.augmentations
        assert a.links == [] and b.links == []
        assert outcome.new_matching.members == frozenset()

    def test_request_to_node_used_in_earlier_phase_fails(self):
        g = Graph(5, [(0, 1), (1, 4), (3, 4), (2, 3)])
        base = Matching(g, frozenset({1}))
        q = [5, 2, 7, 9]
        rng = ScriptedRng(
            randoms=[0.0, 0.9, 0.0, 0.9, 0.9], randints=[2, 2], randranges=[0, 0, 0]
        )
        outcome = run_control_part(g, q, base, k=2, p=0.5, rng=rng)
        rng.assert_exhausted()
        by_seed = {b.seed_node: b for b in outcome.augmentations}
        # seed 2's augmentation finished first and occupies node 3, so the
        # phase-3 request from node 4 bounces off it
        assert by_seed[2].links == [3] and by_seed[2].switch
        assert by_seed[0].links == [0, 1] and by_seed[0].terminus_node == 4
        phase3 = outcome.trace.messages_in_phase(3)
        assert [(m.kind, m.from_node, m.to_node) for m in phase3] == [("REQ", 4, 3)]
        assert outcome.new_matching.members == {0, 3}

    def test_intended_size_stops_growth_and_negative_gain_blocks_switch(self):
        g = Graph(3, [(0, 1), (1, 2)])
        base = Matching(g, frozenset({1}))
        rng = ScriptedRng(randoms=[0.0, 0.9, 0.9], randints=[1], randranges=[0])
        outcome = run_control_part(g, [4, 6], base, k=2, p=0.5, rng=rng)
        rng.assert_exhausted()
        (b,) = outcome.augmentations
        assert b.links == [0, 1] and b.nonbase_count == 1
        assert b.terminus_node == 2
        assert b.running_gain == -2 and not b.switch
        assert outcome.new_matching.members == {1}

    def test_k_and_inputs_validated(self):
        g = Graph(2, [(0, 1)])
        base = Matching(g, frozenset())
        with pytest.raises(ValueError, match="k must"):
            run_control_part(g, [1], base, k=0, p=0.5, rng=random.Random(0))
        other = Graph(2, [(0, 1)])
        with pytest.raises(ValueError, match="different graph"):
            run_control_part(g, [1], Matching(other, frozenset()), k=1, p=0.5, rng=random.Random(0))
        with pytest.raises(ValueError, match="negative"):
            run_control_part(g, [-1], base, k=1, p=0.5, rng=random.Random(0))


class TestProtocolProperties:
    def test_random_runs_keep_every_invariant(self):
        rng = random.Random(123)
        for trial in range(1500):
            g = random_connected_graph(rng, max_nodes=12)
            q = random_queues(g, rng)
            base = random_matching(g, rng)
            k = rng.choice([1, 2, 3])
            outcome = run_control_part(
                g, q, base, k=k, p=0.4, rng=rng, record_trace=True, validate=True
            )
            trace = outcome.trace
            assert trace.phase_count == 4 * k + 2
            tx = {}
            for m in trace.messages:
                assert 1 <= m.phase <= 4 * k + 2
                tx[m.from_node] = tx.get(m.from_node, 0) + 1
                if m.kind in ("REQ", "ACK"):
                    assert m.phase <= 2 * k + 1
                else:
                    assert m.phase >= 2 * k + 2
            assert all(c <= 3 for c in tx.values())

            augs = [b.to_augmentation(base) for b in outcome.augmentations]
            augs = [a for a in augs if a is not None]
            for i, a in enumerate(augs):
                assert sum(1 for e in a.links if e not in base.members) <= k
                assert len(a.links) <= 2 * k + 1
                for b in augs[i + 1 :]:
                    assert are_disjoint(a, b, base)

            switched = [b for b in outcome.augmentations if b.switch]
            assert all(b.running_gain > 0 for b in switched)
            gain_sum = sum(b.running_gain for b in switched)
            assert matching_weight(outcome.new_matching, q) >= (
                matching_weight(base, q) + gain_sum
            )
            assert apply_switch_decisions(base, outcome).members == (
                outcome.new_matching.members
            )

    def test_fast_path_matches_recorded_path(self):
        # same rng stream with tracing off must yield the same matching
        rng_seed = 77
        g = random_connected_graph(random.Random(1), max_nodes=10)
        q = random_queues(g, random.Random(2))
        base = random_matching(g, random.Random(3))
        slow = run_control_part(
            g, q, base, k=2, p=0.3, rng=random.Random(rng_seed),
            record_trace=True, validate=True,
        )
        fast = run_control_part(
            g, q, base, k=2, p=0.3, rng=random.Random(rng_seed),
            record_trace=False, validate=False,
        )
        assert slow.new_matching.members == fast.new_matching.members
        assert fast.trace.messages == []

    def test_queue_weights_never_regress_with_zero_queues(self):
        # all-zero queues: every gain is zero, nothing switches
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        base = Matching(g, frozenset({1}))
        out = run_control_part(g, [0, 0, 0], base, k=2, p=0.5, rng=random.Random(4))
        assert out.new_matching.members == base.members
