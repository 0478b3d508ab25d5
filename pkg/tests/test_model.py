"""Domain model: frames, snapshots, merging, and tree invariants."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snapgraph.errors import (
    CannotDeleteBase,
    EmptyDataset,
    NonContiguousRun,
    UnorderedTimestamps,
)
from snapgraph.model import (
    ChangeThresholds,
    NodeUniverse,
    Snapshot,
    TimestampedGraph,
    build_layer_zero,
    canonical_pair,
    merge_snapshots,
)

from conftest import make_frame, make_snapshot


class TestTimestampedGraph:
    def test_link_endpoint_must_be_present(self):
        with pytest.raises(ValueError, match="endpoint not present"):
            TimestampedGraph(
                timestamp=0.0,
                present_nodes=frozenset({0}),
                links=frozenset({(0, 1)}),
                positions={0: (0.0, 0.0)},
                speeds={0: 0.0},
            )

    def test_no_self_links(self):
        with pytest.raises(ValueError, match="self-link"):
            canonical_pair(2, 2)

    def test_positions_cover_exactly_present_nodes(self):
        with pytest.raises(ValueError, match="positions"):
            TimestampedGraph(
                timestamp=0.0,
                present_nodes=frozenset({0, 1}),
                links=frozenset(),
                positions={0: (0.0, 0.0)},
                speeds={0: 0.0, 1: 0.0},
            )

    def test_build_canonicalizes_links(self):
        frame = make_frame(0.0, {0: (0, 0), 1: (1, 1)}, links=[(1, 0)])
        assert frame.links == frozenset({(0, 1)})


class TestNodeUniverse:
    def test_ordinals_follow_entry_order(self):
        uni = NodeUniverse.from_entries([("a", "A"), ("b", "B"), ("c", "A")])
        assert [uni.ordinal(x) for x in "abc"] == [0, 1, 2]
        assert uni.node_id(1) == "b"
        assert uni.class_label(2) == "A"

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError, match="unique"):
            NodeUniverse.from_entries([("a", "A"), ("a", "B")])


class TestChangeThresholds:
    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            ChangeThresholds(-0.1, 0.0, 0.0)

    def test_zero_frame_cap_rejected(self):
        with pytest.raises(ValueError):
            ChangeThresholds(0.0, 0.0, 0.0, frame_count_max=0)

    def test_round_trips_through_dict(self):
        th = ChangeThresholds(0.1, 0.2, 0.5, frame_count_max=8)
        assert ChangeThresholds.from_dict(th.to_dict()) == th


class TestBuildLayerZero:
    def test_wraps_each_frame(self, three_frames):
        tree = build_layer_zero(three_frames)
        layer = tree.layer(0)
        assert len(layer) == 3
        assert [s.time_span for s in layer] == [(0.0, 0.0), (0.3, 0.3), (0.6, 0.6)]
        assert [s.frame_range for s in layer] == [(0, 1), (1, 2), (2, 3)]
        assert tree.lineage == {}

    def test_singleton(self):
        tree = build_layer_zero([make_frame(1.5, {0: (0, 0)})])
        assert tree.depth == 1
        assert tree.frame_count == 1

    def test_unordered_timestamps(self):
        frames = [make_frame(0.3, {0: (0, 0)}), make_frame(0.0, {0: (0, 0)})]
        with pytest.raises(UnorderedTimestamps):
            build_layer_zero(frames)

    def test_empty_dataset(self):
        with pytest.raises(EmptyDataset):
            build_layer_zero([])


class TestMergeSnapshots:
    def test_union_topology(self):
        # s1 nodes {A,B} link (A,B); s2 nodes {A,C} link (A,C)
        s1 = make_snapshot(
            [make_frame(0.0, {0: (0, 0), 1: (1, 0)}, links=[(0, 1)])], 0
        )
        s2 = make_snapshot(
            [make_frame(0.3, {0: (0, 0), 2: (2, 0)}, links=[(0, 2)])], 1
        )
        merged = merge_snapshots([s1, s2])
        assert merged.node_union == frozenset({0, 1, 2})
        assert merged.link_union == frozenset({(0, 1), (0, 2)})
        assert merged.link_counts == {(0, 1): 1, (0, 2): 1}
        assert merged.time_span == (0.0, 0.3)
        assert merged.frame_range == (0, 2)

    def test_single_merge_is_identity_up_to_id(self):
        snap = make_snapshot(
            [make_frame(0.0, {0: (0, 0), 1: (1, 0)}, links=[(0, 1)])], 4
        )
        merged = merge_snapshots([snap])
        assert merged.frames == snap.frames
        assert merged.node_union == snap.node_union
        assert merged.link_counts == snap.link_counts
        assert merged.time_span == snap.time_span
        assert merged.frame_range == snap.frame_range

    def test_repeated_link_counted(self):
        frames = [
            make_frame(0.0, {0: (0, 0), 1: (1, 0)}, links=[(0, 1)]),
            make_frame(0.3, {0: (0, 0), 1: (1, 0)}, links=[(0, 1)]),
        ]
        merged = merge_snapshots(
            [make_snapshot(frames[:1], 0), make_snapshot(frames[1:], 1)]
        )
        assert merged.link_counts[(0, 1)] == 2

    def test_non_contiguous_rejected(self):
        s1 = make_snapshot([make_frame(0.0, {0: (0, 0)})], 0)
        s3 = make_snapshot([make_frame(0.6, {0: (0, 0)})], 2)
        with pytest.raises(NonContiguousRun):
            merge_snapshots([s1, s3])

    def test_empty_run_rejected(self):
        with pytest.raises(EmptyDataset):
            merge_snapshots([])


# -- merge associativity over random frame runs ------------------------------

@st.composite
def frame_runs(draw):
    count = draw(st.integers(min_value=3, max_value=8))
    frames = []
    t = 0.0
    for _ in range(count):
        nodes = draw(st.sets(st.integers(0, 5), min_size=1, max_size=6))
        pool = sorted(nodes)
        links = set()
        if len(pool) > 1:
            for a, b in zip(pool, pool[1:]):
                if draw(st.booleans()):
                    links.add((a, b))
        frames.append(
            make_frame(t, {n: (float(n), 0.0) for n in nodes}, links=tuple(links))
        )
        t += draw(st.floats(min_value=0.1, max_value=1.0, allow_nan=False))
    return frames


@given(frame_runs())
@settings(max_examples=60, deadline=None)
def test_merge_is_associative_on_union_topology(frames):
    singles = [make_snapshot([f], i) for i, f in enumerate(frames)]
    flat = merge_snapshots(singles)
    left = merge_snapshots([merge_snapshots(singles[:2]), *singles[2:]])
    assert flat.node_union == left.node_union
    assert flat.link_union == left.link_union
    assert flat.link_counts == left.link_counts
    assert flat.time_span == left.time_span


class TestSnapshotTree:
    def test_append_layer_assigns_ids_and_lineage(self, simple_tree):
        base = simple_tree.top_layer
        merged = [merge_snapshots(base[:2]), base[2]]
        index = simple_tree.append_layer(merged, ChangeThresholds(1, 1, 1))
        assert index == 1
        top = simple_tree.top_layer
        assert [s.id for s in top] == ["s1_0", "s1_1"]
        assert simple_tree.lineage == {
            "s1_0": ["s0_0", "s0_1"],
            "s1_1": ["s0_2"],
        }
        simple_tree.validate()

    def test_frame_count_conserved(self, simple_tree):
        merged = [merge_snapshots(simple_tree.top_layer)]
        simple_tree.append_layer(merged, ChangeThresholds(1, 1, 1))
        assert sum(s.frame_count for s in simple_tree.layer(1)) == 3
        simple_tree.validate()

    def test_remove_top_layer(self, simple_tree):
        simple_tree.append_layer(
            [merge_snapshots(simple_tree.top_layer)], ChangeThresholds(1, 1, 1)
        )
        simple_tree.remove_top_layer()
        assert simple_tree.depth == 1
        assert simple_tree.lineage == {}

    def test_base_layer_not_deletable(self, simple_tree):
        with pytest.raises(CannotDeleteBase):
            simple_tree.remove_top_layer()

    def test_gapped_layer_rejected(self, simple_tree):
        base = simple_tree.top_layer
        with pytest.raises(ValueError):
            simple_tree.append_layer(
                [base[0], base[2]], ChangeThresholds(1, 1, 1)
            )

    def test_digest_stable_and_content_sensitive(self, three_frames):
        a = build_layer_zero(three_frames)
        b = build_layer_zero(three_frames)
        assert a.digest() == b.digest()
        b.append_layer([merge_snapshots(b.top_layer)], ChangeThresholds(1, 1, 1))
        assert a.digest() != b.digest()

    def test_multi_frame_base_snapshot_rejected(self, three_frames):
        from snapgraph.model import SnapshotTree

        wide = Snapshot.from_frames("w", three_frames, 0)
        with pytest.raises(ValueError):
            SnapshotTree([wide])
