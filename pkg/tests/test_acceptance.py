"""Acceptance gate: one test per criterion, one PASS line per criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines.  Every oracle here is a separate minimal implementation that shares
no code with the package modules it checks.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from snapgraph.engine import GenerationSession, change_degrees, generate_layer
from snapgraph.errors import (
    CannotDeleteBase,
    EmptyDataset,
    EmptySnapshot,
    UnorderedTimestamps,
)
from snapgraph.features import (
    graph_stability,
    link_stability,
    snapshot_indicators,
    vectorize,
)
from snapgraph.ingest import DatasetConfig, LinkInducerConfig, induce_links, parse_tracking
from snapgraph.model import (
    ChangeThresholds,
    NodeUniverse,
    Snapshot,
    TimestampedGraph,
    build_layer_zero,
)
from snapgraph.projection import ProjectionConfig, embed


def report(criterion: str, detail: str = "") -> None:
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE PASS - {criterion}{suffix}")


def close(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


# -- randomized snapshot generation (shared by criteria 2 and 4) ---------------

def random_frame(rng: np.random.Generator, universe_size: int, t: float,
                 max_links: int = 20) -> TimestampedGraph:
    node_count = int(rng.integers(1, universe_size + 1))
    nodes = sorted(rng.choice(universe_size, size=node_count, replace=False).tolist())
    positions = {
        n: (float(rng.uniform(0, 94)), float(rng.uniform(0, 50))) for n in nodes
    }
    speeds = {n: float(rng.uniform(0, 15)) for n in nodes}
    pairs = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]]
    links = []
    if pairs:
        want = int(rng.integers(0, min(len(pairs), max_links) + 1))
        chosen = rng.choice(len(pairs), size=want, replace=False)
        links = [pairs[i] for i in chosen]
    return TimestampedGraph.build(t, positions, speeds, links)


def random_snapshot(rng, universe_size, start_index, t0) -> Snapshot:
    frame_count = int(rng.integers(1, 4))
    frames = [
        random_frame(rng, universe_size, t0 + 0.3 * k) for k in range(frame_count)
    ]
    return Snapshot.from_frames(f"r{start_index}", frames, start_index)


# -- independent oracles (no shared code with the package) ---------------------

def oracle_link_stability(v1, v2, d, eps):
    return 1.0 / (v1 + v2 + d + eps)


def oracle_distance(p, q):
    return math.sqrt((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2)


def oracle_graph_stability(snap: Snapshot, eps: float) -> float:
    n = len(snap.node_union)
    m = len(snap.link_union)
    speed_total = 0.0
    for node in snap.node_union:
        samples = [f.speeds[node] for f in snap.frames if node in f.present_nodes]
        speed_total += sum(samples) / len(samples)
    distance_total = 0.0
    for a, b in snap.link_union:
        samples = [
            oracle_distance(f.positions[a], f.positions[b])
            for f in snap.frames
            if (a, b) in f.links
        ]
        distance_total += sum(samples) / len(samples)
    return (m * m * speed_total) / (n * distance_total + eps)


def oracle_hot_vectors(snap: Snapshot, universe_size: int):
    node_vec = np.zeros(universe_size)
    for node in snap.node_union:
        node_vec[node] = 1.0
    adjacency = np.zeros((universe_size, universe_size))
    for a, b in snap.link_union:
        adjacency[a, b] = adjacency[b, a] = 1.0
    link_vec = adjacency[np.triu_indices(universe_size, k=1)]
    return node_vec, link_vec


def oracle_change_degrees(s1: Snapshot, s2: Snapshot, universe_size: int):
    n1, l1 = oracle_hot_vectors(s1, universe_size)
    n2, l2 = oracle_hot_vectors(s2, universe_size)
    node_change = float(np.abs(n2 - n1).sum()) / max(len(s1.node_union), 1)
    link_change = float(np.abs(l2 - l1).sum()) / max(len(s1.link_union), 1)
    time_gap = abs(s2.frames[0].timestamp - s1.frames[-1].timestamp)
    return node_change, link_change, time_gap


def oracle_segment(frames, th: ChangeThresholds, universe_size: int) -> list[int]:
    """Greedy reference merger rebuilding union vectors from scratch."""

    def union_vectors(chunk):
        nodes = set()
        adjacency = np.zeros((universe_size, universe_size))
        for frame in chunk:
            nodes |= set(frame.present_nodes)
            for a, b in frame.links:
                adjacency[a, b] = adjacency[b, a] = 1.0
        node_vec = np.zeros(universe_size)
        for n in nodes:
            node_vec[n] = 1.0
        return node_vec, adjacency[np.triu_indices(universe_size, k=1)]

    boundaries = []
    current = [frames[0]]
    for frame in frames[1:]:
        nv_cur, lv_cur = union_vectors(current)
        nv_nxt, lv_nxt = union_vectors([frame])
        node_change = np.abs(nv_nxt - nv_cur).sum() / max(int(nv_cur.sum()), 1)
        link_change = np.abs(lv_nxt - lv_cur).sum() / max(int(lv_cur.sum()), 1)
        gap = abs(frame.timestamp - current[-1].timestamp)
        mergeable = (
            node_change <= th.node_change_max
            and link_change <= th.link_change_max
            and gap <= th.time_gap_max
            and (th.frame_count_max is None or len(current) + 1 <= th.frame_count_max)
        )
        if mergeable:
            current.append(frame)
        else:
            boundaries.append(len(current))
            current = [frame]
    boundaries.append(len(current))
    return boundaries


def acceptance_universe(n: int) -> NodeUniverse:
    return NodeUniverse.from_entries(
        (f"P{i}", "A" if i < (n + 1) // 2 else "B") for i in range(n)
    )


# -- criteria -------------------------------------------------------------------

def test_c1_vector_shape_21_players():
    universe = acceptance_universe(21)
    frame = TimestampedGraph.build(
        0.0,
        {i: (float(2 * i), 10.0) for i in range(10)},
        {i: 1.0 for i in range(10)},
        [(0, 1), (2, 3)],
    )
    vec = vectorize(Snapshot.from_frames("s", [frame], 0), universe)
    assert len(vec) == 231
    assert vec.node_vec.shape[0] == 21
    assert vec.link_vec.shape[0] == 210
    report("vector shape", "21 nodes -> combined length 231")


def test_c2_formula_oracle_equivalence():
    rng = np.random.default_rng(20250810)
    universe_size = 10
    universe = acceptance_universe(universe_size)
    eps = 1e-6
    started = time.perf_counter()
    snapshots = []
    cursor = 0
    for i in range(1000):
        snap = random_snapshot(rng, universe_size, cursor, t0=0.3 * cursor)
        cursor += snap.frame_count
        snapshots.append(snap)
    checked = 0
    for snap in snapshots:
        # link stability on every link of the first frame
        frame = snap.frames[0]
        for a, b in frame.links:
            expected = oracle_link_stability(
                frame.speeds[a],
                frame.speeds[b],
                oracle_distance(frame.positions[a], frame.positions[b]),
                eps,
            )
            got = link_stability(
                frame.speeds[a],
                frame.speeds[b],
                math.dist(frame.positions[a], frame.positions[b]),
                eps,
            )
            assert close(got, expected)
            checked += 1
        assert close(graph_stability(snap, eps), oracle_graph_stability(snap, eps))
    for s1, s2 in zip(snapshots, snapshots[1:]):
        expected = oracle_change_degrees(s1, s2, universe_size)
        got = change_degrees(s1, s2, universe)
        assert close(got.node_change, expected[0])
        assert close(got.link_change, expected[1])
        assert close(got.time_gap, expected[2])
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"oracle equivalence took {elapsed:.2f}s"
    report(
        "formula oracle equivalence",
        f"1000 snapshots, {checked} link checks, {elapsed:.2f}s",
    )


def test_c3_greedy_merge_oracle():
    rng = np.random.default_rng(42)
    universe_size = 6
    universe = acceptance_universe(universe_size)
    threshold_pool = [0.0, 0.2, 1 / 3, 0.5, 2 / 3, 1.0, 1.5, 3.0]
    gap_pool = [0.0, 0.1, 0.3, 0.5, 2.0]
    cap_pool = [None, 2, 3, 8, 50]
    started = time.perf_counter()
    for case in range(1000):
        count = int(rng.integers(1, 51))
        frames = []
        t = 0.0
        for _ in range(count):
            frames.append(random_frame(rng, universe_size, t, max_links=8))
            t += float(rng.choice([0.1, 0.3, 0.3, 0.6]))
        th = ChangeThresholds(
            node_change_max=float(rng.choice(threshold_pool)),
            link_change_max=float(rng.choice(threshold_pool)),
            time_gap_max=float(rng.choice(gap_pool)),
            frame_count_max=cap_pool[int(rng.integers(0, len(cap_pool)))],
        )
        layer = build_layer_zero(frames).top_layer
        engine_runs = [s.frame_count for s in generate_layer(layer, th, universe)]
        assert engine_runs == oracle_segment(frames, th, universe_size), (
            f"case {case}: thresholds {th}"
        )
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"greedy merge oracle took {elapsed:.2f}s"
    report("greedy merge oracle", f"1000 sequences, {elapsed:.2f}s")


def test_c4_conservation_suite():
    rng = np.random.default_rng(7)
    universe_size = 5
    universe = acceptance_universe(universe_size)
    datasets = []
    for _ in range(25):
        count = int(rng.integers(4, 10))
        frames = []
        t = 0.0
        for _ in range(count):
            frames.append(random_frame(rng, universe_size, t, max_links=6))
            t += float(rng.choice([0.3, 0.3, 1.0]))
        datasets.append(frames)
    threshold_pool = [0.0, 0.25, 0.5, 1.0, 2.0]
    started = time.perf_counter()
    sequences = 10_000
    op_counts = {"generate": 0, "delete": 0, "regenerate": 0}
    for run in range(sequences):
        frames = datasets[run % len(datasets)]
        session = GenerationSession(universe, frames)
        base_frames = session.tree.frame_count
        for _ in range(int(rng.integers(2, 5))):
            roll = rng.random()
            thresholds = ChangeThresholds(
                float(rng.choice(threshold_pool)),
                float(rng.choice(threshold_pool)),
                float(rng.choice([0.3, 1.0, 5.0])),
                frame_count_max=None if rng.random() < 0.7 else 3,
            )
            if roll < 0.5 or session.tree.depth == 1:
                session.generate(thresholds)
                op_counts["generate"] += 1
            elif roll < 0.75:
                session.delete_top()
                op_counts["delete"] += 1
            else:
                session.regenerate_top(thresholds)
                op_counts["regenerate"] += 1
            # timestamp conservation, contiguity, single-child lineage
            session.tree.validate()
            assert session.tree.frame_count == base_frames
        replayed = GenerationSession.replay(
            universe, frames, session.history_dicts()
        )
        assert replayed.tree.digest() == session.tree.digest()
    elapsed = time.perf_counter() - started
    report(
        "conservation suite",
        f"{sequences} op sequences {op_counts}, {elapsed:.1f}s",
    )


def synthesize_tracking(frame_count: int, on_court: int, roster: int) -> str:
    """Random-walk tracking CSV: ``roster`` players, ``on_court`` per frame."""
    rng = np.random.default_rng(99)
    rows = ["timestamp,player_id,team,x,y"]
    active = list(range(on_court))
    positions = rng.uniform([5, 5], [89, 45], size=(roster, 2))
    swap_every = max(1, frame_count // 40)
    for k in range(frame_count):
        t = round(0.3 * k, 4)
        if k % swap_every == 0 and k:
            bench = [p for p in range(roster) if p not in active]
            slot = int(rng.integers(0, on_court))
            active[slot] = bench[int(rng.integers(0, len(bench)))]
        step = rng.normal(0, 1.2, size=(roster, 2))
        positions = np.clip(positions + step, [0, 0], [94, 50])
        for player in active:
            x, y = positions[player]
            team = "A" if player < roster // 2 else "B"
            rows.append(f"{t},p{player:02d},{team},{x:.3f},{y:.3f}")
    return "\n".join(rows) + "\n"


def test_c5_scale_check():
    frame_count = 8000
    csv_text = synthesize_tracking(frame_count, on_court=10, roster=21)

    import io

    started = time.perf_counter()
    universe, frames = parse_tracking(io.StringIO(csv_text), DatasetConfig())
    frames = induce_links(
        frames, LinkInducerConfig(mode="proximity", proximity_radius=10.0), universe
    )
    tree = build_layer_zero(frames)
    vectors = [vectorize(snap, universe) for snap in tree.top_layer]
    indicator_list = [snapshot_indicators(snap) for snap in tree.top_layer]
    ingest_features_elapsed = time.perf_counter() - started

    assert len(frames) == frame_count
    assert all(len(f.present_nodes) == 10 for f in frames)
    assert len(vectors) == frame_count and len(indicator_list) == frame_count
    assert ingest_features_elapsed < 10.0, (
        f"ingest+features took {ingest_features_elapsed:.2f}s"
    )

    thresholds = ChangeThresholds(0.2, 0.3, 1.0, frame_count_max=64)
    started = time.perf_counter()
    merged = generate_layer(tree.top_layer, thresholds, universe)
    generate_elapsed = time.perf_counter() - started
    assert generate_elapsed < 2.0, f"generate_layer took {generate_elapsed:.2f}s"
    assert len(merged) < frame_count
    total_links = sum(len(f.links) for f in frames)
    report(
        "scale check",
        f"ingest+features {ingest_features_elapsed:.2f}s, "
        f"generate {generate_elapsed:.2f}s, {total_links} links, "
        f"{len(merged)} snapshots",
    )


def test_c6_tsne_sanity():
    rng = np.random.default_rng(7)
    centers = np.array([[0.0] * 20, [30.0] * 20, [-30.0] * 20])
    points = np.vstack([rng.normal(c, 1.0, size=(50, 20)) for c in centers])
    labels = np.repeat([0, 1, 2], 50)
    cfg = ProjectionConfig(perplexity=30, iterations=500, seed=42)

    coords, kl_initial, kl_final = embed(points, cfg)
    distances = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(-1)
    np.fill_diagonal(distances, np.inf)
    neighbors = np.argsort(distances, axis=1)[:, :10]
    purity = float((labels[neighbors] == labels[:, None]).mean())
    assert purity >= 0.9, f"purity {purity:.3f}"
    assert kl_final <= kl_initial

    repeat, _, _ = embed(points, cfg)
    assert np.array_equal(coords, repeat), "same-seed runs must be bit-identical"

    large = (rng.random((2000, 231)) < 0.3).astype(float)
    started = time.perf_counter()
    embed(large, ProjectionConfig(perplexity=30, iterations=500, seed=1))
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"2000-point run took {elapsed:.1f}s"
    report(
        "t-SNE sanity",
        f"purity {purity:.3f}, KL {kl_initial:.3f}->{kl_final:.3f}, "
        f"2000pts in {elapsed:.1f}s",
    )


def test_c7_degenerate_inputs():
    universe = acceptance_universe(4)
    # empty-link frames flow through vectors, indicators, and merging
    lonely = [
        TimestampedGraph.build(0.3 * k, {0: (1.0, 1.0), 1: (50.0, 40.0)}, {0: 0.0, 1: 0.0})
        for k in range(3)
    ]
    tree = build_layer_zero(lonely)
    merged = generate_layer(tree.top_layer, ChangeThresholds(1, 1, 1), universe)
    assert len(merged) == 1
    ind = merged[0].indicators
    assert ind.avg_link_distance == 0.0 and ind.graph_stability == 0.0

    # single-frame selection
    single = GenerationSession(universe, lonely[:1])
    single.generate(ChangeThresholds(0, 0, 0))
    assert [s.frame_count for s in single.tree.top_layer] == [1]

    # zero thresholds leave the layer untouched
    session = GenerationSession(universe, lonely)
    session.generate(ChangeThresholds(0, 0, 0))
    assert len(session.tree.top_layer) == 3

    # threshold-boundary equality merges (inclusive gates)
    a = TimestampedGraph.build(0.0, {0: (0, 0), 1: (5, 0)}, {0: 0.0, 1: 0.0}, [(0, 1)])
    b = TimestampedGraph.build(0.3, {0: (0, 0), 2: (9, 0)}, {0: 0.0, 2: 0.0}, [(0, 2)])
    pair_layer = build_layer_zero([a, b]).top_layer
    degrees = change_degrees(pair_layer[0], pair_layer[1], universe)
    at_boundary = ChangeThresholds(
        degrees.node_change, degrees.link_change, degrees.time_gap
    )
    assert len(generate_layer(pair_layer, at_boundary, universe)) == 1

    # documented errors, not panics
    with pytest.raises(EmptyDataset):
        build_layer_zero([])
    with pytest.raises(UnorderedTimestamps):
        build_layer_zero([lonely[1], lonely[0]])
    with pytest.raises(CannotDeleteBase):
        GenerationSession(universe, lonely).delete_top()
    empty_frame = TimestampedGraph.build(0.0, {}, {})
    with pytest.raises(EmptySnapshot):
        snapshot_indicators(Snapshot.from_frames("e", [empty_frame], 0))
    report("degenerate inputs", "empty links, singletons, zero/boundary gates")
