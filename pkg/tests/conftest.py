"""Shared builders for universes, frames, and snapshots."""

from __future__ import annotations

import pytest

from snapgraph.model import (
    NodeUniverse,
    Snapshot,
    TimestampedGraph,
    build_layer_zero,
)


def make_universe(n: int = 4) -> NodeUniverse:
    """n players named P0..P{n-1}; even ordinals team A, odd team B."""
    return NodeUniverse.from_entries(
        (f"P{i}", "A" if i % 2 == 0 else "B") for i in range(n)
    )


def make_frame(
    t: float,
    positions: dict[int, tuple[float, float]],
    links: tuple = (),
    speeds: dict[int, float] | None = None,
) -> TimestampedGraph:
    if speeds is None:
        speeds = {node: 0.0 for node in positions}
    return TimestampedGraph.build(t, positions, speeds, links)


def make_snapshot(
    frames: list[TimestampedGraph], start_index: int = 0, id: str = "s"
) -> Snapshot:
    return Snapshot.from_frames(id, frames, start_index)


def fixture_tracking_text(phase_a: int = 2, phase_b: int = 1) -> str:
    """Two-phase synthetic game over players A,B (home) and C,D (away).

    Phase one: A-B sit 5 apart (linked at radius 10), C and D are far from
    everyone.  Phase two: B runs off (A-B unlinked) while C-D close to 2
    apart (linked).  Frames step by 0.3 s.
    """
    rows = ["timestamp,player_id,team,x,y"]
    t = 0.0
    for _ in range(phase_a):
        rows += [
            f"{t!r},A,home,0,0",
            f"{t!r},B,home,3,4",
            f"{t!r},C,away,50,10",
            f"{t!r},D,away,70,40",
        ]
        t = round(t + 0.3, 10)
    for _ in range(phase_b):
        rows += [
            f"{t!r},A,home,0,0",
            f"{t!r},B,home,30,30",
            f"{t!r},C,away,50,10",
            f"{t!r},D,away,52,10",
        ]
        t = round(t + 0.3, 10)
    return "\n".join(rows) + "\n"


def fixture_events_text() -> str:
    return (
        "timestamp,event_type,score_a,score_b,major_player,secondary_player\n"
        "0.3,score,2,0,A,B\n"
        "0.6,miss shot,2,0,C,\n"
        "0.9,score,2,2,D,C\n"
    )


@pytest.fixture
def universe4() -> NodeUniverse:
    return make_universe(4)


@pytest.fixture
def three_frames() -> list[TimestampedGraph]:
    return [
        make_frame(0.0, {0: (0.0, 0.0), 1: (3.0, 4.0)}, links=[(0, 1)]),
        make_frame(0.3, {0: (1.0, 0.0), 1: (3.0, 4.0)}, links=[(0, 1)]),
        make_frame(0.6, {0: (2.0, 0.0), 2: (10.0, 10.0)}),
    ]


@pytest.fixture
def simple_tree(three_frames):
    return build_layer_zero(three_frames)
