"""Parse tracking and play-by-play files into the domain model.

Tracking CSV: ``timestamp,player_id,team,x,y[,speed]`` (UTF-8, ``.`` decimal
separator), grouped by non-decreasing timestamp.  Links CSV (when link data
is provided): ``timestamp,player_a,player_b``.  Events CSV:
``timestamp,event_type,score_a,score_b,major_player,secondary_player`` with
optional trailing fields.  When the feed carries no link data, links are
induced from positions by a proximity rule.
"""

from __future__ import annotations

import csv
import io

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence, TextIO

from .errors import (
    MalformedRow,
    MissingPositions,
    NonMonotoneTimestamps,
    ScoreRegression,
    UnknownUnits,
)
from .features import link_distance
from .model import NodeUniverse, TimestampedGraph, canonical_pair

TRACKING_HEADER = ("timestamp", "player_id", "team", "x", "y")
LINKS_HEADER = ("timestamp", "player_a", "player_b")
EVENTS_HEADER = (
    "timestamp",
    "event_type",
    "score_a",
    "score_b",
    "major_player",
    "secondary_player",
)


@dataclass(frozen=True)
class TrackingRow:
    """One raw tracking sample before grouping into frames."""

    timestamp: float
    player_id: str
    team: str
    x: float
    y: float
    speed: float | None = None


@dataclass(frozen=True)
class EventRecord:
    """One play-by-play event with team scores and player roles."""

    timestamp: float
    event_type: str
    score_a: int
    score_b: int
    major_player: str | None = None
    secondary_player: str | None = None


@dataclass(frozen=True)
class LinkInducerConfig:
    """How frame links come to exist when the feed has no link data.

    ``provided`` leaves frames untouched (links arrive from a links file);
    ``proximity`` links two players whose distance is at most the radius,
    optionally only across teams.
    """

    mode: str = "proximity"
    proximity_radius: float = 10.0
    cross_team_only: bool = False

    def __post_init__(self):
        if self.mode not in ("provided", "proximity"):
            raise ValueError(f"unknown link inducer mode {self.mode!r}")
        if self.mode == "proximity" and self.proximity_radius <= 0:
            raise ValueError("proximity_radius must be positive")


@dataclass(frozen=True)
class DatasetConfig:
    """Per-dataset units and parsing knobs.

    Court dimensions default to an NBA court in feet (94 x 50); a config
    without court dimensions cannot validate coordinates and is rejected.
    """

    court_width: float | None = 94.0
    court_height: float | None = 50.0
    bounds_tolerance: float = 5.0
    inducer: LinkInducerConfig = field(default_factory=LinkInducerConfig)

    def to_dict(self) -> dict:
        return {
            "court_width": self.court_width,
            "court_height": self.court_height,
            "bounds_tolerance": self.bounds_tolerance,
            "inducer": {
                "mode": self.inducer.mode,
                "proximity_radius": self.inducer.proximity_radius,
                "cross_team_only": self.inducer.cross_team_only,
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "DatasetConfig":
        inducer = data.get("inducer", {})
        return cls(
            court_width=data.get("court_width", 94.0),
            court_height=data.get("court_height", 50.0),
            bounds_tolerance=float(data.get("bounds_tolerance", 5.0)),
            inducer=LinkInducerConfig(
                mode=inducer.get("mode", "proximity"),
                proximity_radius=float(inducer.get("proximity_radius", 10.0)),
                cross_team_only=bool(inducer.get("cross_team_only", False)),
            ),
        )


class ParsedTracking(NamedTuple):
    universe: NodeUniverse
    frames: list[TimestampedGraph]


def _rows(stream: TextIO | Iterable[str]):
    return csv.reader(stream)


def _check_header(row: list[str] | None, expected: tuple[str, ...], optional_tail=0):
    if row is None:
        raise MalformedRow(1, "missing header")
    got = tuple(cell.strip().lower() for cell in row)
    for width in range(len(expected) - optional_tail, len(expected) + 1):
        if got == expected[:width]:
            return len(got)
    raise MalformedRow(1, f"unexpected header {row!r}")


def parse_tracking(stream: TextIO | Iterable[str], config: DatasetConfig) -> ParsedTracking:
    """Group tracking rows into one frame per distinct timestamp.

    Speeds are taken from the feed when present, otherwise derived by finite
    difference against the previous frame; a player's first frame gets speed
    0.  Duplicate (timestamp, player) rows keep the last occurrence, since
    tracking feeds emit corrections.
    """
    if config.court_width is None or config.court_height is None:
        raise UnknownUnits("dataset config must define court dimensions")
    lo_x, hi_x = -config.bounds_tolerance, config.court_width + config.bounds_tolerance
    lo_y, hi_y = -config.bounds_tolerance, config.court_height + config.bounds_tolerance

    reader = _rows(stream)
    header = next(reader, None)
    _check_header(header, TRACKING_HEADER + ("speed",), optional_tail=1)

    universe_entries: list[tuple[str, str]] = []
    team_of: dict[str, str] = {}
    groups: list[tuple[float, dict[str, TrackingRow]]] = []

    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) not in (5, 6):
            raise MalformedRow(line_no, f"expected 5 or 6 fields, got {len(row)}")
        try:
            ts = float(row[0])
            x = float(row[3])
            y = float(row[4])
        except ValueError as exc:
            raise MalformedRow(line_no, str(exc)) from None
        player = row[1].strip()
        team = row[2].strip()
        if not player:
            raise MalformedRow(line_no, "empty player_id")
        speed: float | None = None
        if len(row) == 6 and row[5].strip():
            try:
                speed = float(row[5])
            except ValueError as exc:
                raise MalformedRow(line_no, str(exc)) from None
            if speed < 0:
                raise MalformedRow(line_no, f"negative speed {speed}")
        if not (lo_x <= x <= hi_x) or not (lo_y <= y <= hi_y):
            raise MalformedRow(line_no, f"position ({x},{y}) outside court bounds")
        if player in team_of:
            if team_of[player] != team:
                raise MalformedRow(
                    line_no, f"player {player} changed team {team_of[player]} -> {team}"
                )
        else:
            team_of[player] = team
            universe_entries.append((player, team))
        if groups and ts < groups[-1][0]:
            raise NonMonotoneTimestamps(
                f"line {line_no}: timestamp {ts} after {groups[-1][0]}"
            )
        if not groups or ts > groups[-1][0]:
            groups.append((ts, {}))
        groups[-1][1][player] = TrackingRow(ts, player, team, x, y, speed)

    universe = NodeUniverse.from_entries(universe_entries)
    frames: list[TimestampedGraph] = []
    previous: dict[int, tuple[float, float]] = {}
    previous_ts = 0.0
    for ts, by_player in groups:
        positions: dict[int, tuple[float, float]] = {}
        speeds: dict[int, float] = {}
        for player, sample in by_player.items():
            node = universe.ordinal(player)
            positions[node] = (sample.x, sample.y)
            if sample.speed is not None:
                speeds[node] = sample.speed
            elif node in previous:
                dt = ts - previous_ts
                speeds[node] = (
                    link_distance(previous[node], positions[node]) / dt if dt > 0 else 0.0
                )
            else:
                speeds[node] = 0.0
        frames.append(TimestampedGraph.build(ts, positions, speeds))
        previous = positions
        previous_ts = ts
    return ParsedTracking(universe, frames)


def induce_links(
    frames: Sequence[TimestampedGraph],
    cfg: LinkInducerConfig,
    universe: NodeUniverse,
) -> list[TimestampedGraph]:
    """Attach proximity links to every frame (or pass frames through).

    A link exists iff the Euclidean distance is at most the radius
    (inclusive) and, with ``cross_team_only``, the node classes differ.
    Symmetric by construction and never produces self-links.
    """
    if cfg.mode == "provided":
        return list(frames)
    out = []
    for frame in frames:
        nodes = sorted(frame.present_nodes)
        for node in nodes:
            if node not in frame.positions:
                raise MissingPositions(f"node {node} has no position")
        links = set()
        for i, a in enumerate(nodes):
            for b in nodes[i + 1 :]:
                if cfg.cross_team_only and (
                    universe.class_label(a) == universe.class_label(b)
                ):
                    continue
                if link_distance(frame.positions[a], frame.positions[b]) <= cfg.proximity_radius:
                    links.add((a, b))
        out.append(
            TimestampedGraph(
                timestamp=frame.timestamp,
                present_nodes=frame.present_nodes,
                links=frozenset(links),
                positions=frame.positions,
                speeds=frame.speeds,
            )
        )
    return out


def parse_links(
    stream: TextIO | Iterable[str],
) -> dict[float, list[tuple[str, str]]]:
    """Read a provided-links CSV into timestamp -> player-id pairs."""
    reader = _rows(stream)
    header = next(reader, None)
    if header is None:
        return {}
    _check_header(header, LINKS_HEADER)
    by_ts: dict[float, list[tuple[str, str]]] = {}
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise MalformedRow(line_no, f"expected 3 fields, got {len(row)}")
        try:
            ts = float(row[0])
        except ValueError as exc:
            raise MalformedRow(line_no, str(exc)) from None
        a, b = row[1].strip(), row[2].strip()
        if a == b:
            raise MalformedRow(line_no, f"self-link on {a}")
        by_ts.setdefault(ts, []).append((a, b))
    return by_ts


def attach_links(
    frames: Sequence[TimestampedGraph],
    links_by_ts: Mapping[float, Sequence[tuple[str, str]]],
    universe: NodeUniverse,
) -> list[TimestampedGraph]:
    """Attach provided links to the frames with matching timestamps."""
    frame_ts = {frame.timestamp for frame in frames}
    for ts in links_by_ts:
        if ts not in frame_ts:
            raise MalformedRow(0, f"link timestamp {ts} matches no frame")
    out = []
    for frame in frames:
        pairs = links_by_ts.get(frame.timestamp, ())
        links = set(frame.links)
        for a_id, b_id in pairs:
            try:
                pair = canonical_pair(universe.ordinal(a_id), universe.ordinal(b_id))
            except KeyError:
                raise MalformedRow(0, f"unknown player in link ({a_id},{b_id})") from None
            if pair[0] not in frame.present_nodes or pair[1] not in frame.present_nodes:
                raise MalformedRow(
                    0, f"link ({a_id},{b_id}) endpoint absent at t={frame.timestamp}"
                )
            links.add(pair)
        out.append(
            TimestampedGraph(
                timestamp=frame.timestamp,
                present_nodes=frame.present_nodes,
                links=frozenset(links),
                positions=frame.positions,
                speeds=frame.speeds,
            )
        )
    return out


def parse_events(stream: TextIO | Iterable[str]) -> list[EventRecord]:
    """Read play-by-play events, sorted by timestamp, scores validated.

    Scores must be non-negative and non-decreasing per team over the sorted
    sequence; an empty file yields an empty list.
    """
    reader = _rows(stream)
    header = next(reader, None)
    if header is None:
        return []
    _check_header(header, EVENTS_HEADER, optional_tail=2)
    parsed: list[tuple[float, int, EventRecord]] = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < 4 or len(row) > 6:
            raise MalformedRow(line_no, f"expected 4-6 fields, got {len(row)}")
        try:
            ts = float(row[0])
            score_a = int(row[2])
            score_b = int(row[3])
        except ValueError as exc:
            raise MalformedRow(line_no, str(exc)) from None
        if score_a < 0 or score_b < 0:
            raise MalformedRow(line_no, "scores must be non-negative")
        major = row[4].strip() if len(row) > 4 and row[4].strip() else None
        secondary = row[5].strip() if len(row) > 5 and row[5].strip() else None
        parsed.append(
            (
                ts,
                line_no,
                EventRecord(
                    timestamp=ts,
                    event_type=row[1].strip(),
                    score_a=score_a,
                    score_b=score_b,
                    major_player=major,
                    secondary_player=secondary,
                ),
            )
        )
    parsed.sort(key=lambda item: item[0])
    last_a, last_b = 0, 0
    for ts, line_no, event in parsed:
        if event.score_a < last_a or event.score_b < last_b:
            raise ScoreRegression(
                line_no,
                f"score dropped to {event.score_a}-{event.score_b} "
                f"from {last_a}-{last_b}",
            )
        last_a, last_b = event.score_a, event.score_b
    return [event for _, _, event in parsed]


def write_tracking(
    universe: NodeUniverse,
    frames: Sequence[TimestampedGraph],
    stream: TextIO | None = None,
) -> str:
    """Serialize frames back to tracking CSV (with the speed column).

    Rows are emitted in frame order, players in universe order, floats at
    full round-trip precision, so parse -> write -> parse is the identity.
    """
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRACKING_HEADER + ("speed",))
    for frame in frames:
        for node in sorted(frame.present_nodes):
            x, y = frame.positions[node]
            writer.writerow(
                [
                    repr(frame.timestamp),
                    universe.node_id(node),
                    universe.class_label(node),
                    repr(x),
                    repr(y),
                    repr(frame.speeds[node]),
                ]
            )
    return out.getvalue() if stream is None else ""
