"""File-backed persistence for datasets and sessions, plus view aggregates.

Datasets persist as their raw input files plus a config; ids are content
digests, so re-uploading identical inputs lands on the same dataset.
Sessions persist as a JSON operation log and are rebuilt by replay, which
keeps every tree reproducible from files alone (no database).
"""

from __future__ import annotations

import io
import json
import secrets
import threading
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from statistics import median
from typing import Mapping, Sequence

from .engine import GenerationSession
from .errors import (
    NonContiguousSelection,
    RangeInvalid,
    UnknownDataset,
    UnknownSession,
)
from .features import CombinedVector, vectorize
from .ingest import (
    DatasetConfig,
    EventRecord,
    attach_links,
    induce_links,
    parse_events,
    parse_links,
    parse_tracking,
)
from .model import NodeUniverse, TimestampedGraph
from .serialize import canonical_json, sha256_hex, universe_to_dict


@dataclass
class LoadedDataset:
    """A parsed dataset held in memory, with lazily computed vectors."""

    id: str
    name: str
    config: DatasetConfig
    universe: NodeUniverse
    frames: list[TimestampedGraph]
    events: list[EventRecord]
    file_digests: dict[str, str]

    @cached_property
    def vectors(self) -> list[CombinedVector]:
        from .model import Snapshot

        return [
            vectorize(Snapshot.from_frames(f"f{i}", [frame], i), self.universe)
            for i, frame in enumerate(self.frames)
        ]

    @property
    def granularity(self) -> float:
        deltas = [
            b.timestamp - a.timestamp for a, b in zip(self.frames, self.frames[1:])
        ]
        return float(median(deltas)) if deltas else 0.0

    def descriptor(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "frame_count": len(self.frames),
            "node_universe": universe_to_dict(self.universe),
            "time_range": [
                self.frames[0].timestamp,
                self.frames[-1].timestamp,
            ],
            "granularity": self.granularity,
            "event_count": len(self.events),
            "file_digests": dict(self.file_digests),
        }

    def check_range(self, frame_from: int, frame_to: int) -> None:
        if not (0 <= frame_from <= frame_to < len(self.frames)):
            raise RangeInvalid(
                f"frames [{frame_from}, {frame_to}] outside dataset of "
                f"{len(self.frames)}"
            )


def build_dataset(
    dataset_id: str,
    name: str,
    tracking_text: str,
    links_text: str | None,
    events_text: str | None,
    config: DatasetConfig,
) -> LoadedDataset:
    """Parse raw file contents into a fully linked dataset."""
    universe, frames = parse_tracking(io.StringIO(tracking_text), config)
    if links_text is not None:
        frames = attach_links(frames, parse_links(io.StringIO(links_text)), universe)
    else:
        frames = induce_links(frames, config.inducer, universe)
    events = parse_events(io.StringIO(events_text)) if events_text else []
    digests = {"tracking": sha256_hex(tracking_text)}
    if links_text is not None:
        digests["links"] = sha256_hex(links_text)
    if events_text is not None:
        digests["events"] = sha256_hex(events_text)
    return LoadedDataset(
        id=dataset_id,
        name=name,
        config=config,
        universe=universe,
        frames=frames,
        events=events,
        file_digests=digests,
    )


def dataset_digest(
    tracking_text: str,
    links_text: str | None,
    events_text: str | None,
    config: DatasetConfig,
) -> str:
    payload = canonical_json(
        {
            "tracking": sha256_hex(tracking_text),
            "links": None if links_text is None else sha256_hex(links_text),
            "events": None if events_text is None else sha256_hex(events_text),
            "config": config.to_dict(),
        }
    )
    return sha256_hex(payload)[:12]


class DatasetStore:
    """Datasets under ``data_dir/datasets/<id>/`` (raw files + config)."""

    def __init__(self, data_dir: Path):
        self.root = Path(data_dir) / "datasets"
        self.root.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, LoadedDataset] = {}
        self._lock = threading.Lock()

    def create(
        self,
        tracking_text: str,
        links_text: str | None = None,
        events_text: str | None = None,
        config: DatasetConfig | None = None,
        name: str = "dataset",
    ) -> LoadedDataset:
        config = config or DatasetConfig()
        dataset_id = dataset_digest(tracking_text, links_text, events_text, config)
        with self._lock:
            if dataset_id in self._cache:
                return self._cache[dataset_id]
            dataset = build_dataset(
                dataset_id, name, tracking_text, links_text, events_text, config
            )
            directory = self.root / dataset_id
            directory.mkdir(parents=True, exist_ok=True)
            (directory / "tracking.csv").write_text(tracking_text, encoding="utf-8")
            if links_text is not None:
                (directory / "links.csv").write_text(links_text, encoding="utf-8")
            if events_text is not None:
                (directory / "events.csv").write_text(events_text, encoding="utf-8")
            _write_json(
                directory / "meta.json",
                {"name": name, "config": config.to_dict()},
            )
            self._cache[dataset_id] = dataset
            return dataset

    def get(self, dataset_id: str) -> LoadedDataset:
        with self._lock:
            if dataset_id in self._cache:
                return self._cache[dataset_id]
            directory = self.root / dataset_id
            if not (directory / "tracking.csv").exists():
                raise UnknownDataset(f"no dataset {dataset_id!r}")
            meta = json.loads((directory / "meta.json").read_text(encoding="utf-8"))
            links_path = directory / "links.csv"
            events_path = directory / "events.csv"
            dataset = build_dataset(
                dataset_id,
                meta.get("name", "dataset"),
                (directory / "tracking.csv").read_text(encoding="utf-8"),
                links_path.read_text(encoding="utf-8") if links_path.exists() else None,
                events_path.read_text(encoding="utf-8") if events_path.exists() else None,
                DatasetConfig.from_dict(meta.get("config", {})),
            )
            self._cache[dataset_id] = dataset
            return dataset

    def list_ids(self) -> list[str]:
        stored = {p.name for p in self.root.iterdir() if p.is_dir()}
        return sorted(stored | set(self._cache))


@dataclass
class SessionRecord:
    """One live session: engine state plus its persistence coordinates."""

    id: str
    dataset_id: str
    selection: tuple[int, int]
    session: GenerationSession


def resolve_selection(
    selection: Mapping, frame_count: int
) -> tuple[int, int]:
    """Normalize a frame range or frame-id list to an inclusive (from, to).

    Frame-id lists must be contiguous; the service only supports interval
    selections (scatter brushes over time windows).
    """
    if "frame_ids" in selection and selection["frame_ids"] is not None:
        ids = [int(i) for i in selection["frame_ids"]]
        if not ids:
            raise NonContiguousSelection("empty frame selection")
        ordered = sorted(ids)
        if ordered != list(range(ordered[0], ordered[-1] + 1)):
            raise NonContiguousSelection("frame ids do not form a contiguous range")
        frame_from, frame_to = ordered[0], ordered[-1]
    else:
        try:
            frame_from = int(selection["from_frame"])
            frame_to = int(selection["to_frame"])
        except (KeyError, TypeError, ValueError):
            raise NonContiguousSelection(
                "selection needs from_frame/to_frame or frame_ids"
            ) from None
    if frame_from > frame_to:
        raise NonContiguousSelection(f"empty range [{frame_from}, {frame_to}]")
    if frame_from < 0 or frame_to >= frame_count:
        raise RangeInvalid(
            f"selection [{frame_from}, {frame_to}] outside dataset of {frame_count}"
        )
    return frame_from, frame_to


class SessionStore:
    """Sessions under ``data_dir/sessions/<id>.json`` as replayable logs."""

    def __init__(self, data_dir: Path, datasets: DatasetStore):
        self.root = Path(data_dir) / "sessions"
        self.root.mkdir(parents=True, exist_ok=True)
        self.datasets = datasets
        self._cache: dict[str, SessionRecord] = {}
        self._lock = threading.Lock()

    def create(self, dataset_id: str, selection: Mapping) -> SessionRecord:
        dataset = self.datasets.get(dataset_id)
        frame_from, frame_to = resolve_selection(selection, len(dataset.frames))
        session_id = secrets.token_hex(8)
        record = SessionRecord(
            id=session_id,
            dataset_id=dataset_id,
            selection=(frame_from, frame_to),
            session=GenerationSession(
                dataset.universe,
                dataset.frames[frame_from : frame_to + 1],
                start_index=frame_from,
            ),
        )
        with self._lock:
            self._cache[session_id] = record
        self._persist(record)
        return record

    def get(self, session_id: str) -> SessionRecord:
        with self._lock:
            if session_id in self._cache:
                return self._cache[session_id]
        path = self.root / f"{session_id}.json"
        if not path.exists():
            raise UnknownSession(f"no session {session_id!r}")
        log = json.loads(path.read_text(encoding="utf-8"))
        dataset = self.datasets.get(log["dataset_id"])
        frame_from, frame_to = log["selection"]
        record = SessionRecord(
            id=session_id,
            dataset_id=log["dataset_id"],
            selection=(frame_from, frame_to),
            session=GenerationSession.replay(
                dataset.universe,
                dataset.frames[frame_from : frame_to + 1],
                log["history"],
                start_index=frame_from,
            ),
        )
        with self._lock:
            self._cache[session_id] = record
        return record

    def persist(self, record: SessionRecord) -> None:
        self._persist(record)

    def _persist(self, record: SessionRecord) -> None:
        _write_json(
            self.root / f"{record.id}.json",
            {
                "schema_version": "1",
                "dataset_id": record.dataset_id,
                "selection": list(record.selection),
                "history": record.session.history_dicts(),
            },
        )


def _write_json(path: Path, payload) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    tmp.replace(path)


# -- view aggregates -----------------------------------------------------------

def matrix_aggregate(
    dataset: LoadedDataset, frame_from: int, frame_to: int
) -> dict:
    """Per-pair link occurrence counts over an inclusive frame range."""
    dataset.check_range(frame_from, frame_to)
    counts: dict[tuple[int, int], int] = {}
    for frame in dataset.frames[frame_from : frame_to + 1]:
        for pair in frame.links:
            counts[pair] = counts.get(pair, 0) + 1
    return {
        "frame_range": [frame_from, frame_to],
        "nodes": universe_to_dict(dataset.universe),
        "pairs": [
            {"a": a, "b": b, "count": counts[(a, b)]}
            for a, b in sorted(counts)
        ],
    }


def link_membership(
    dataset: LoadedDataset, a: int, b: int, frame_from: int, frame_to: int
) -> list[int]:
    """Frame indices (within the range) whose links contain the pair."""
    dataset.check_range(frame_from, frame_to)
    if a > b:
        a, b = b, a
    return [
        i
        for i in range(frame_from, frame_to + 1)
        if (a, b) in dataset.frames[i].links
    ]


def node_membership(
    dataset: LoadedDataset, node: int, frame_from: int, frame_to: int
) -> list[int]:
    """Frame indices (within the range) in which the node is present."""
    dataset.check_range(frame_from, frame_to)
    return [
        i
        for i in range(frame_from, frame_to + 1)
        if node in dataset.frames[i].present_nodes
    ]


def score_timeline(events: Sequence[EventRecord]) -> list[dict]:
    """(timestamp, score_a - score_b) points for the lead area chart."""
    return [
        {"timestamp": ev.timestamp, "lead": ev.score_a - ev.score_b}
        for ev in events
    ]
