"""Session-oriented JSON-over-HTTP API for datasets, features, and trees.

Endpoints mirror the analysis workflow: upload a dataset, read overview
aggregates (matrix, projection, events), open a session over a contiguous
frame selection, then grow/trim its snapshot tree interactively.  Responses
carry ``schema_version``; session reads carry an ETag over the tree digest
so unchanged sessions return identical bodies (or 304).
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, File, Form, Header, Query, Request, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import (
    CannotDeleteBase,
    ConfigError,
    DimensionMismatch,
    LayerNotTop,
    NonContiguousSelection,
    RangeInvalid,
    SnapgraphError,
    TooFewPoints,
    UnknownDataset,
    UnknownSession,
    UnknownSnapshot,
)
from .ingest import DatasetConfig
from .model import ChangeThresholds, Snapshot
from .projection import ProjectionConfig, project
from .serialize import (
    SCHEMA_VERSION,
    indicators_to_dict,
    projection_to_dict,
    snapshot_to_dict,
    tree_to_dict,
)
from .store import (
    DatasetStore,
    SessionRecord,
    SessionStore,
    link_membership,
    matrix_aggregate,
    node_membership,
    score_timeline,
)

_STATUS_BY_ERROR = (
    (UnknownDataset, 404),
    (UnknownSession, 404),
    (UnknownSnapshot, 404),
    (RangeInvalid, 416),
    (NonContiguousSelection, 422),
    (TooFewPoints, 422),
    (DimensionMismatch, 422),
    (ConfigError, 422),
    (CannotDeleteBase, 409),
    (LayerNotTop, 409),
)


def _status_for(error: SnapgraphError) -> int:
    for kind, status in _STATUS_BY_ERROR:
        if isinstance(error, kind):
            return status
    return 400  # ingest/model detail


class ThresholdsBody(BaseModel):
    node_change_max: float = Field(ge=0)
    link_change_max: float = Field(ge=0)
    time_gap_max: float = Field(ge=0)
    frame_count_max: int | None = Field(default=None, ge=1)

    def to_thresholds(self) -> ChangeThresholds:
        return ChangeThresholds(
            node_change_max=self.node_change_max,
            link_change_max=self.link_change_max,
            time_gap_max=self.time_gap_max,
            frame_count_max=self.frame_count_max,
        )


class LayerRequest(BaseModel):
    thresholds: ThresholdsBody
    from_layer: int | None = None
    regenerate: bool = False


class SessionRequest(BaseModel):
    dataset_id: str
    from_frame: int | None = None
    to_frame: int | None = None
    frame_ids: list[int] | None = None


def create_app(data_dir: str | Path) -> FastAPI:
    app = FastAPI(title="snapgraph service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag"],
    )
    datasets = DatasetStore(Path(data_dir))
    sessions = SessionStore(Path(data_dir), datasets)
    cache_dir = Path(data_dir) / "cache"
    cache_dir.mkdir(parents=True, exist_ok=True)

    @app.exception_handler(SnapgraphError)
    async def snapgraph_error_handler(request: Request, error: SnapgraphError):
        return JSONResponse(
            status_code=_status_for(error),
            content={
                "schema_version": SCHEMA_VERSION,
                "error": type(error).__name__,
                "detail": str(error),
            },
        )

    # -- datasets -------------------------------------------------------------

    @app.post("/datasets")
    async def upload_dataset(
        tracking: UploadFile = File(...),
        links: UploadFile | None = File(default=None),
        events: UploadFile | None = File(default=None),
        config: str | None = Form(default=None),
        name: str = Form(default="dataset"),
    ):
        cfg = (
            DatasetConfig.from_dict(json.loads(config))
            if config
            else DatasetConfig()
        )
        dataset = datasets.create(
            tracking_text=(await tracking.read()).decode("utf-8"),
            links_text=(await links.read()).decode("utf-8") if links else None,
            events_text=(await events.read()).decode("utf-8") if events else None,
            config=cfg,
            name=name,
        )
        return {"schema_version": SCHEMA_VERSION, **dataset.descriptor()}

    @app.get("/datasets")
    def list_datasets():
        return {"schema_version": SCHEMA_VERSION, "datasets": datasets.list_ids()}

    @app.get("/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        return {
            "schema_version": SCHEMA_VERSION,
            **datasets.get(dataset_id).descriptor(),
        }

    @app.get("/datasets/{dataset_id}/matrix")
    def get_matrix(
        dataset_id: str,
        frame_from: int | None = Query(default=None, alias="from"),
        frame_to: int | None = Query(default=None, alias="to"),
    ):
        dataset = datasets.get(dataset_id)
        lo = 0 if frame_from is None else frame_from
        hi = len(dataset.frames) - 1 if frame_to is None else frame_to
        return {
            "schema_version": SCHEMA_VERSION,
            **matrix_aggregate(dataset, lo, hi),
        }

    @app.get("/datasets/{dataset_id}/membership")
    def get_membership(
        dataset_id: str,
        node: int | None = Query(default=None),
        a: int | None = Query(default=None),
        b: int | None = Query(default=None),
        frame_from: int | None = Query(default=None, alias="from"),
        frame_to: int | None = Query(default=None, alias="to"),
    ):
        """Frame indices containing a node or a link (for linked highlighting)."""
        dataset = datasets.get(dataset_id)
        lo = 0 if frame_from is None else frame_from
        hi = len(dataset.frames) - 1 if frame_to is None else frame_to
        if node is not None:
            frames = node_membership(dataset, node, lo, hi)
        elif a is not None and b is not None:
            frames = link_membership(dataset, a, b, lo, hi)
        else:
            raise RangeInvalid("pass either ?node= or ?a=&b=")
        return {"schema_version": SCHEMA_VERSION, "frames": frames}

    @app.get("/datasets/{dataset_id}/projection")
    def get_projection(
        dataset_id: str,
        perplexity: float = Query(default=30.0),
        seed: int = Query(default=0),
        iters: int = Query(default=500),
    ):
        dataset = datasets.get(dataset_id)
        try:
            cfg = ProjectionConfig(perplexity=perplexity, iterations=iters, seed=seed)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        cache_path = cache_dir / f"projection-{dataset_id}-{cfg.cache_key()}.json"
        if cache_path.exists():
            return json.loads(cache_path.read_text(encoding="utf-8"))
        points = project(
            dataset.vectors,
            cfg,
            ids=[str(i) for i in range(len(dataset.frames))],
        )
        blob = json.dumps(projection_to_dict(points, cfg), sort_keys=True)
        cache_path.write_text(blob, encoding="utf-8")
        return json.loads(blob)

    @app.get("/datasets/{dataset_id}/events")
    def get_events(dataset_id: str):
        dataset = datasets.get(dataset_id)
        return {
            "schema_version": SCHEMA_VERSION,
            "timeline": score_timeline(dataset.events),
            "events": [
                {
                    "timestamp": ev.timestamp,
                    "event_type": ev.event_type,
                    "score_a": ev.score_a,
                    "score_b": ev.score_b,
                    "major_player": ev.major_player,
                    "secondary_player": ev.secondary_player,
                }
                for ev in dataset.events
            ],
        }

    # -- sessions ---------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionRequest):
        record = sessions.create(
            body.dataset_id,
            {
                "from_frame": body.from_frame,
                "to_frame": body.to_frame,
                "frame_ids": body.frame_ids,
            },
        )
        return _session_payload(record)

    @app.get("/sessions/{session_id}")
    def get_session(
        session_id: str,
        response: Response,
        if_none_match: str | None = Header(default=None),
    ):
        record = sessions.get(session_id)
        digest = record.session.tree.digest()
        if if_none_match == f'"{digest}"':
            return Response(status_code=304)
        response.headers["ETag"] = f'"{digest}"'
        return _session_payload(record)

    @app.post("/sessions/{session_id}/layers", status_code=201)
    def generate_layer_endpoint(session_id: str, body: LayerRequest):
        record = sessions.get(session_id)
        thresholds = body.thresholds.to_thresholds()
        if body.regenerate:
            index = record.session.regenerate_top(thresholds)
        else:
            index = record.session.generate(thresholds, from_layer=body.from_layer)
        sessions.persist(record)
        tree = record.session.tree
        return {
            "schema_version": SCHEMA_VERSION,
            "layer_index": index,
            "snapshots": [
                snapshot_to_dict(snap, include_indicators=True)
                for snap in tree.layer(index)
            ],
            "layer_digest": tree.layer_digest(index),
            "tree_digest": tree.digest(),
        }

    @app.delete("/sessions/{session_id}/layers/top")
    def delete_top_layer(session_id: str):
        record = sessions.get(session_id)
        record.session.delete_top()
        sessions.persist(record)
        tree = record.session.tree
        return {
            "schema_version": SCHEMA_VERSION,
            "top_layer": tree.top_index,
            "tree_digest": tree.digest(),
        }

    @app.get("/sessions/{session_id}/snapshots/{snapshot_id}")
    def get_snapshot(session_id: str, snapshot_id: str):
        record = sessions.get(session_id)
        snap = record.session.tree.find_snapshot(snapshot_id)
        if snap is None:
            raise UnknownSnapshot(f"no snapshot {snapshot_id!r} in session")
        return {
            "schema_version": SCHEMA_VERSION,
            **snapshot_detail(snap, record),
        }

    return app


def _session_payload(record: SessionRecord) -> dict:
    tree = record.session.tree
    return {
        "schema_version": SCHEMA_VERSION,
        "session_id": record.id,
        "dataset_id": record.dataset_id,
        "selection": list(record.selection),
        "tree": tree_to_dict(tree, history=record.session.history_dicts()),
    }


def snapshot_detail(snap: Snapshot, record: SessionRecord) -> dict:
    """Drill-down payload: trajectories, link counts, per-entity series.

    Trajectory segments connect a node's consecutive positions; segment
    speed is the speed at the arrival frame (paths render wider when
    faster).  Series carry one value per frame, null where the node or link
    is absent.
    """
    trajectories = []
    for node in sorted(snap.node_union):
        segments = []
        for prev, nxt in zip(snap.frames, snap.frames[1:]):
            if node in prev.present_nodes and node in nxt.present_nodes:
                segments.append(
                    {
                        "t0": prev.timestamp,
                        "t1": nxt.timestamp,
                        "from": list(prev.positions[node]),
                        "to": list(nxt.positions[node]),
                        "speed": nxt.speeds[node],
                    }
                )
        trajectories.append({"node": node, "segments": segments})

    from .features import link_distance, player_degree

    timestamps = [frame.timestamp for frame in snap.frames]
    node_speed = {
        str(node): [
            frame.speeds.get(node) for frame in snap.frames
        ]
        for node in sorted(snap.node_union)
    }
    node_degree = {
        str(node): [
            player_degree(snap, node, k) if node in frame.present_nodes else None
            for k, frame in enumerate(snap.frames)
        ]
        for node in sorted(snap.node_union)
    }
    link_distances = {
        f"{a}-{b}": [
            link_distance(frame.positions[a], frame.positions[b])
            if (a, b) in frame.links
            else None
            for frame in snap.frames
        ]
        for a, b in sorted(snap.link_union)
    }
    return {
        "snapshot": snapshot_to_dict(snap, include_indicators=True),
        "indicators": indicators_to_dict(snap.indicators),
        "trajectories": trajectories,
        "series": {
            "timestamps": timestamps,
            "node_speed": node_speed,
            "node_degree": node_degree,
            "link_distance": link_distances,
        },
    }
