"""JSON-facing views of domain objects, shared by the CLI and the service.

All dumps are canonical (sorted keys, fixed separators, no NaN) so equal
inputs produce byte-identical artifacts; every top-level artifact carries a
``schema_version``.
"""

from __future__ import annotations

import hashlib
import json
from typing import Mapping, Sequence

from .features import SnapshotIndicators
from .model import NodeUniverse, Snapshot, SnapshotTree, TimestampedGraph
from .projection import ProjectionConfig, ProjectionPoint

SCHEMA_VERSION = "1"


def canonical_json(payload) -> str:
    return json.dumps(
        payload, sort_keys=True, separators=(",", ":"), allow_nan=False
    )


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def universe_to_dict(universe: NodeUniverse) -> list[dict]:
    return [
        {"ordinal": i, "node_id": node_id, "class_label": label}
        for i, (node_id, label) in enumerate(universe.entries)
    ]


def frame_to_dict(frame: TimestampedGraph) -> dict:
    return {
        "timestamp": frame.timestamp,
        "nodes": sorted(frame.present_nodes),
        "links": sorted([a, b] for a, b in frame.links),
        "positions": {str(n): list(frame.positions[n]) for n in sorted(frame.positions)},
        "speeds": {str(n): frame.speeds[n] for n in sorted(frame.speeds)},
    }


def indicators_to_dict(ind: SnapshotIndicators) -> dict:
    return {
        "avg_node_speed": ind.avg_node_speed,
        "avg_node_degree": ind.avg_node_degree,
        "avg_link_distance": ind.avg_link_distance,
        "avg_link_stability": ind.avg_link_stability,
        "graph_stability": ind.graph_stability,
        "per_frame": {
            "timestamps": list(ind.per_frame.timestamps),
            "node_speed": list(ind.per_frame.node_speed),
            "node_degree": list(ind.per_frame.node_degree),
            "link_distance": list(ind.per_frame.link_distance),
            "link_stability": list(ind.per_frame.link_stability),
            "graph_stability": list(ind.per_frame.graph_stability),
        },
    }


def snapshot_to_dict(
    snap: Snapshot,
    include_indicators: bool = True,
    include_frames: bool = False,
) -> dict:
    payload = {
        "id": snap.id,
        "frame_range": list(snap.frame_range),
        "frame_count": snap.frame_count,
        "time_span": list(snap.time_span),
        "nodes": sorted(snap.node_union),
        "links": sorted(
            [a, b, snap.link_counts[(a, b)]] for a, b in snap.link_union
        ),
    }
    if include_indicators:
        payload["indicators"] = indicators_to_dict(snap.indicators)
    if include_frames:
        payload["frames"] = [frame_to_dict(frame) for frame in snap.frames]
    return payload


def tree_to_dict(
    tree: SnapshotTree,
    history: Sequence[Mapping] | None = None,
    include_indicators: bool = True,
) -> dict:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "frame_count": tree.frame_count,
        "layers": [
            [snapshot_to_dict(snap, include_indicators) for snap in layer]
            for layer in tree.layers
        ],
        "lineage": tree.lineage,
        "layer_params": {
            str(k): th.to_dict() for k, th in tree.layer_params.items()
        },
        "digest": tree.digest(),
    }
    if history is not None:
        payload["history"] = [dict(entry) for entry in history]
    return payload


def projection_to_dict(
    points: Sequence[ProjectionPoint], cfg: ProjectionConfig
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "perplexity": cfg.perplexity,
            "iterations": cfg.iterations,
            "learning_rate": cfg.learning_rate,
            "seed": cfg.seed,
            "early_exaggeration": cfg.early_exaggeration,
        },
        "points": [
            {
                "snapshot_id": p.snapshot_id,
                "x": p.x,
                "y": p.y,
                "time_rank": p.time_rank,
            }
            for p in points
        ],
    }
