"""Hierarchical snapshot aggregation and analysis for dynamic graphs.

snapgraph ingests timestamped tracking data, hot-encodes each frame into a
combined node/link vector, computes stability indicators, merges frames
into hierarchical multi-granularity snapshots under user thresholds, embeds
snapshots in 2D for overview scatter plots, and serves the results over a
session-oriented JSON HTTP API.
"""

from .engine import (
    ChangeDegrees,
    GenerationSession,
    change_degrees,
    generate_layer,
    merge_condition,
)
from .errors import SnapgraphError
from .features import (
    CombinedVector,
    IndicatorSeries,
    SnapshotIndicators,
    graph_stability,
    link_distance,
    link_stability,
    pair_index,
    player_degree,
    snapshot_indicators,
    vectorize,
)
from .ingest import (
    DatasetConfig,
    EventRecord,
    LinkInducerConfig,
    TrackingRow,
    induce_links,
    parse_events,
    parse_tracking,
)
from .model import (
    ChangeThresholds,
    NodeUniverse,
    Snapshot,
    SnapshotTree,
    TimestampedGraph,
    build_layer_zero,
    merge_snapshots,
)
from .projection import ProjectionConfig, ProjectionPoint, project

__version__ = "0.1.0"

__all__ = [
    "ChangeDegrees",
    "ChangeThresholds",
    "CombinedVector",
    "DatasetConfig",
    "EventRecord",
    "GenerationSession",
    "IndicatorSeries",
    "LinkInducerConfig",
    "NodeUniverse",
    "ProjectionConfig",
    "ProjectionPoint",
    "Snapshot",
    "SnapshotIndicators",
    "SnapshotTree",
    "SnapgraphError",
    "TimestampedGraph",
    "TrackingRow",
    "build_layer_zero",
    "change_degrees",
    "generate_layer",
    "graph_stability",
    "induce_links",
    "link_distance",
    "link_stability",
    "merge_condition",
    "merge_snapshots",
    "pair_index",
    "parse_events",
    "parse_tracking",
    "player_degree",
    "project",
    "snapshot_indicators",
    "vectorize",
]
