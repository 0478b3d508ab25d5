/** Service payload shapes (schema_version "1") and shared UI types. */

export const SCHEMA_VERSION = "1";

export interface UniverseNode {
  ordinal: number;
  node_id: string;
  class_label: string;
}

export interface DatasetDescriptor {
  schema_version: string;
  id: string;
  name: string;
  frame_count: number;
  node_universe: UniverseNode[];
  time_range: [number, number];
  granularity: number;
  event_count: number;
}

export interface MatrixPayload {
  schema_version: string;
  frame_range: [number, number];
  nodes: UniverseNode[];
  pairs: { a: number; b: number; count: number }[];
}

export interface ProjectionPayload {
  schema_version: string;
  config: { perplexity: number; iterations: number; seed: number };
  points: { snapshot_id: string; x: number; y: number; time_rank: number }[];
}

export interface EventsPayload {
  schema_version: string;
  timeline: { timestamp: number; lead: number }[];
  events: {
    timestamp: number;
    event_type: string;
    score_a: number;
    score_b: number;
    major_player: string | null;
    secondary_player: string | null;
  }[];
}

export interface IndicatorSet {
  avg_node_speed: number;
  avg_node_degree: number;
  avg_link_distance: number;
  avg_link_stability: number;
  graph_stability: number;
  per_frame: {
    timestamps: number[];
    node_speed: number[];
    node_degree: number[];
    link_distance: number[];
    link_stability: number[];
    graph_stability: number[];
  };
}

export interface SnapshotPayload {
  id: string;
  frame_range: [number, number];
  frame_count: number;
  time_span: [number, number];
  nodes: number[];
  links: [number, number, number][]; // a, b, occurrence count
  indicators: IndicatorSet;
}

export interface TreePayload {
  schema_version: string;
  frame_count: number;
  layers: SnapshotPayload[][];
  lineage: Record<string, string[]>;
  layer_params: Record<string, Thresholds>;
  digest: string;
}

export interface SessionPayload {
  schema_version: string;
  session_id: string;
  dataset_id: string;
  selection: [number, number];
  tree: TreePayload;
}

export interface LayerDelta {
  schema_version: string;
  layer_index: number;
  snapshots: SnapshotPayload[];
  layer_digest: string;
  tree_digest: string;
}

export interface SnapshotDetail {
  schema_version: string;
  snapshot: SnapshotPayload;
  indicators: IndicatorSet;
  trajectories: {
    node: number;
    segments: {
      t0: number;
      t1: number;
      from: [number, number];
      to: [number, number];
      speed: number;
    }[];
  }[];
  series: {
    timestamps: number[];
    node_speed: Record<string, (number | null)[]>;
    node_degree: Record<string, (number | null)[]>;
    link_distance: Record<string, (number | null)[]>;
  };
}

export interface Thresholds {
  node_change_max: number;
  link_change_max: number;
  time_gap_max: number;
  frame_count_max: number | null;
}

export const OVERLAY_METRICS = [
  "avg_node_speed",
  "avg_node_degree",
  "avg_link_distance",
  "avg_link_stability",
  "graph_stability",
] as const;

export type OverlayMetric = (typeof OVERLAY_METRICS)[number];

/** True when a payload announces the schema this build understands. */
export function schemaMatches(payload: { schema_version?: string }): boolean {
  return payload.schema_version === SCHEMA_VERSION;
}
