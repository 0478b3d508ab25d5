/** Single source of truth for all coordinated views.
 *
 * Every selection and highlight lives here; views render from this state
 * and never keep their own copies, so cross-view highlighting stays
 * consistent by construction.  Highlight frame sets come from the service's
 * membership endpoint, never from client-side recomputation.
 */

import type {
  DatasetDescriptor,
  EventsPayload,
  LayerDelta,
  MatrixPayload,
  OverlayMetric,
  ProjectionPayload,
  SessionPayload,
  SnapshotDetail,
  TreePayload,
} from "./types.js";

export interface BrushState {
  frames: number[]; // selected frame indices, ascending
  active: boolean; // a drag gesture is in progress
}

export interface HighlightState {
  players: number[];
  links: [number, number][];
  frames: number[]; // service-computed membership of the selected entity
}

export interface ViewState {
  datasetId: string | null;
  sessionId: string | null;
  brush: BrushState;
  selectedCell: { a: number; b: number } | null;
  selectedEvent: number | null;
  selectedSnapshots: string[];
  overlayMetrics: OverlayMetric[];
  highlight: HighlightState;
  banner: string | null; // schema-mismatch or error notice
  pendingGeneration: boolean; // disables conflicting controls while in flight
}

export interface LoadedData {
  descriptor: DatasetDescriptor | null;
  matrix: MatrixPayload | null;
  projection: ProjectionPayload | null;
  events: EventsPayload | null;
  tree: TreePayload | null;
  selection: [number, number] | null;
  details: Record<string, SnapshotDetail>;
}

export function initialState(): ViewState {
  return {
    datasetId: null,
    sessionId: null,
    brush: { frames: [], active: false },
    selectedCell: null,
    selectedEvent: null,
    selectedSnapshots: [],
    overlayMetrics: ["avg_node_speed", "avg_link_distance"],
    highlight: { players: [], links: [], frames: [] },
    banner: null,
    pendingGeneration: false,
  };
}

export function emptyData(): LoadedData {
  return {
    descriptor: null,
    matrix: null,
    projection: null,
    events: null,
    tree: null,
    selection: null,
    details: {},
  };
}

export function isContiguous(frames: number[]): boolean {
  if (frames.length === 0) return false;
  const sorted = [...frames].sort((a, b) => a - b);
  return sorted.every((f, i) => i === 0 || f === sorted[i - 1] + 1);
}

type Listener = (state: ViewState, data: LoadedData) => void;

export class Store {
  state: ViewState = initialState();
  data: LoadedData = emptyData();
  private listeners: Listener[] = [];

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state, this.data);
  }

  // -- data loading ----------------------------------------------------------

  setDataset(descriptor: DatasetDescriptor): void {
    this.state = { ...initialState(), overlayMetrics: this.state.overlayMetrics };
    this.state.datasetId = descriptor.id;
    this.data = { ...emptyData(), descriptor };
    this.emit();
  }

  setOverview(partial: Partial<Pick<LoadedData, "matrix" | "projection" | "events">>): void {
    this.data = { ...this.data, ...partial };
    this.emit();
  }

  setSession(payload: SessionPayload): void {
    this.state = {
      ...this.state,
      sessionId: payload.session_id,
      selectedSnapshots: [],
      pendingGeneration: false,
    };
    this.data = {
      ...this.data,
      tree: payload.tree,
      selection: payload.selection,
      details: {},
    };
    this.emit();
  }

  applyLayerDelta(delta: LayerDelta): void {
    const tree = this.data.tree;
    if (!tree) return;
    const layers = tree.layers.slice(0, delta.layer_index);
    layers.push(delta.snapshots);
    this.data = {
      ...this.data,
      tree: { ...tree, layers, digest: delta.tree_digest },
    };
    this.state = { ...this.state, pendingGeneration: false, selectedSnapshots: [] };
    this.emit();
  }

  dropTopLayer(): void {
    const tree = this.data.tree;
    if (!tree || tree.layers.length < 2) return;
    this.data = {
      ...this.data,
      tree: { ...tree, layers: tree.layers.slice(0, -1) },
    };
    this.state = { ...this.state, selectedSnapshots: [] };
    this.emit();
  }

  cacheDetail(detail: SnapshotDetail): void {
    this.data = {
      ...this.data,
      details: { ...this.data.details, [detail.snapshot.id]: detail },
    };
    this.emit();
  }

  setBanner(message: string | null): void {
    this.state = { ...this.state, banner: message };
    this.emit();
  }

  setPending(pending: boolean): void {
    this.state = { ...this.state, pendingGeneration: pending };
    this.emit();
  }

  // -- interactions ------------------------------------------------------------

  /** Begin a brush gesture; rejected while another gesture is active. */
  beginBrush(): boolean {
    if (this.state.brush.active) return false;
    this.state = { ...this.state, brush: { frames: [], active: true } };
    this.emit();
    return true;
  }

  updateBrush(frames: number[]): void {
    if (!this.state.brush.active) return;
    const valid = this.filterExistingFrames(frames);
    this.state = { ...this.state, brush: { frames: valid, active: true } };
    this.emit();
  }

  endBrush(): void {
    if (!this.state.brush.active) return;
    this.state = {
      ...this.state,
      brush: { frames: this.state.brush.frames, active: false },
    };
    this.emit();
  }

  /** Selections may only reference frames the dataset actually has. */
  private filterExistingFrames(frames: number[]): number[] {
    const count = this.data.descriptor?.frame_count ?? 0;
    const unique = [...new Set(frames)].filter((f) => f >= 0 && f < count);
    return unique.sort((a, b) => a - b);
  }

  /** Brush is usable for a session only when it is a contiguous range. */
  get canCreateSession(): boolean {
    return !this.state.brush.active && isContiguous(this.state.brush.frames);
  }

  get brushWarning(): string | null {
    if (this.state.brush.frames.length === 0 || this.canCreateSession) return null;
    if (this.state.brush.active) return null;
    return "selection must be a contiguous frame range";
  }

  /**
   * Select a matrix cell; `membership` is the service-computed set of
   * frames containing that link and becomes the highlight everywhere.
   */
  selectMatrixCell(a: number, b: number, membership: number[]): void {
    const size = this.data.descriptor?.node_universe.length ?? 0;
    if (a < 0 || b < 0 || a >= size || b >= size || a === b) return;
    const [lo, hi] = a < b ? [a, b] : [b, a];
    this.state = {
      ...this.state,
      selectedCell: { a: lo, b: hi },
      highlight: {
        players: [lo, hi],
        links: [[lo, hi]],
        frames: this.filterExistingFrames(membership),
      },
    };
    this.emit();
  }

  /** Select a node everywhere (matrix header, event roles, detail lines). */
  selectPlayer(node: number, membership: number[]): void {
    const size = this.data.descriptor?.node_universe.length ?? 0;
    if (node < 0 || node >= size) return;
    this.state = {
      ...this.state,
      highlight: {
        players: [node],
        links: [],
        frames: this.filterExistingFrames(membership),
      },
    };
    this.emit();
  }

  selectEvent(index: number): void {
    const events = this.data.events?.events ?? [];
    if (index < 0 || index >= events.length) return;
    this.state = { ...this.state, selectedEvent: index };
    this.emit();
  }

  selectSnapshot(snapshotId: string): void {
    const tree = this.data.tree;
    if (!tree) return;
    const exists = tree.layers.some((layer) =>
      layer.some((snap) => snap.id === snapshotId),
    );
    if (!exists) return;
    const selected = this.state.selectedSnapshots.includes(snapshotId)
      ? this.state.selectedSnapshots.filter((id) => id !== snapshotId)
      : [...this.state.selectedSnapshots, snapshotId];
    this.state = { ...this.state, selectedSnapshots: selected };
    this.emit();
  }

  setOverlayMetrics(metrics: OverlayMetric[]): void {
    this.state = { ...this.state, overlayMetrics: metrics };
    this.emit();
  }

  clearHighlight(): void {
    this.state = {
      ...this.state,
      selectedCell: null,
      highlight: { players: [], links: [], frames: [] },
    };
    this.emit();
  }
}
