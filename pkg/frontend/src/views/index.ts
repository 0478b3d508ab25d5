/** Assemble all six views from the shared state and loaded payloads.
 *
 * Each payload is schema-checked before layout; a mismatch produces a
 * banner instead of mounted views (and never a crash).
 */

import type { LoadedData, ViewState } from "../state.js";
import { schemaMatches } from "../types.js";
import type { Mark } from "../scales.js";
import { layoutMatrix, Size } from "./matrix.js";
import { layoutScatter } from "./scatter.js";
import { layoutEvents } from "./events.js";
import { layoutTree } from "./tree.js";
import { layoutCourt } from "./court.js";
import { layoutDetails } from "./details.js";

export interface ViewSizes {
  matrix: Size;
  scatter: Size;
  events: Size;
  tree: Size;
  court: Size;
  details: Size;
}

export const DEFAULT_SIZES: ViewSizes = {
  matrix: { width: 300, height: 300 },
  scatter: { width: 360, height: 300 },
  events: { width: 660, height: 160 },
  tree: { width: 660, height: 220 },
  court: { width: 470, height: 270 },
  details: { width: 660, height: 150 },
};

export interface RenderedViews {
  banner: string | null;
  matrix: Mark[];
  scatter: Mark[];
  events: Mark[];
  tree: Mark[];
  court: Mark[];
  details: Mark[];
}

export function renderViews(
  state: ViewState,
  data: LoadedData,
  sizes: ViewSizes = DEFAULT_SIZES,
): RenderedViews {
  const payloads = [
    data.descriptor,
    data.matrix,
    data.projection,
    data.events,
    data.tree,
  ].filter((p): p is NonNullable<typeof p> => p !== null);
  for (const payload of payloads) {
    if (!schemaMatches(payload)) {
      return {
        banner:
          `schema mismatch: service sent version ` +
          `${(payload as { schema_version?: string }).schema_version}, ` +
          `this client understands version 1`,
        matrix: [],
        scatter: [],
        events: [],
        tree: [],
        court: [],
        details: [],
      };
    }
  }

  const nodes = data.descriptor?.node_universe ?? [];
  const selectedDetail =
    state.selectedSnapshots
      .map((id) => data.details[id])
      .find((detail) => detail !== undefined) ?? null;

  return {
    banner: state.banner,
    matrix: data.matrix ? layoutMatrix(data.matrix, state, sizes.matrix) : [],
    scatter: data.projection
      ? layoutScatter(data.projection, state, sizes.scatter)
      : [],
    events: data.events
      ? layoutEvents(data.events, nodes, state, sizes.events)
      : [],
    tree: data.tree
      ? layoutTree(data.tree, state.overlayMetrics, state, sizes.tree)
      : [],
    court: selectedDetail
      ? layoutCourt(selectedDetail, nodes, state, sizes.court)
      : [],
    details: selectedDetail
      ? layoutDetails(selectedDetail, nodes, state, sizes.details)
      : [],
  };
}
