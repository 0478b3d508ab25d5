/** Generation tree: one row per layer, one rect per snapshot.
 *
 * Rect width is proportional to the snapshot's frame count (positions come
 * from cumulative frame counts, so total width is exact and each rect is
 * correct within 1px rounding).  Fill encodes graph stability, lighter
 * meaning less stable.  Overlay polylines plot the chosen indicator
 * metrics across each layer using the service-computed values verbatim;
 * the UI never recomputes indicators.
 */

import type { OverlayMetric, SnapshotPayload, TreePayload } from "../types.js";
import type { ViewState } from "../state.js";
import {
  extent,
  linearScale,
  Mark,
  OVERLAY_COLORS,
  polylinePath,
  round2,
  stabilityColor,
} from "../scales.js";
import type { Size } from "./matrix.js";

const ROW_GAP = 14;
const PAD_X = 6;

export function layoutTree(
  tree: TreePayload,
  overlayMetrics: OverlayMetric[],
  state: ViewState,
  size: Size,
): Mark[] {
  const layerCount = tree.layers.length;
  if (layerCount === 0) return [];
  const rowHeight = Math.max(
    18,
    (size.height - ROW_GAP * (layerCount + 1)) / layerCount,
  );
  const pxPerFrame = (size.width - 2 * PAD_X) / Math.max(1, tree.frame_count);
  const marks: Mark[] = [];

  tree.layers.forEach((layer, layerIndex) => {
    const y = ROW_GAP + layerIndex * (rowHeight + ROW_GAP);
    const stabilities = layer.map((s) => s.indicators.graph_stability);
    const [stabLo, stabHi] = extent(stabilities);
    let cumulative = 0;
    const centers: number[] = [];
    layer.forEach((snap) => {
      const x0 = PAD_X + cumulative * pxPerFrame;
      cumulative += snap.frame_count;
      const x1 = PAD_X + cumulative * pxPerFrame;
      centers.push((x0 + x1) / 2);
      const classes = ["snapshot"];
      if (state.selectedSnapshots.includes(snap.id)) classes.push("selected");
      marks.push({
        kind: "rect",
        key: `snap-${snap.id}`,
        classes,
        attrs: {
          x: round2(x0),
          y: round2(y),
          width: round2(Math.max(x1 - x0 - 1, 1)),
          height: round2(rowHeight),
          fill: stabilityColor(snap.indicators.graph_stability, stabLo, stabHi),
          "data-frames": snap.frame_count,
          "data-id": snap.id,
        },
        action: { type: "select-snapshot", id: snap.id },
      });
    });
    marks.push({
      kind: "text",
      key: `layer-label-${layerIndex}`,
      classes: ["layer-label"],
      attrs: {
        x: 2,
        y: round2(y + rowHeight / 2 + 3),
        "font-size": 8,
        fill: "#666",
      },
      text: `L${layerIndex}`,
    });
    for (const metric of overlayMetrics) {
      const values = layer.map((snap) => metricValue(snap, metric));
      const [lo, hi] = extent(values);
      const sy = linearScale([lo, hi], [y + rowHeight - 2, y + 2]);
      marks.push({
        kind: "path",
        key: `overlay-${layerIndex}-${metric}`,
        classes: ["overlay", metric],
        attrs: {
          d: polylinePath(values.map((v, i) => [centers[i], sy(v)])),
          fill: "none",
          stroke: OVERLAY_COLORS[metric],
          "stroke-width": 1.4,
          "data-values": values.map((v) => String(v)).join(";"),
        },
      });
    }
  });
  return marks;
}

export function metricValue(snap: SnapshotPayload, metric: OverlayMetric): number {
  return snap.indicators[metric];
}

/** Total rendered width of one layer's rects plus their 1px separators. */
export function layerTotalWidth(marks: Mark[], layerPrefix: string): number {
  return marks
    .filter((m) => m.kind === "rect" && m.key.startsWith("snap-") && m.classes.includes("snapshot"))
    .filter((m) => String(m.attrs["data-id"]).startsWith(layerPrefix))
    .reduce((sum, m) => sum + Number(m.attrs.width) + 1, 0);
}
