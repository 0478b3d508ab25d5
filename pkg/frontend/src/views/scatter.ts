/** Projection scatter: one point per frame, time-ramp colors, and a
 * polyline threading the points in time order.
 *
 * Points whose frame index sits in the shared highlight set get the
 * `highlight` class (driven by matrix/event selections); brushed points
 * get `brushed`.  Brush geometry itself lives in the DOM layer; this
 * layout only reflects the resulting frame set.
 */

import type { ProjectionPayload } from "../types.js";
import type { ViewState } from "../state.js";
import { extent, linearScale, Mark, polylinePath, round2, timeColor } from "../scales.js";
import type { Size } from "./matrix.js";

const PAD = 16;

export function layoutScatter(
  projection: ProjectionPayload,
  state: ViewState,
  size: Size,
): Mark[] {
  const points = projection.points;
  if (points.length === 0) return [];
  const sx = linearScale(extent(points.map((p) => p.x)), [PAD, size.width - PAD]);
  const sy = linearScale(extent(points.map((p) => p.y)), [size.height - PAD, PAD]);
  const highlighted = new Set(state.highlight.frames);
  const brushed = new Set(state.brush.frames);

  const ordered = [...points].sort((a, b) => a.time_rank - b.time_rank);
  const marks: Mark[] = [
    {
      kind: "path",
      key: "time-line",
      classes: ["time-line"],
      attrs: {
        d: polylinePath(ordered.map((p) => [sx(p.x), sy(p.y)])),
        fill: "none",
        stroke: "#b9c6d4",
        "stroke-width": 0.8,
      },
    },
  ];
  for (const point of points) {
    const classes = ["point"];
    if (highlighted.has(point.time_rank)) classes.push("highlight");
    if (brushed.has(point.time_rank)) classes.push("brushed");
    marks.push({
      kind: "circle",
      key: `pt-${point.time_rank}`,
      classes,
      attrs: {
        cx: round2(sx(point.x)),
        cy: round2(sy(point.y)),
        r: highlighted.has(point.time_rank) ? 5 : 3,
        fill: timeColor(point.time_rank, points.length),
        "data-frame": point.time_rank,
      },
      action: { type: "select-frame", frame: point.time_rank },
    });
  }
  return marks;
}

/** Frames whose embedded position falls inside a pixel-space brush box. */
export function framesInBox(
  projection: ProjectionPayload,
  size: Size,
  box: { x0: number; y0: number; x1: number; y1: number },
): number[] {
  const points = projection.points;
  if (points.length === 0) return [];
  const sx = linearScale(extent(points.map((p) => p.x)), [PAD, size.width - PAD]);
  const sy = linearScale(extent(points.map((p) => p.y)), [size.height - PAD, PAD]);
  const [xLo, xHi] = box.x0 < box.x1 ? [box.x0, box.x1] : [box.x1, box.x0];
  const [yLo, yHi] = box.y0 < box.y1 ? [box.y0, box.y1] : [box.y1, box.y0];
  return points
    .filter((p) => {
      const px = sx(p.x);
      const py = sy(p.y);
      return px >= xLo && px <= xHi && py >= yLo && py <= yHi;
    })
    .map((p) => p.time_rank)
    .sort((a, b) => a - b);
}
