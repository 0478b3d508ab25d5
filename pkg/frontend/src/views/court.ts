/** Court node-link view: player trajectories and links for one snapshot.
 *
 * Trajectory segments join consecutive positions; stroke width scales with
 * the segment's speed and color deepens with time inside the snapshot.
 * Node circles sit at final positions; link line width scales with the
 * link's occurrence count in the snapshot.
 */

import type { SnapshotDetail, UniverseNode } from "../types.js";
import type { ViewState } from "../state.js";
import { classOrder, linearScale, Mark, round2, teamColor, timeColor } from "../scales.js";
import type { Size } from "./matrix.js";

const COURT_W = 94;
const COURT_H = 50;

export function layoutCourt(
  detail: SnapshotDetail,
  nodes: UniverseNode[],
  state: ViewState,
  size: Size,
): Mark[] {
  const pad = 8;
  const scale = Math.min(
    (size.width - 2 * pad) / COURT_W,
    (size.height - 2 * pad) / COURT_H,
  );
  const sx = (x: number) => pad + x * scale;
  const sy = (y: number) => pad + y * scale;
  const order = classOrder(nodes.map((n) => n.class_label));

  const marks: Mark[] = [
    {
      kind: "rect",
      key: "court",
      classes: ["court"],
      attrs: {
        x: pad,
        y: pad,
        width: round2(COURT_W * scale),
        height: round2(COURT_H * scale),
        fill: "#f7f3ea",
        stroke: "#b0a890",
      },
    },
    {
      kind: "line",
      key: "midline",
      classes: ["court-line"],
      attrs: {
        x1: round2(sx(COURT_W / 2)),
        y1: round2(sy(0)),
        x2: round2(sx(COURT_W / 2)),
        y2: round2(sy(COURT_H)),
        stroke: "#b0a890",
      },
    },
  ];

  const speeds = detail.trajectories.flatMap((t) => t.segments.map((s) => s.speed));
  const maxSpeed = Math.max(1e-9, ...speeds);
  const widthScale = linearScale([0, maxSpeed], [0.8, 5]);

  for (const trajectory of detail.trajectories) {
    const segmentCount = trajectory.segments.length;
    const emphasized = state.highlight.players.includes(trajectory.node);
    trajectory.segments.forEach((segment, index) => {
      marks.push({
        kind: "line",
        key: `traj-${trajectory.node}-${index}`,
        classes: emphasized ? ["trajectory", "emphasized"] : ["trajectory"],
        attrs: {
          x1: round2(sx(segment.from[0])),
          y1: round2(sy(segment.from[1])),
          x2: round2(sx(segment.to[0])),
          y2: round2(sy(segment.to[1])),
          stroke: timeColor(index, Math.max(segmentCount, 2)),
          "stroke-width": round2(widthScale(segment.speed)),
          "stroke-linecap": "round",
          "data-speed": round2(segment.speed),
        },
      });
    });
  }

  const finalPosition = (node: number): [number, number] | null => {
    const trajectory = detail.trajectories.find((t) => t.node === node);
    if (trajectory && trajectory.segments.length > 0) {
      return trajectory.segments[trajectory.segments.length - 1].to;
    }
    return null;
  };

  const maxLinkCount = Math.max(1, ...detail.snapshot.links.map(([, , c]) => c));
  const linkWidth = linearScale([0, maxLinkCount], [0.5, 5]);
  for (const [a, b, count] of detail.snapshot.links) {
    const pa = finalPosition(a);
    const pb = finalPosition(b);
    if (!pa || !pb) continue;
    const emphasized = state.highlight.links.some(
      ([la, lb]) => la === a && lb === b,
    );
    marks.push({
      kind: "line",
      key: `link-${a}-${b}`,
      classes: emphasized ? ["link", "emphasized"] : ["link"],
      attrs: {
        x1: round2(sx(pa[0])),
        y1: round2(sy(pa[1])),
        x2: round2(sx(pb[0])),
        y2: round2(sy(pb[1])),
        stroke: "#667",
        "stroke-width": round2(linkWidth(count)),
        opacity: 0.6,
        "data-count": count,
      },
      action: { type: "select-cell", a, b },
    });
  }

  for (const node of detail.snapshot.nodes) {
    const position = finalPosition(node);
    if (!position) continue;
    const meta = nodes[node];
    const emphasized = state.highlight.players.includes(node);
    marks.push({
      kind: "circle",
      key: `node-${node}`,
      classes: emphasized ? ["node", "emphasized"] : ["node"],
      attrs: {
        cx: round2(sx(position[0])),
        cy: round2(sy(position[1])),
        r: emphasized ? 9 : 7,
        fill: meta ? teamColor(meta.class_label, order) : "#888",
        stroke: "#fff",
        "stroke-width": 1,
      },
      action: { type: "select-player", node },
    });
    marks.push({
      kind: "text",
      key: `node-label-${node}`,
      classes: ["node-label"],
      attrs: {
        x: round2(sx(position[0])),
        y: round2(sy(position[1]) + 3),
        "text-anchor": "middle",
        "font-size": 8,
        fill: "#fff",
      },
      text: meta ? meta.node_id.replace(/^[pP]/, "") : String(node),
    });
  }
  return marks;
}
