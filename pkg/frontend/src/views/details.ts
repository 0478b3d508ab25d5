/** Snapshot detail triplet: player speed, player degree, link distance.
 *
 * One row of three line charts per selected snapshot; player lines take
 * their team color, link lines their same/cross-class color.  Values come
 * straight from the service detail payload (nulls break the line where an
 * entity is absent from a frame).
 */

import type { SnapshotDetail, UniverseNode } from "../types.js";
import type { ViewState } from "../state.js";
import {
  classOrder,
  extent,
  linearScale,
  Mark,
  round2,
  teamColor,
} from "../scales.js";
import type { Size } from "./matrix.js";

const CHART_PAD = 14;

interface Series {
  key: string;
  values: (number | null)[];
  color: string;
  emphasized: boolean;
  action?: Mark["action"];
}

function chart(
  chartKey: string,
  title: string,
  seriesList: Series[],
  timestamps: number[],
  box: { x: number; y: number; width: number; height: number },
): Mark[] {
  const marks: Mark[] = [
    {
      kind: "text",
      key: `${chartKey}-title`,
      classes: ["chart-title"],
      attrs: {
        x: round2(box.x + box.width / 2),
        y: box.y + 9,
        "text-anchor": "middle",
        "font-size": 9,
        fill: "#444",
      },
      text: title,
    },
  ];
  const finite = seriesList.flatMap((s) =>
    s.values.filter((v): v is number => v !== null),
  );
  if (finite.length === 0 || timestamps.length === 0) return marks;
  const sx = linearScale(extent(timestamps), [
    box.x + CHART_PAD,
    box.x + box.width - 6,
  ]);
  const [lo, hi] = extent(finite);
  const sy = linearScale(
    lo === hi ? [lo - 1, hi + 1] : [lo, hi],
    [box.y + box.height - 8, box.y + 16],
  );
  for (const series of seriesList) {
    let d = "";
    let pen = false;
    series.values.forEach((value, i) => {
      if (value === null) {
        pen = false;
        return;
      }
      d += `${pen ? "L" : "M"}${round2(sx(timestamps[i]))},${round2(sy(value))}`;
      pen = true;
    });
    if (!d) continue;
    const classes = ["series"];
    if (series.emphasized) classes.push("emphasized");
    marks.push({
      kind: "path",
      key: `${chartKey}-${series.key}`,
      classes,
      attrs: {
        d,
        fill: "none",
        stroke: series.color,
        "stroke-width": series.emphasized ? 2.4 : 1.2,
        opacity: series.emphasized ? 1 : 0.75,
      },
      action: series.action,
    });
  }
  return marks;
}

export function layoutDetails(
  detail: SnapshotDetail,
  nodes: UniverseNode[],
  state: ViewState,
  size: Size,
): Mark[] {
  const order = classOrder(nodes.map((n) => n.class_label));
  const chartWidth = size.width / 3;
  const timestamps = detail.series.timestamps;
  const highlightPlayers = new Set(state.highlight.players);
  const highlightLinks = new Set(
    state.highlight.links.map(([a, b]) => `${a}-${b}`),
  );

  const playerSeries = (
    record: Record<string, (number | null)[]>,
  ): Series[] =>
    Object.entries(record).map(([nodeKey, values]) => {
      const node = Number(nodeKey);
      return {
        key: `n${node}`,
        values,
        color: nodes[node] ? teamColor(nodes[node].class_label, order) : "#888",
        emphasized: highlightPlayers.has(node),
        action: { type: "select-player", node },
      };
    });

  const linkSeries: Series[] = Object.entries(detail.series.link_distance).map(
    ([pairKey, values]) => {
      const [a, b] = pairKey.split("-").map(Number);
      const sameClass =
        nodes[a] && nodes[b] && nodes[a].class_label === nodes[b].class_label;
      return {
        key: `l${pairKey}`,
        values,
        color: sameClass ? "#5b7fb6" : "#b65b5b",
        emphasized: highlightLinks.has(pairKey),
        action: { type: "select-cell", a, b },
      };
    },
  );

  const box = (index: number) => ({
    x: index * chartWidth,
    y: 0,
    width: chartWidth - 8,
    height: size.height,
  });
  return [
    ...chart(
      `${detail.snapshot.id}-speed`,
      "player speed",
      playerSeries(detail.series.node_speed),
      timestamps,
      box(0),
    ),
    ...chart(
      `${detail.snapshot.id}-degree`,
      "player degree",
      playerSeries(detail.series.node_degree),
      timestamps,
      box(1),
    ),
    ...chart(
      `${detail.snapshot.id}-distance`,
      "link distance",
      linkSeries,
      timestamps,
      box(2),
    ),
  ];
}
