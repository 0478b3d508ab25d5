/** Event diagram: score-lead area on top, event-type boxes in the middle,
 * involved players at the bottom, with role lines for the selected event
 * (red for the major role, green for the secondary).
 */

import type { EventsPayload, UniverseNode } from "../types.js";
import type { ViewState } from "../state.js";
import {
  classOrder,
  extent,
  linearScale,
  Mark,
  polylinePath,
  round2,
  teamColor,
} from "../scales.js";
import type { Size } from "./matrix.js";

const TYPE_COLORS: Record<string, string> = {
  score: "#e08a3c",
  "miss shot": "#7f8c8d",
  "free throw": "#8e5bb5",
};

function typeColor(eventType: string): string {
  return TYPE_COLORS[eventType] ?? "#5b8ca8";
}

export function layoutEvents(
  events: EventsPayload,
  nodes: UniverseNode[],
  state: ViewState,
  size: Size,
): Mark[] {
  if (events.timeline.length === 0 && events.events.length === 0) return [];
  const times = events.events.map((e) => e.timestamp);
  const [t0, t1] = extent(times.concat(events.timeline.map((p) => p.timestamp)));
  const sx = linearScale([t0, t1], [24, size.width - 12]);
  const areaBottom = size.height * 0.4;
  const leads = events.timeline.map((p) => p.lead);
  const leadMax = Math.max(1, ...leads.map((v) => Math.abs(v)));
  const sy = linearScale([-leadMax, leadMax], [areaBottom, 4]);
  const zeroY = sy(0);

  const marks: Mark[] = [];
  if (events.timeline.length > 0) {
    const pts: [number, number][] = events.timeline.map((p) => [
      sx(p.timestamp),
      sy(p.lead),
    ]);
    const first = pts[0];
    const last = pts[pts.length - 1];
    marks.push({
      kind: "path",
      key: "lead-area",
      classes: ["lead-area"],
      attrs: {
        d:
          `M${round2(first[0])},${round2(zeroY)}` +
          polylinePath(pts).replace(/^M/, "L") +
          `L${round2(last[0])},${round2(zeroY)}Z`,
        fill: "#9fb8d8",
        opacity: 0.7,
      },
    });
    marks.push({
      kind: "path",
      key: "lead-line",
      classes: ["lead-line"],
      attrs: {
        d: polylinePath(pts),
        fill: "none",
        stroke: "#3b6fb6",
        "stroke-width": 1.2,
      },
    });
  }

  const bandY = size.height * 0.45;
  const bandH = size.height * 0.18;
  const order = classOrder(nodes.map((n) => n.class_label));
  const idToNode = new Map(nodes.map((n) => [n.node_id, n]));
  const playersRowY = size.height * 0.82;
  const involved = new Map<string, number>(); // node_id -> x slot
  events.events.forEach((event, index) => {
    for (const pid of [event.major_player, event.secondary_player]) {
      if (pid && !involved.has(pid)) involved.set(pid, involved.size);
    }
    const selected = state.selectedEvent === index;
    marks.push({
      kind: "rect",
      key: `event-${index}`,
      classes: selected ? ["event", "selected"] : ["event"],
      attrs: {
        x: round2(sx(event.timestamp) - 14),
        y: round2(bandY),
        width: 28,
        height: round2(bandH),
        fill: typeColor(event.event_type),
        rx: 3,
      },
      action: { type: "select-event", index },
    });
    marks.push({
      kind: "text",
      key: `event-label-${index}`,
      classes: ["event-label"],
      attrs: {
        x: round2(sx(event.timestamp)),
        y: round2(bandY + bandH / 2 + 3),
        "text-anchor": "middle",
        "font-size": 7,
        fill: "#fff",
      },
      text: event.event_type.slice(0, 6),
    });
  });

  const slotWidth = (size.width - 40) / Math.max(1, involved.size);
  const playerX = (pid: string) => 30 + (involved.get(pid) ?? 0) * slotWidth;
  for (const [pid] of involved) {
    const node = idToNode.get(pid);
    const emphasized =
      node !== undefined && state.highlight.players.includes(node.ordinal);
    marks.push({
      kind: "circle",
      key: `player-${pid}`,
      classes: emphasized ? ["node", "emphasized"] : ["node"],
      attrs: {
        cx: round2(playerX(pid)),
        cy: round2(playersRowY),
        r: 8,
        fill: node ? teamColor(node.class_label, order) : "#888",
      },
      action: node
        ? { type: "select-player", node: node.ordinal }
        : undefined,
    });
    marks.push({
      kind: "text",
      key: `player-label-${pid}`,
      classes: ["node-label"],
      attrs: {
        x: round2(playerX(pid)),
        y: round2(playersRowY + 3),
        "text-anchor": "middle",
        "font-size": 7,
        fill: "#fff",
      },
      text: pid.replace(/^[pP]/, ""),
    });
  }

  if (state.selectedEvent !== null) {
    const event = events.events[state.selectedEvent];
    const eventX = sx(event.timestamp);
    const roles: [string | null, string, string][] = [
      [event.major_player, "major", "#c0392b"],
      [event.secondary_player, "secondary", "#3fa34d"],
    ];
    for (const [pid, role, color] of roles) {
      if (!pid) continue;
      marks.push({
        kind: "line",
        key: `role-${role}`,
        classes: ["role-line", role],
        attrs: {
          x1: round2(eventX),
          y1: round2(bandY + bandH),
          x2: round2(playerX(pid)),
          y2: round2(playersRowY - 8),
          stroke: color,
          "stroke-width": 1.5,
        },
      });
    }
  }
  return marks;
}
