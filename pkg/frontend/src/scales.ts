/** Hand-rolled scales, color ramps, and the mark descriptor model.
 *
 * Views emit plain mark descriptors (rects, circles, lines, paths, text);
 * a thin DOM layer turns them into SVG.  Keeping layout pure keeps every
 * visual encoding unit-testable without a browser.
 */

export interface Mark {
  kind: "rect" | "circle" | "line" | "path" | "text";
  key: string;
  classes: string[];
  attrs: Record<string, string | number>;
  text?: string;
  action?: MarkAction;
}

export type MarkAction =
  | { type: "select-cell"; a: number; b: number }
  | { type: "select-player"; node: number }
  | { type: "select-event"; index: number }
  | { type: "select-snapshot"; id: string }
  | { type: "select-frame"; frame: number };

export function linearScale(
  domain: [number, number],
  range: [number, number],
): (value: number) => number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  if (span === 0) return () => (r0 + r1) / 2;
  return (value: number) => r0 + ((value - d0) / span) * (r1 - r0);
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1];
  return [lo, hi];
}

/** Two-hue team scheme: first class blue, second orange, extras gray. */
export function teamColor(classLabel: string, classOrder: string[]): string {
  const index = classOrder.indexOf(classLabel);
  return ["#3b6fb6", "#e08a3c"][index] ?? "#888888";
}

export function classOrder(labels: string[]): string[] {
  const seen: string[] = [];
  for (const label of labels) if (!seen.includes(label)) seen.push(label);
  return seen;
}

/** Sequential time ramp, light early to dark late. */
export function timeColor(rank: number, count: number): string {
  const t = count > 1 ? rank / (count - 1) : 0;
  const light = 88 - t * 58; // 88% .. 30%
  return `hsl(210, 55%, ${light}%)`;
}

/** Lighter means less stable (low values wash out). */
export function stabilityColor(value: number, min: number, max: number): string {
  const t = max > min ? (value - min) / (max - min) : 1;
  const light = 92 - t * 50; // unstable 92% .. stable 42%
  return `hsl(152, 45%, ${light}%)`;
}

export const OVERLAY_COLORS: Record<string, string> = {
  avg_node_speed: "#3fa34d", // green line: speed
  avg_node_degree: "#8e5bb5", // purple line
  avg_link_distance: "#c0392b", // red line
  avg_link_stability: "#c78f2e",
  graph_stability: "#2e7fc7",
};

export function polylinePath(points: [number, number][]): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${round2(x)},${round2(y)}`)
    .join("");
}

export function round2(value: number): number {
  return Math.round(value * 100) / 100;
}
