/** Link matrix: node circles on the margins, one cell rect per pair.
 *
 * Cell rect width encodes the link's occurrence count; cell color says
 * whether the link joins the same node class or crosses classes.  Hovering
 * semantics (row/column emphasis) and scatter highlighting both derive
 * from the selected cell in the shared state.
 */

import type { MatrixPayload } from "../types.js";
import type { ViewState } from "../state.js";
import {
  classOrder,
  linearScale,
  Mark,
  round2,
  teamColor,
} from "../scales.js";

export interface Size {
  width: number;
  height: number;
}

const MARGIN = 28;

export function layoutMatrix(
  matrix: MatrixPayload,
  state: ViewState,
  size: Size,
): Mark[] {
  const nodes = matrix.nodes;
  const order = classOrder(nodes.map((n) => n.class_label));
  const n = nodes.length;
  if (n === 0) return [];
  const cell = Math.min(
    (size.width - MARGIN) / n,
    (size.height - MARGIN) / n,
  );
  const position = (ordinal: number) => MARGIN + ordinal * cell;
  const counts = new Map<string, number>();
  let maxCount = 1;
  for (const pair of matrix.pairs) {
    counts.set(`${pair.a}:${pair.b}`, pair.count);
    if (pair.count > maxCount) maxCount = pair.count;
  }
  const widthScale = linearScale([0, maxCount], [0, cell - 2]);

  const marks: Mark[] = [];
  const selected = state.selectedCell;
  for (const node of nodes) {
    const emphasized =
      selected !== null &&
      (selected.a === node.ordinal || selected.b === node.ordinal);
    const base = {
      classes: emphasized ? ["node", "emphasized"] : ["node"],
      action: { type: "select-player", node: node.ordinal } as const,
    };
    marks.push({
      kind: "circle",
      key: `col-${node.ordinal}`,
      ...base,
      attrs: {
        cx: round2(position(node.ordinal) + cell / 2),
        cy: MARGIN / 2,
        r: round2(Math.min(cell * 0.38, 10)),
        fill: teamColor(node.class_label, order),
      },
    });
    marks.push({
      kind: "circle",
      key: `row-${node.ordinal}`,
      ...base,
      attrs: {
        cx: MARGIN / 2,
        cy: round2(position(node.ordinal) + cell / 2),
        r: round2(Math.min(cell * 0.38, 10)),
        fill: teamColor(node.class_label, order),
      },
    });
    marks.push({
      kind: "text",
      key: `label-${node.ordinal}`,
      classes: ["node-label"],
      attrs: {
        x: round2(position(node.ordinal) + cell / 2),
        y: MARGIN / 2 + 3,
        "text-anchor": "middle",
        "font-size": 8,
        fill: "#fff",
      },
      text: nodes[node.ordinal].node_id.replace(/^[pP]/, ""),
    });
  }

  for (const pair of matrix.pairs) {
    const { a, b, count } = pair;
    const sameClass = nodes[a].class_label === nodes[b].class_label;
    const isSelected = selected !== null && selected.a === a && selected.b === b;
    const inRowOrCol =
      selected !== null &&
      (selected.a === a || selected.b === b || selected.a === b || selected.b === a);
    const width = Math.max(1, widthScale(count));
    for (const [row, col] of [
      [a, b],
      [b, a],
    ] as const) {
      const classes = ["cell", sameClass ? "same-class" : "cross-class"];
      if (isSelected) classes.push("selected");
      else if (inRowOrCol) classes.push("emphasized");
      marks.push({
        kind: "rect",
        key: `cell-${row}-${col}`,
        classes,
        attrs: {
          x: round2(position(col) + (cell - width) / 2),
          y: round2(position(row) + 1),
          width: round2(width),
          height: round2(cell - 2),
          fill: sameClass ? "#9fb8d8" : "#d89f9f",
          "data-count": count,
        },
        action: { type: "select-cell", a, b },
      });
    }
  }
  return marks;
}
