/** Thin DOM layer: mark descriptors in, SVG elements out. */

import type { Mark, MarkAction } from "./scales.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export type Dispatch = (action: MarkAction) => void;

export function applyMarks(
  svg: SVGSVGElement,
  marks: Mark[],
  dispatch: Dispatch,
): void {
  svg.replaceChildren();
  for (const mark of marks) {
    const element = document.createElementNS(SVG_NS, mark.kind);
    element.setAttribute("data-key", mark.key);
    element.setAttribute("class", mark.classes.join(" "));
    for (const [name, value] of Object.entries(mark.attrs)) {
      element.setAttribute(name, String(value));
    }
    if (mark.text !== undefined) element.textContent = mark.text;
    const action = mark.action;
    if (action) {
      element.classList.add("clickable");
      element.addEventListener("click", (event) => {
        event.stopPropagation();
        dispatch(action);
      });
    }
    svg.appendChild(element);
  }
}
