/** App bootstrap: wire the store, the API client, the controls, and the
 * six coordinated views.  All truth lives in the service; the only state
 * surviving a reload is the session id in the URL hash.
 */

import { HttpApi } from "./api.js";
import { Store } from "./state.js";
import type { MarkAction } from "./scales.js";
import { applyMarks } from "./render.js";
import { DEFAULT_SIZES, renderViews } from "./views/index.js";
import { framesInBox } from "./views/scatter.js";
import { OVERLAY_METRICS, OverlayMetric, Thresholds } from "./types.js";

const api = new HttpApi(
  (document.querySelector("body")?.dataset.api ?? "http://127.0.0.1:8000").replace(/\/$/, ""),
);
const store = new Store();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const svgs = {
  matrix: el<HTMLElement>("matrix-view").querySelector("svg") as SVGSVGElement,
  scatter: el<HTMLElement>("scatter-view").querySelector("svg") as SVGSVGElement,
  events: el<HTMLElement>("events-view").querySelector("svg") as SVGSVGElement,
  tree: el<HTMLElement>("tree-view").querySelector("svg") as SVGSVGElement,
  court: el<HTMLElement>("court-view").querySelector("svg") as SVGSVGElement,
  details: el<HTMLElement>("details-view").querySelector("svg") as SVGSVGElement,
};

async function dispatch(action: MarkAction): Promise<void> {
  const datasetId = store.state.datasetId;
  switch (action.type) {
    case "select-cell": {
      if (!datasetId) return;
      const membership = await api.getMembership(datasetId, {
        a: action.a,
        b: action.b,
      });
      store.selectMatrixCell(action.a, action.b, membership);
      break;
    }
    case "select-player": {
      if (!datasetId) return;
      const membership = await api.getMembership(datasetId, { node: action.node });
      store.selectPlayer(action.node, membership);
      break;
    }
    case "select-event":
      store.selectEvent(action.index);
      break;
    case "select-snapshot": {
      store.selectSnapshot(action.id);
      const sessionId = store.state.sessionId;
      if (sessionId && !store.data.details[action.id]) {
        try {
          store.cacheDetail(await api.getSnapshotDetail(sessionId, action.id));
        } catch (error) {
          store.setBanner(String(error));
        }
      }
      break;
    }
    case "select-frame":
      // single-point brush
      if (store.beginBrush()) {
        store.updateBrush([action.frame]);
        store.endBrush();
      }
      break;
  }
}

function readThresholds(): Thresholds {
  const capRaw = el<HTMLInputElement>("th-cap").value.trim();
  return {
    node_change_max: Number(el<HTMLInputElement>("th-node").value),
    link_change_max: Number(el<HTMLInputElement>("th-link").value),
    time_gap_max: Number(el<HTMLInputElement>("th-gap").value),
    frame_count_max: capRaw === "" ? null : Number(capRaw),
  };
}

async function refreshSession(sessionId: string): Promise<void> {
  const payload = await api.getSession(sessionId);
  store.setSession(payload);
  window.location.hash = `session=${sessionId}`;
}

el<HTMLFormElement>("upload-form").addEventListener("submit", async (event) => {
  event.preventDefault();
  const tracking = el<HTMLInputElement>("file-tracking").files?.[0];
  if (!tracking) return;
  try {
    const descriptor = await api.uploadDataset({
      tracking,
      links: el<HTMLInputElement>("file-links").files?.[0],
      events: el<HTMLInputElement>("file-events").files?.[0],
      name: tracking.name,
    });
    store.setDataset(descriptor);
    const [matrix, projection, events] = await Promise.all([
      api.getMatrix(descriptor.id),
      api.getProjection(descriptor.id),
      api.getEvents(descriptor.id),
    ]);
    store.setOverview({ matrix, projection, events });
  } catch (error) {
    store.setBanner(String(error));
  }
});

el<HTMLButtonElement>("create-session").addEventListener("click", async () => {
  const datasetId = store.state.datasetId;
  if (!datasetId || !store.canCreateSession) return;
  const frames = store.state.brush.frames;
  try {
    const payload = await api.createSession(
      datasetId,
      frames[0],
      frames[frames.length - 1],
    );
    store.setSession(payload);
    window.location.hash = `session=${payload.session_id}`;
  } catch (error) {
    store.setBanner(String(error));
  }
});

async function submitLayer(regenerate: boolean): Promise<void> {
  const sessionId = store.state.sessionId;
  if (!sessionId || store.state.pendingGeneration) return;
  store.setPending(true);
  try {
    const delta = await api.generateLayer(sessionId, readThresholds(), regenerate);
    if (regenerate) {
      await refreshSession(sessionId); // layer list changed below the top
    } else {
      store.applyLayerDelta(delta);
    }
  } catch (error) {
    store.setPending(false);
    store.setBanner(String(error));
  }
}

el<HTMLButtonElement>("generate-layer").addEventListener("click", () => {
  void submitLayer(false);
});
el<HTMLButtonElement>("regenerate-layer").addEventListener("click", () => {
  void submitLayer(true);
});
el<HTMLButtonElement>("delete-layer").addEventListener("click", async () => {
  const sessionId = store.state.sessionId;
  if (!sessionId) return;
  try {
    await api.deleteTopLayer(sessionId);
    store.dropTopLayer();
  } catch (error) {
    store.setBanner(String(error));
  }
});

const overlayBox = el<HTMLElement>("overlay-menu");
for (const metric of OVERLAY_METRICS) {
  const label = document.createElement("label");
  const input = document.createElement("input");
  input.type = "checkbox";
  input.value = metric;
  input.checked = store.state.overlayMetrics.includes(metric);
  input.addEventListener("change", () => {
    const chosen = [...overlayBox.querySelectorAll("input:checked")].map(
      (box) => (box as HTMLInputElement).value as OverlayMetric,
    );
    store.setOverlayMetrics(chosen);
  });
  label.appendChild(input);
  label.appendChild(document.createTextNode(metric.replace(/_/g, " ")));
  overlayBox.appendChild(label);
}

// scatter brush gesture: drag a box, select the frames inside it
const scatterSvg = svgs.scatter;
let brushStart: { x: number; y: number } | null = null;
scatterSvg.addEventListener("mousedown", (event) => {
  if (!store.data.projection) return;
  if (!store.beginBrush()) return;
  const rect = scatterSvg.getBoundingClientRect();
  brushStart = { x: event.clientX - rect.left, y: event.clientY - rect.top };
});
scatterSvg.addEventListener("mousemove", (event) => {
  if (!brushStart || !store.data.projection) return;
  const rect = scatterSvg.getBoundingClientRect();
  const frames = framesInBox(store.data.projection, DEFAULT_SIZES.scatter, {
    x0: brushStart.x,
    y0: brushStart.y,
    x1: event.clientX - rect.left,
    y1: event.clientY - rect.top,
  });
  store.updateBrush(frames);
});
window.addEventListener("mouseup", () => {
  if (!brushStart) return;
  brushStart = null;
  store.endBrush();
});

store.subscribe((state, data) => {
  const views = renderViews(state, data);
  applyMarks(svgs.matrix, views.matrix, dispatch);
  applyMarks(svgs.scatter, views.scatter, dispatch);
  applyMarks(svgs.events, views.events, dispatch);
  applyMarks(svgs.tree, views.tree, dispatch);
  applyMarks(svgs.court, views.court, dispatch);
  applyMarks(svgs.details, views.details, dispatch);

  el<HTMLElement>("banner").textContent = views.banner ?? "";
  el<HTMLElement>("banner").style.display = views.banner ? "block" : "none";
  const warning = store.brushWarning;
  el<HTMLElement>("brush-warning").textContent = warning ?? "";
  el<HTMLButtonElement>("create-session").disabled = !store.canCreateSession;
  const inSession = state.sessionId !== null;
  el<HTMLButtonElement>("generate-layer").disabled =
    !inSession || state.pendingGeneration;
  el<HTMLButtonElement>("regenerate-layer").disabled =
    !inSession || state.pendingGeneration || (data.tree?.layers.length ?? 0) < 2;
  el<HTMLButtonElement>("delete-layer").disabled =
    !inSession || (data.tree?.layers.length ?? 0) < 2;
  el<HTMLElement>("session-label").textContent = inSession
    ? `session ${state.sessionId}`
    : "no session";
});

// restore the session referenced by the URL hash, if any
const match = window.location.hash.match(/session=([0-9a-f]+)/);
if (match) {
  void (async () => {
    try {
      const payload = await api.getSession(match[1]);
      const [matrix, projection, events] = await Promise.all([
        api.getMatrix(payload.dataset_id),
        api.getProjection(payload.dataset_id),
        api.getEvents(payload.dataset_id),
      ]);
      store.setDataset({
        schema_version: payload.schema_version,
        id: payload.dataset_id,
        name: payload.dataset_id,
        frame_count: matrix.frame_range[1] + 1,
        node_universe: matrix.nodes,
        time_range: [0, 0],
        granularity: 0,
        event_count: events.events.length,
      });
      store.setOverview({ matrix, projection, events });
      store.setSession(payload);
    } catch (error) {
      store.setBanner(String(error));
    }
  })();
}
