import { describe, expect, it } from "vitest";

import { isContiguous, Store } from "../src/state.js";
import { descriptor, events, layerDelta, membership01, session } from "./helpers.js";

function loadedStore(): Store {
  const store = new Store();
  store.setDataset(descriptor());
  store.setOverview({ events: events() });
  return store;
}

describe("contiguity", () => {
  it("accepts dense ranges and rejects gaps", () => {
    expect(isContiguous([3, 4, 5])).toBe(true);
    expect(isContiguous([5, 4, 3])).toBe(true);
    expect(isContiguous([1, 3])).toBe(false);
    expect(isContiguous([])).toBe(false);
  });
});

describe("brush gestures", () => {
  it("allows at most one active gesture", () => {
    const store = loadedStore();
    expect(store.beginBrush()).toBe(true);
    expect(store.beginBrush()).toBe(false);
    store.endBrush();
    expect(store.beginBrush()).toBe(true);
  });

  it("drops frames outside the dataset", () => {
    const store = loadedStore();
    store.beginBrush();
    store.updateBrush([-2, 0, 1, 99]);
    store.endBrush();
    expect(store.state.brush.frames).toEqual([0, 1]);
  });

  it("enables session creation only for contiguous selections", () => {
    const store = loadedStore();
    store.beginBrush();
    store.updateBrush([2, 3, 4]);
    expect(store.canCreateSession).toBe(false); // still mid-gesture
    store.endBrush();
    expect(store.canCreateSession).toBe(true);
    expect(store.brushWarning).toBeNull();

    store.beginBrush();
    store.updateBrush([2, 5]);
    store.endBrush();
    expect(store.canCreateSession).toBe(false);
    expect(store.brushWarning).toMatch(/contiguous/);
  });
});

describe("selections reference existing entities", () => {
  it("ignores matrix cells outside the universe", () => {
    const store = loadedStore();
    store.selectMatrixCell(0, 99, [0, 1]);
    expect(store.state.selectedCell).toBeNull();
    store.selectMatrixCell(1, 0, [0, 1]);
    expect(store.state.selectedCell).toEqual({ a: 0, b: 1 });
  });

  it("ignores unknown events and snapshots", () => {
    const store = loadedStore();
    store.selectEvent(99);
    expect(store.state.selectedEvent).toBeNull();
    store.setSession(session());
    store.selectSnapshot("not-a-snapshot");
    expect(store.state.selectedSnapshots).toEqual([]);
    const real = session().tree.layers[0][0].id;
    store.selectSnapshot(real);
    expect(store.state.selectedSnapshots).toEqual([real]);
  });
});

describe("highlight is a single source of truth", () => {
  it("stores the service membership set verbatim", () => {
    const store = loadedStore();
    const frames = membership01().frames;
    store.selectMatrixCell(0, 1, frames);
    expect(store.state.highlight.frames).toEqual(frames);
    expect(store.state.highlight.players).toEqual([0, 1]);
    expect(store.state.highlight.links).toEqual([[0, 1]]);
  });

  it("clears everywhere at once", () => {
    const store = loadedStore();
    store.selectMatrixCell(0, 1, [0, 1, 2]);
    store.clearHighlight();
    expect(store.state.highlight).toEqual({ players: [], links: [], frames: [] });
    expect(store.state.selectedCell).toBeNull();
  });
});

describe("tree layer bookkeeping", () => {
  it("appends a generated layer and tracks the digest", () => {
    const store = loadedStore();
    store.setSession(session());
    const delta = layerDelta();
    store.applyLayerDelta(delta);
    const tree = store.data.tree!;
    expect(tree.layers.length).toBe(2);
    expect(tree.layers[1].map((s) => s.id)).toEqual(
      delta.snapshots.map((s) => s.id),
    );
    expect(tree.digest).toBe(delta.tree_digest);
  });

  it("drops only non-base layers", () => {
    const store = loadedStore();
    store.setSession(session());
    store.dropTopLayer(); // only layer 0, no-op
    expect(store.data.tree!.layers.length).toBe(1);
    store.applyLayerDelta(layerDelta());
    store.dropTopLayer();
    expect(store.data.tree!.layers.length).toBe(1);
  });
});
