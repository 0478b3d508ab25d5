/** Fixture loading and a recording fake of the Api interface. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { Api } from "../src/api.js";
import type {
  DatasetDescriptor,
  EventsPayload,
  LayerDelta,
  MatrixPayload,
  ProjectionPayload,
  SessionPayload,
  SnapshotDetail,
  Thresholds,
} from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

export const descriptor = () => fixture<DatasetDescriptor>("descriptor.json");
export const matrix = () => fixture<MatrixPayload>("matrix.json");
export const projection = () => fixture<ProjectionPayload>("projection.json");
export const events = () => fixture<EventsPayload>("events.json");
export const session = () => fixture<SessionPayload>("session.json");
export const layerDelta = () => fixture<LayerDelta>("layer_delta.json");
export const regenDelta = () => fixture<LayerDelta>("regen_delta.json");
export const membership01 = () => fixture<{ frames: number[] }>("membership_0_1.json");
export const roundtrip = () =>
  fixture<{
    schedule: Thresholds[];
    service_tree_digest: string;
    cli_tree_digest: string;
  }>("roundtrip.json");

/** Serves recorded payloads and logs every generateLayer call. */
export class FakeApi implements Api {
  generateCalls: { thresholds: Thresholds; regenerate: boolean }[] = [];

  uploadDataset(): Promise<DatasetDescriptor> {
    return Promise.resolve(descriptor());
  }
  getMatrix(): Promise<MatrixPayload> {
    return Promise.resolve(matrix());
  }
  getProjection(): Promise<ProjectionPayload> {
    return Promise.resolve(projection());
  }
  getEvents(): Promise<EventsPayload> {
    return Promise.resolve(events());
  }
  getMembership(
    _datasetId: string,
    query: { node: number } | { a: number; b: number },
  ): Promise<number[]> {
    if ("a" in query && query.a === 0 && query.b === 1) {
      return Promise.resolve(membership01().frames);
    }
    return Promise.resolve([]);
  }
  createSession(): Promise<SessionPayload> {
    return Promise.resolve(session());
  }
  getSession(): Promise<SessionPayload> {
    return Promise.resolve(session());
  }
  generateLayer(
    _sessionId: string,
    thresholds: Thresholds,
    regenerate = false,
  ): Promise<LayerDelta> {
    this.generateCalls.push({ thresholds, regenerate });
    return Promise.resolve(regenerate ? regenDelta() : layerDelta());
  }
  deleteTopLayer(): Promise<void> {
    return Promise.resolve();
  }
  getSnapshotDetail(): Promise<SnapshotDetail> {
    throw new Error("not recorded");
  }
}
