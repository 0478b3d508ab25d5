/** Typed client for the snapgraph HTTP API; the UI's only data source. */

import type {
  DatasetDescriptor,
  EventsPayload,
  LayerDelta,
  MatrixPayload,
  ProjectionPayload,
  SessionPayload,
  SnapshotDetail,
  Thresholds,
} from "./types.js";

export interface Api {
  uploadDataset(files: {
    tracking: Blob;
    links?: Blob;
    events?: Blob;
    name?: string;
  }): Promise<DatasetDescriptor>;
  getMatrix(datasetId: string, from?: number, to?: number): Promise<MatrixPayload>;
  getProjection(
    datasetId: string,
    params?: { perplexity?: number; seed?: number; iters?: number },
  ): Promise<ProjectionPayload>;
  getEvents(datasetId: string): Promise<EventsPayload>;
  getMembership(
    datasetId: string,
    query: { node: number } | { a: number; b: number },
  ): Promise<number[]>;
  createSession(datasetId: string, fromFrame: number, toFrame: number): Promise<SessionPayload>;
  getSession(sessionId: string): Promise<SessionPayload>;
  generateLayer(
    sessionId: string,
    thresholds: Thresholds,
    regenerate?: boolean,
  ): Promise<LayerDelta>;
  deleteTopLayer(sessionId: string): Promise<void>;
  getSnapshotDetail(sessionId: string, snapshotId: string): Promise<SnapshotDetail>;
}

export class HttpApi implements Api {
  constructor(private baseUrl: string) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        detail = body.detail ?? body.error ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new Error(`${response.status}: ${detail}`);
    }
    return (await response.json()) as T;
  }

  uploadDataset(files: {
    tracking: Blob;
    links?: Blob;
    events?: Blob;
    name?: string;
  }): Promise<DatasetDescriptor> {
    const form = new FormData();
    form.append("tracking", files.tracking, "tracking.csv");
    if (files.links) form.append("links", files.links, "links.csv");
    if (files.events) form.append("events", files.events, "events.csv");
    if (files.name) form.append("name", files.name);
    return this.json("/datasets", { method: "POST", body: form });
  }

  getMatrix(datasetId: string, from?: number, to?: number): Promise<MatrixPayload> {
    const params = new URLSearchParams();
    if (from !== undefined) params.set("from", String(from));
    if (to !== undefined) params.set("to", String(to));
    const suffix = params.size ? `?${params}` : "";
    return this.json(`/datasets/${datasetId}/matrix${suffix}`);
  }

  getProjection(
    datasetId: string,
    params: { perplexity?: number; seed?: number; iters?: number } = {},
  ): Promise<ProjectionPayload> {
    const query = new URLSearchParams();
    if (params.perplexity !== undefined) query.set("perplexity", String(params.perplexity));
    if (params.seed !== undefined) query.set("seed", String(params.seed));
    if (params.iters !== undefined) query.set("iters", String(params.iters));
    const suffix = query.size ? `?${query}` : "";
    return this.json(`/datasets/${datasetId}/projection${suffix}`);
  }

  getEvents(datasetId: string): Promise<EventsPayload> {
    return this.json(`/datasets/${datasetId}/events`);
  }

  async getMembership(
    datasetId: string,
    query: { node: number } | { a: number; b: number },
  ): Promise<number[]> {
    const params = new URLSearchParams();
    if ("node" in query) params.set("node", String(query.node));
    else {
      params.set("a", String(query.a));
      params.set("b", String(query.b));
    }
    const body = await this.json<{ frames: number[] }>(
      `/datasets/${datasetId}/membership?${params}`,
    );
    return body.frames;
  }

  createSession(
    datasetId: string,
    fromFrame: number,
    toFrame: number,
  ): Promise<SessionPayload> {
    return this.json("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        dataset_id: datasetId,
        from_frame: fromFrame,
        to_frame: toFrame,
      }),
    });
  }

  getSession(sessionId: string): Promise<SessionPayload> {
    return this.json(`/sessions/${sessionId}`);
  }

  generateLayer(
    sessionId: string,
    thresholds: Thresholds,
    regenerate = false,
  ): Promise<LayerDelta> {
    return this.json(`/sessions/${sessionId}/layers`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ thresholds, regenerate }),
    });
  }

  async deleteTopLayer(sessionId: string): Promise<void> {
    await this.json(`/sessions/${sessionId}/layers/top`, { method: "DELETE" });
  }

  getSnapshotDetail(sessionId: string, snapshotId: string): Promise<SnapshotDetail> {
    return this.json(`/sessions/${sessionId}/snapshots/${snapshotId}`);
  }
}
