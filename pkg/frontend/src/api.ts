/** Typed client for the workbench HTTP endpoints.
 *
 * Every call goes through a single queue, so at most one request is in
 * flight at a time; interactions fired while one is pending run in order.
 * Raw response bodies are kept alongside the parsed documents because the
 * server's bytes are the source of truth for state snapshots. */

import type { QuiverDoc, SeedDoc, SeedMutation, StepDoc } from "./types.js";

export interface Fetched<T> {
  /** Exact response body as sent by the server. */
  body: string;
  doc: T;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: string;

  constructor(status: number, code: string, detail: string) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly base: string;
  /** Requests actually sent over the wire (frozen-vertex clicks send none). */
  requestsSent = 0;
  private readonly fetchImpl: FetchLike;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(base: string, fetchImpl?: FetchLike) {
    this.base = base.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  /** Serialize calls: each request starts only after the previous settled. */
  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.queue.then(task, task);
    this.queue = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }

  private request<T>(path: string, init?: RequestInit): Promise<Fetched<T>> {
    return this.enqueue(async () => {
      this.requestsSent += 1;
      const response = await this.fetchImpl(this.base + path, init);
      const body = await response.text();
      if (!response.ok) {
        let code = "http_error";
        let detail = body;
        try {
          const parsed = JSON.parse(body) as { error?: string; detail?: string };
          code = parsed.error ?? code;
          detail = parsed.detail ?? detail;
        } catch {
          // non-JSON error body; keep the raw text
        }
        throw new ApiError(response.status, code, detail);
      }
      return { body, doc: JSON.parse(body) as T };
    });
  }

  private post<T>(path: string, payload: unknown): Promise<Fetched<T>> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async health(): Promise<boolean> {
    const got = await this.request<{ ok: boolean }>("/health");
    return got.doc.ok === true;
  }

  seedFromCell(cell: string): Promise<Fetched<SeedDoc>> {
    return this.request(`/loopgroup/seed?cell=${encodeURIComponent(cell)}`);
  }

  mutateSeed(seed: SeedDoc, vertex: string): Promise<Fetched<SeedMutation>> {
    return this.post("/seed/mutate", { seed, vertex });
  }

  quiverFromWord(graph: string, word: readonly number[]): Promise<Fetched<QuiverDoc>> {
    const params = new URLSearchParams({ graph, word: word.join(",") });
    return this.request(`/quiver/from-word?${params.toString()}`);
  }

  mutateQuiver(quiver: QuiverDoc, vertex: string): Promise<Fetched<QuiverDoc>> {
    return this.post("/quiver/mutate", { quiver, vertex });
  }

  exploreStep(seed: SeedDoc): Promise<Fetched<StepDoc>> {
    return this.post("/seed/explore-step", { seed });
  }
}
