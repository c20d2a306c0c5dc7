/** Typed client for the shape service. Morph requests are latest-wins:
 * a newer request aborts the in-flight one, so stale responses can never
 * overwrite fresher state. */

import type { CoordinatePair } from "./format.js";

export interface NearestMatch {
  name: string;
  s_prime: number;
}

export interface ShapeResponse {
  shape: CoordinatePair[];
  feasible: boolean;
  repaired: boolean;
  nearest: NearestMatch;
}

export interface BaselinesResponse {
  names: string[];
  shapes: CoordinatePair[][];
}

export type MorphOutcome =
  | { kind: "shape"; value: ShapeResponse }
  | { kind: "degenerate" }
  | { kind: "stale" }
  | { kind: "error"; message: string };

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  private inFlight: AbortController | undefined;

  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async getBaselines(): Promise<BaselinesResponse> {
    const response = await this.fetchImpl(`${this.base}/baselines`);
    if (!response.ok) throw new Error(`baselines: HTTP ${response.status}`);
    return (await response.json()) as BaselinesResponse;
  }

  async getCatalogEntry(
    name: string,
  ): Promise<{ name: string; shape: CoordinatePair[] } | undefined> {
    const response = await this.fetchImpl(
      `${this.base}/catalog/${encodeURIComponent(name)}`,
    );
    if (response.status === 404) return undefined;
    if (!response.ok) throw new Error(`catalog: HTTP ${response.status}`);
    return (await response.json()) as { name: string; shape: CoordinatePair[] };
  }

  /** POST /morph superseding any in-flight morph request. */
  async morph(weights: readonly number[]): Promise<MorphOutcome> {
    this.inFlight?.abort();
    const controller = new AbortController();
    this.inFlight = controller;
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.base}/morph`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ weights }),
        signal: controller.signal,
      });
    } catch (err) {
      if (controller.signal.aborted) return { kind: "stale" };
      return { kind: "error", message: String(err) };
    }
    if (controller.signal.aborted) return { kind: "stale" };
    if (response.status === 422) return { kind: "degenerate" };
    if (!response.ok) {
      return { kind: "error", message: `HTTP ${response.status}` };
    }
    return { kind: "shape", value: (await response.json()) as ShapeResponse };
  }
}
