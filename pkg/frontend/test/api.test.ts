import { describe, expect, it } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";

const SHAPE_BODY = {
  shape: [
    [1, 0.001],
    [0, 0],
    [1, -0.001],
  ],
  feasible: true,
  repaired: false,
  nearest: { name: "Selig S9104", s_prime: 0.0123 },
};

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("ApiClient.morph", () => {
  it("returns the parsed shape payload", async () => {
    const client = new ApiClient("", async (input, init) => {
      expect(input).toBe("/morph");
      expect(JSON.parse(String(init?.body))).toEqual({ weights: [1, 0, 0] });
      return jsonResponse(200, SHAPE_BODY);
    });
    const outcome = await client.morph([1, 0, 0]);
    expect(outcome).toEqual({ kind: "shape", value: SHAPE_BODY });
  });

  it("maps 422 to a degenerate outcome", async () => {
    const client = new ApiClient("", async () =>
      jsonResponse(422, { detail: "degenerate normalization" }),
    );
    expect(await client.morph([0, 0, 0])).toEqual({ kind: "degenerate" });
  });

  it("maps other failures to error outcomes", async () => {
    const client = new ApiClient("", async () =>
      jsonResponse(400, { detail: "expected 12 weights" }),
    );
    expect(await client.morph([1])).toEqual({
      kind: "error",
      message: "HTTP 400",
    });
  });

  it("latest request wins: the superseded call reports stale", async () => {
    let release: (() => void) | undefined;
    const gate = new Promise<void>((resolve) => (release = resolve));
    let calls = 0;
    const fetchImpl: FetchLike = async (_input, init) => {
      calls += 1;
      if (calls === 1) {
        await gate; // hold the first request until the second lands
        if (init?.signal?.aborted) throw new DOMException("aborted", "AbortError");
      }
      return jsonResponse(200, SHAPE_BODY);
    };
    const client = new ApiClient("", fetchImpl);
    const first = client.morph([1, 0, 0]);
    const second = client.morph([0, 1, 0]);
    release!();
    expect(await second).toEqual({ kind: "shape", value: SHAPE_BODY });
    expect(await first).toEqual({ kind: "stale" });
  });

  it("network failure on the live request reports an error", async () => {
    const client = new ApiClient("", async () => {
      throw new TypeError("fetch failed");
    });
    const outcome = await client.morph([1, 0, 0]);
    expect(outcome.kind).toBe("error");
  });
});

describe("ApiClient lookups", () => {
  it("getBaselines parses names and shapes", async () => {
    const body = { names: ["A", "B"], shapes: [[[1, 0]], [[1, 0.1]]] };
    const client = new ApiClient("", async () => jsonResponse(200, body));
    expect(await client.getBaselines()).toEqual(body);
  });

  it("getCatalogEntry resolves undefined on 404", async () => {
    const client = new ApiClient("", async () =>
      jsonResponse(404, { detail: "unknown airfoil" }),
    );
    expect(await client.getCatalogEntry("nope")).toBeUndefined();
  });

  it("getCatalogEntry URL-encodes names", async () => {
    let seen = "";
    const client = new ApiClient("", async (input) => {
      seen = input;
      return jsonResponse(200, { name: "Gottingen 531", shape: [] });
    });
    await client.getCatalogEntry("Gottingen 531");
    expect(seen).toBe("/catalog/Gottingen%20531");
  });
});
