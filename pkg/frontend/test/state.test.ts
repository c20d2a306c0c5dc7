import { describe, expect, it } from "vitest";

import type { ShapeResponse } from "../src/api.js";
import {
  applyMorphOutcome,
  canExport,
  initialState,
  setOverlay,
  setOverlayError,
} from "../src/state.js";

const shape: ShapeResponse = {
  shape: [
    [1, 0.01],
    [0, 0],
    [1, -0.01],
  ],
  feasible: true,
  repaired: false,
  nearest: { name: "Eppler E195", s_prime: 0.004 },
};

describe("morph outcomes", () => {
  it("starts degenerate with export disabled", () => {
    const state = initialState();
    expect(state.badge).toBe("degenerate");
    expect(canExport(state)).toBe(false);
  });

  it("a valid shape sets badge and nearest verbatim", () => {
    const state = applyMorphOutcome(initialState(), {
      kind: "shape",
      value: shape,
    });
    expect(state.badge).toBe("feasible");
    expect(state.shape).toBe(shape.shape);
    expect(state.nearestName).toBe("Eppler E195");
    expect(state.nearestSPrime).toBe(0.004);
    expect(canExport(state)).toBe(true);
  });

  it("a repaired shape shows the repaired badge", () => {
    const state = applyMorphOutcome(initialState(), {
      kind: "shape",
      value: { ...shape, repaired: true },
    });
    expect(state.badge).toBe("repaired");
  });

  it("degenerate keeps the last valid shape but disables export", () => {
    let state = applyMorphOutcome(initialState(), { kind: "shape", value: shape });
    state = applyMorphOutcome(state, { kind: "degenerate" });
    expect(state.badge).toBe("degenerate");
    expect(state.shape).toBe(shape.shape); // retained for display
    expect(canExport(state)).toBe(false);
  });

  it("stale outcomes change nothing", () => {
    const before = applyMorphOutcome(initialState(), {
      kind: "shape",
      value: shape,
    });
    expect(applyMorphOutcome(before, { kind: "stale" })).toBe(before);
  });

  it("errors carry a message and disable export", () => {
    const state = applyMorphOutcome(initialState(), {
      kind: "error",
      message: "HTTP 500",
    });
    expect(state.badge).toBe("error");
    expect(state.errorMessage).toBe("HTTP 500");
    expect(canExport(state)).toBe(false);
  });
});

describe("overlay", () => {
  it("setting an overlay clears a previous overlay error", () => {
    let state = setOverlayError(initialState(), "no catalog entry");
    expect(state.overlayError).toContain("no catalog entry");
    state = setOverlay(state, { name: "UIUC Chen", shape: shape.shape });
    expect(state.overlay?.name).toBe("UIUC Chen");
    expect(state.overlayError).toBeUndefined();
  });

  it("an overlay error removes the overlay", () => {
    let state = setOverlay(initialState(), { name: "X", shape: shape.shape });
    state = setOverlayError(state, "gone");
    expect(state.overlay).toBeUndefined();
  });
});
