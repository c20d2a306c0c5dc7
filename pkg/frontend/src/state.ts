/** Pure view state: what the panel shows, derived only from service
 * responses. The UI never does geometry math beyond axis scaling, so
 * this module stores service payloads verbatim. */

import type { MorphOutcome, ShapeResponse } from "./api.js";
import type { CoordinatePair } from "./format.js";

export type Badge = "feasible" | "repaired" | "degenerate" | "error";

export interface ViewState {
  badge: Badge;
  /** Last shape the service accepted; kept across degenerate states. */
  shape: CoordinatePair[] | undefined;
  nearestName: string | undefined;
  /** Shown verbatim as the service reported it. */
  nearestSPrime: number | undefined;
  overlay: { name: string; shape: CoordinatePair[] } | undefined;
  overlayError: string | undefined;
  errorMessage: string | undefined;
}

export function initialState(): ViewState {
  return {
    badge: "degenerate",
    shape: undefined,
    nearestName: undefined,
    nearestSPrime: undefined,
    overlay: undefined,
    overlayError: undefined,
    errorMessage: undefined,
  };
}

export function applyMorphOutcome(
  state: ViewState,
  outcome: MorphOutcome,
): ViewState {
  switch (outcome.kind) {
    case "stale":
      return state; // a fresher request is already on its way
    case "degenerate":
      return { ...state, badge: "degenerate", errorMessage: undefined };
    case "error":
      return { ...state, badge: "error", errorMessage: outcome.message };
    case "shape":
      return applyShape(state, outcome.value);
  }
}

function applyShape(state: ViewState, value: ShapeResponse): ViewState {
  return {
    ...state,
    badge: value.repaired ? "repaired" : "feasible",
    shape: value.shape,
    nearestName: value.nearest.name,
    nearestSPrime: value.nearest.s_prime,
    errorMessage: undefined,
  };
}

export function setOverlay(
  state: ViewState,
  overlay: { name: string; shape: CoordinatePair[] } | undefined,
): ViewState {
  return { ...state, overlay, overlayError: undefined };
}

export function setOverlayError(state: ViewState, message: string): ViewState {
  return { ...state, overlay: undefined, overlayError: message };
}

/** Export is only meaningful when the display shows a current, valid shape. */
export function canExport(state: ViewState): boolean {
  return state.shape !== undefined && state.badge !== "degenerate"
    && state.badge !== "error";
}
