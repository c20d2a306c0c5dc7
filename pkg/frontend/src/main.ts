/** Explorer panel: twelve weight sliders driving live morphs against the
 * running service, with baseline thumbnails, a feasibility badge,
 * nearest-catalog readout, overlay comparison, and coordinate export. */

import { ApiClient } from "./api.js";
import { debounce } from "./debounce.js";
import { exportCoordinateText } from "./format.js";
import type { CoordinatePair } from "./format.js";
import { positionToWeight, weightToPosition } from "./sliders.js";
import {
  applyMorphOutcome,
  canExport,
  initialState,
  setOverlay,
  setOverlayError,
  type ViewState,
} from "./state.js";
import { fitTransform, shapeToPath, type ViewBox } from "./view.js";

const MAIN_VIEW: ViewBox = { width: 760, height: 300, margin: 20 };
const THUMB_VIEW: ViewBox = { width: 72, height: 28, margin: 2 };
const DEBOUNCE_MS = 50;

const api = new ApiClient();
let state: ViewState = initialState();
let weights: number[] = [];
let fineScale = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function thumbnailSvg(shape: CoordinatePair[]): string {
  const path = shapeToPath(shape, fitTransform([shape], THUMB_VIEW));
  return (
    `<svg width="${THUMB_VIEW.width}" height="${THUMB_VIEW.height}">` +
    `<path d="${path}" fill="none" stroke="#467" stroke-width="1"/></svg>`
  );
}

function render(): void {
  const badge = el<HTMLSpanElement>("badge");
  badge.textContent = state.badge;
  badge.className = `badge badge-${state.badge}`;

  const nearest = el<HTMLSpanElement>("nearest");
  nearest.textContent =
    state.nearestName === undefined
      ? "—"
      : `${state.nearestName} (s' = ${state.nearestSPrime})`;

  el<HTMLDivElement>("banner").textContent = state.errorMessage ?? "";
  el<HTMLDivElement>("overlay-error").textContent = state.overlayError ?? "";
  el<HTMLButtonElement>("export").disabled = !canExport(state);

  const curves: CoordinatePair[][] = [];
  if (state.shape) curves.push(state.shape);
  if (state.overlay) curves.push(state.overlay.shape);
  const transform = fitTransform(curves, MAIN_VIEW);
  el<HTMLElement>("shape-path").setAttribute(
    "d",
    state.shape ? shapeToPath(state.shape, transform) : "",
  );
  el<HTMLElement>("overlay-path").setAttribute(
    "d",
    state.overlay ? shapeToPath(state.overlay.shape, transform) : "",
  );
  el<HTMLSpanElement>("legend").textContent = state.overlay
    ? `— morph   — ${state.overlay.name}`
    : "";
}

const requestMorph = debounce(async () => {
  state = applyMorphOutcome(state, await api.morph(weights));
  render();
}, DEBOUNCE_MS);

function buildSliders(names: string[], shapes: CoordinatePair[][]): void {
  const panel = el<HTMLDivElement>("sliders");
  weights = names.map(() => 0);
  names.forEach((name, i) => {
    const row = document.createElement("div");
    row.className = "slider-row";

    const label = document.createElement("label");
    const valueText = document.createElement("span");
    valueText.className = "value";
    valueText.textContent = "0.000";
    label.append(name, valueText);

    const thumb = document.createElement("span");
    thumb.innerHTML = thumbnailSvg(shapes[i]!);

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "-1";
    slider.max = "1";
    slider.step = "0.001";
    slider.value = "0";
    slider.addEventListener("input", () => {
      const w = positionToWeight(
        parseFloat(slider.value),
        fineScale ? "fine" : "linear",
      );
      weights[i] = w;
      valueText.textContent = w.toFixed(3);
      requestMorph();
    });
    slider.dataset["index"] = String(i);

    row.append(label, thumb, slider);
    panel.appendChild(row);
  });

  el<HTMLInputElement>("fine-toggle").addEventListener("change", (event) => {
    fineScale = (event.target as HTMLInputElement).checked;
    // re-seat every handle so the displayed weights are unchanged
    panel
      .querySelectorAll<HTMLInputElement>("input[type=range]")
      .forEach((slider) => {
        const i = Number(slider.dataset["index"]);
        slider.value = String(
          weightToPosition(weights[i]!, fineScale ? "fine" : "linear"),
        );
      });
  });
}

function wireOverlay(): void {
  el<HTMLButtonElement>("overlay-load").addEventListener("click", async () => {
    const name = el<HTMLInputElement>("overlay-name").value.trim();
    if (!name) {
      state = setOverlay(state, undefined);
      render();
      return;
    }
    const entry = await api.getCatalogEntry(name);
    state = entry
      ? setOverlay(state, entry)
      : setOverlayError(state, `no catalog entry named "${name}"`);
    render();
  });
}

function wireExport(): void {
  el<HTMLButtonElement>("export").addEventListener("click", () => {
    if (!state.shape) return;
    const text = exportCoordinateText("morphed shape", state.shape);
    const blob = new Blob([text], { type: "text/plain" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "morphed_shape.dat";
    link.click();
    URL.revokeObjectURL(link.href);
  });
}

async function start(): Promise<void> {
  try {
    const baselines = await api.getBaselines();
    buildSliders(baselines.names, baselines.shapes);
    wireOverlay();
    wireExport();
    render();
  } catch (err) {
    el<HTMLDivElement>("banner").textContent =
      `service unreachable: ${String(err)}`;
    document
      .querySelectorAll<HTMLInputElement>("input, button")
      .forEach((control) => (control.disabled = true));
  }
}

void start();
