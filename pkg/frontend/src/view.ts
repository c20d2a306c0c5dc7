/** SVG path construction: pure axis scaling of the service polyline.
 * No smoothing, resampling, or closing beyond joining the given points. */

import type { CoordinatePair } from "./format.js";

export interface ViewBox {
  width: number;
  height: number;
  margin: number;
}

export interface Transform {
  toScreen(p: CoordinatePair): [number, number];
}

/** Uniform scale fitting x in [0, 1] into the box, y centered about 0.
 * Both shapes in a comparison must share one transform, so it is built
 * from the union of the polylines it will render. */
export function fitTransform(
  shapes: readonly (readonly CoordinatePair[])[],
  box: ViewBox,
): Transform {
  let yMax = 0.08; // never collapse the axis for near-flat shapes
  for (const shape of shapes) {
    for (const [, y] of shape) {
      yMax = Math.max(yMax, Math.abs(y));
    }
  }
  const usableW = box.width - 2 * box.margin;
  const usableH = box.height - 2 * box.margin;
  const scale = Math.min(usableW, usableH / (2 * yMax));
  const x0 = box.margin;
  const yMid = box.height / 2;
  return {
    toScreen: ([x, y]) => [x0 + x * scale, yMid - y * scale],
  };
}

export function shapeToPath(
  shape: readonly CoordinatePair[],
  transform: Transform,
): string {
  if (shape.length === 0) return "";
  const parts: string[] = [];
  shape.forEach((p, i) => {
    const [sx, sy] = transform.toScreen(p);
    parts.push(`${i === 0 ? "M" : "L"}${round2(sx)} ${round2(sy)}`);
  });
  return parts.join(" ");
}

function round2(v: number): number {
  return Math.round(v * 100) / 100;
}
