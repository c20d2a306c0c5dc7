/** Weight slider scale: linear by default, with a fine-control toggle
 * that maps the slider position through a signed logarithmic curve so
 * most of the travel covers small weights. Both maps are bijections of
 * [-1, 1] onto itself. */

const DECADES = 3; // fine mode spreads |w| in [1e-3, 1] over the travel

export type SliderScale = "linear" | "fine";

export function positionToWeight(position: number, scale: SliderScale): number {
  const clamped = Math.max(-1, Math.min(1, position));
  if (scale === "linear") return clamped;
  const magnitude =
    (Math.pow(10, DECADES * Math.abs(clamped)) - 1) /
    (Math.pow(10, DECADES) - 1);
  return Math.sign(clamped) * magnitude;
}

export function weightToPosition(weight: number, scale: SliderScale): number {
  const clamped = Math.max(-1, Math.min(1, weight));
  if (scale === "linear") return clamped;
  const magnitude =
    Math.log10(1 + Math.abs(clamped) * (Math.pow(10, DECADES) - 1)) / DECADES;
  return Math.sign(clamped) * magnitude;
}
