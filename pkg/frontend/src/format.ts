/**
 * Coordinate-file serialization, byte-identical to the service's
 * canonical form: a name line followed by "  x  y" rows where each
 * number is printed with 17 significant digits, C printf "%.17g" style.
 */

/** Format a double like C/Python "%.17g". */
export function format17g(v: number): string {
  if (Number.isNaN(v)) return "nan";
  if (!Number.isFinite(v)) return v > 0 ? "inf" : "-inf";
  if (v === 0) return Object.is(v, -0) ? "-0" : "0";

  const sign = v < 0 ? "-" : "";
  // toExponential(16) rounds to 17 significant digits, the same rounding
  // %.17g performs, and normalizes carry (9.99...e-1 -> 1e+0) for us.
  const [mantissa, expPart] = Math.abs(v).toExponential(16).split("e") as [
    string,
    string,
  ];
  const exp = parseInt(expPart, 10);
  const digits = mantissa.replace(".", ""); // exactly 17 digits

  // %g switches to exponential outside the precision window
  if (exp < -4 || exp >= 17) {
    const frac = trimZeros(digits.slice(1));
    const expAbs = String(Math.abs(exp)).padStart(2, "0");
    const head = frac ? `${digits[0]}.${frac}` : digits[0];
    return `${sign}${head}e${exp < 0 ? "-" : "+"}${expAbs}`;
  }
  if (exp < 0) {
    const frac = trimZeros("0".repeat(-exp - 1) + digits);
    return `${sign}0.${frac}`;
  }
  const intPart = digits.slice(0, exp + 1);
  const frac = trimZeros(digits.slice(exp + 1));
  return frac ? `${sign}${intPart}.${frac}` : `${sign}${intPart}`;
}

function trimZeros(frac: string): string {
  return frac.replace(/0+$/, "");
}

export type CoordinatePair = readonly [number, number];

/** Serialize a polyline exactly as the service would write it to disk. */
export function exportCoordinateText(
  name: string,
  shape: readonly CoordinatePair[],
): string {
  let out = `${name}\n`;
  for (const [x, y] of shape) {
    out += `  ${format17g(x)}  ${format17g(y)}\n`;
  }
  return out;
}
