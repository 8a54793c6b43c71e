/** Attribute symbolization: quantile class breaks for choropleths, linear
 * bar heights, and square-root proportional symbol radii.
 *
 * All functions map bundle values to visual channels; none derives new
 * numbers for display.
 */

export type SymbolMode = "choropleth" | "bars" | "symbols";

export interface ClassBreaks {
  /** Ascending upper bounds, one per class; the last equals the data max. */
  thresholds: number[];
  min: number;
  max: number;
}

function quantileLinear(sorted: number[], q: number): number {
  const pos = q * (sorted.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

/** Quantile breaks with a fixed class count; covers [min, max] exactly. */
export function quantileBreaks(values: number[], classes = 5): ClassBreaks {
  if (values.length === 0) throw new Error("quantileBreaks needs values");
  const sorted = [...values].sort((a, b) => a - b);
  const thresholds: number[] = [];
  for (let i = 1; i <= classes; i++) {
    thresholds.push(quantileLinear(sorted, i / classes));
  }
  return { thresholds, min: sorted[0], max: sorted[sorted.length - 1] };
}

export function classify(value: number, breaks: ClassBreaks): number {
  for (let i = 0; i < breaks.thresholds.length; i++) {
    if (value <= breaks.thresholds[i]) return i;
  }
  return breaks.thresholds.length - 1;
}

/** Square-root radius scaling so symbol area tracks the value. */
export function proportionalRadius(value: number, maxValue: number, maxRadiusPx = 28): number {
  if (maxValue <= 0) return 0;
  return maxRadiusPx * Math.sqrt(Math.max(value, 0) / maxValue);
}

export function barHeight(value: number, min: number, max: number, maxHeightPx = 60): number {
  if (max <= min) return maxHeightPx / 2;
  return (maxHeightPx * (value - min)) / (max - min);
}

/** Legend entries: one [lower, upper] range per class. */
export function legendRanges(breaks: ClassBreaks): Array<[number, number]> {
  const out: Array<[number, number]> = [];
  let lower = breaks.min;
  for (const upper of breaks.thresholds) {
    out.push([lower, upper]);
    lower = upper;
  }
  return out;
}
