/** Display formatting. The number passed in is the number shown: formatting
 * chooses digits, never recomputes. displayValue() keeps full precision so
 * tests can assert string-for-string equality with bundle values. */

export function displayValue(value: number): string {
  return String(value);
}

export function shortValue(value: number): string {
  if (Number.isInteger(value)) return String(value);
  const magnitude = Math.abs(value);
  if (magnitude >= 1000) return value.toFixed(0);
  if (magnitude >= 1) return value.toFixed(2);
  return value.toFixed(4);
}

export function districtTooltip(
  district: number,
  attributeLabel: string,
  value: number,
): string {
  return `District ${district} | ${attributeLabel}: ${displayValue(value)}`;
}

export function cubeTooltip(x: number, y: number, z: number, ensemble: string): string {
  return [
    `x (compactness): ${displayValue(x)}`,
    `y (efficiency gap): ${displayValue(y)}`,
    `z (interaction ratio): ${displayValue(z)}`,
    `ensemble: ${ensemble}`,
  ].join("\n");
}
