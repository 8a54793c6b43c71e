/** Slippy-tile math for the optional base map underlay.
 *
 * Geographic coordinates project to normalized Web Mercator world space
 * [0,1]^2; non-geographic bundles (synthetic fixtures) render in raw
 * coordinates with no tiles.
 */

export function isGeographic(points: Array<[number, number]>): boolean {
  return points.every(([x, y]) => Math.abs(x) <= 180 && Math.abs(y) <= 85.06);
}

/** Lon/lat degrees -> normalized mercator [0,1]^2, y increasing north. */
export function mercator([lon, lat]: [number, number]): [number, number] {
  const x = (lon + 180) / 360;
  const sin = Math.sin((lat * Math.PI) / 180);
  const y = 0.5 - Math.log((1 + sin) / (1 - sin)) / (4 * Math.PI);
  return [x, 1 - y];
}

export interface TilePlacement {
  z: number;
  x: number;
  y: number;
  url: string;
  /** Top-left corner in world units; tile spans 1/2^z. */
  world: [number, number];
}

export function tileUrlFor(template: string, z: number, x: number, y: number): string {
  return template.replace("{z}", String(z)).replace("{x}", String(x)).replace("{y}", String(y));
}

/** Tiles covering a world-space viewport at a pixel scale of px per world
 * unit, assuming 256px tiles. */
export function tileCover(
  template: string,
  worldMin: [number, number],
  worldMax: [number, number],
  pxPerWorldUnit: number,
): TilePlacement[] {
  const z = Math.max(0, Math.min(19, Math.floor(Math.log2(pxPerWorldUnit / 256))));
  const n = 1 << z;
  const span = 1 / n;
  const tiles: TilePlacement[] = [];
  const x0 = Math.max(0, Math.floor(worldMin[0] * n));
  const x1 = Math.min(n - 1, Math.floor(worldMax[0] * n));
  // world y increases upward; tile y counts down from the top
  const ty0 = Math.max(0, Math.floor((1 - worldMax[1]) * n));
  const ty1 = Math.min(n - 1, Math.floor((1 - worldMin[1]) * n));
  for (let x = x0; x <= x1; x++) {
    for (let ty = ty0; ty <= ty1; ty++) {
      tiles.push({
        z,
        x,
        y: ty,
        url: tileUrlFor(template, z, x, ty),
        world: [x * span, 1 - ty * span],
      });
    }
  }
  return tiles;
}
