/** The rotatable 3D metric cube: orthographic projection, drag rotation,
 * and projection-independent point picking.
 *
 * Hover labels bind x, y, z to the compactness, efficiency gap, and
 * interaction ratio of the underlying bundle row, verbatim.
 */

import type { PointCloud } from "./types.js";

export interface CubePoint {
  compactness: number;
  efficiency_gap: number;
  ir: number;
  ensemble: string;
}

export interface Rotation {
  /** Radians around the vertical axis. */
  yaw: number;
  /** Radians around the horizontal screen axis. */
  pitch: number;
}

export function cubePoints(cloud: PointCloud): CubePoint[] {
  return cloud.rows.map(([compactness, efficiency_gap, ir, ensemble]) => ({
    compactness,
    efficiency_gap,
    ir,
    ensemble,
  }));
}

export interface AxisScale {
  min: number;
  max: number;
}

export interface CubeScales {
  x: AxisScale;
  y: AxisScale;
  z: AxisScale;
}

export function cubeScales(points: CubePoint[]): CubeScales {
  const axis = (values: number[]): AxisScale => {
    const min = Math.min(...values);
    const max = Math.max(...values);
    return max > min ? { min, max } : { min: min - 0.5, max: max + 0.5 };
  };
  return {
    x: axis(points.map((p) => p.compactness)),
    y: axis(points.map((p) => p.efficiency_gap)),
    z: axis(points.map((p) => p.ir)),
  };
}

function normalized(p: CubePoint, scales: CubeScales): [number, number, number] {
  const t = (v: number, s: AxisScale) => (v - s.min) / (s.max - s.min) - 0.5;
  return [t(p.compactness, scales.x), t(p.efficiency_gap, scales.y), t(p.ir, scales.z)];
}

/** Orthographic screen position (and depth for z-ordering). */
export function projectPoint(
  p: CubePoint,
  scales: CubeScales,
  rotation: Rotation,
  sizePx: number,
): { x: number; y: number; depth: number } {
  const [nx, ny, nz] = normalized(p, scales);
  const cosYaw = Math.cos(rotation.yaw);
  const sinYaw = Math.sin(rotation.yaw);
  const cosPitch = Math.cos(rotation.pitch);
  const sinPitch = Math.sin(rotation.pitch);
  // yaw about the vertical (z up on screen), then pitch toward the viewer
  const rx = nx * cosYaw - ny * sinYaw;
  const ry = nx * sinYaw + ny * cosYaw;
  const rz = nz;
  const sy = ry * cosPitch + rz * sinPitch;
  const depth = -ry * sinPitch + rz * cosPitch;
  const half = sizePx / 2;
  const span = sizePx * 0.42;
  return { x: half + rx * span, y: half - sy * span, depth };
}

/** Nearest point within tolerance of the cursor, by screen distance.
 * Picking happens in projected space, so it stays correct under any
 * rotation. Returns the row index or null. */
export function pick(
  points: CubePoint[],
  scales: CubeScales,
  rotation: Rotation,
  sizePx: number,
  cursor: [number, number],
  tolerancePx = 8,
): number | null {
  let best: number | null = null;
  let bestDist = tolerancePx;
  let bestDepth = -Infinity;
  points.forEach((p, i) => {
    const s = projectPoint(p, scales, rotation, sizePx);
    const dist = Math.hypot(s.x - cursor[0], s.y - cursor[1]);
    if (dist < bestDist || (dist === bestDist && s.depth > bestDepth)) {
      best = i;
      bestDist = dist;
      bestDepth = s.depth;
    }
  });
  return best;
}

export interface HoverLabel {
  x: number;
  y: number;
  z: number;
  ensemble: string;
}

/** x, y, z bind to compactness, efficiency gap, and IR of the row. */
export function hoverLabel(point: CubePoint): HoverLabel {
  return {
    x: point.compactness,
    y: point.efficiency_gap,
    z: point.ir,
    ensemble: point.ensemble,
  };
}

export function dragRotation(rotation: Rotation, dxPx: number, dyPx: number): Rotation {
  const pitchLimit = Math.PI / 2 - 0.01;
  return {
    yaw: rotation.yaw + dxPx * 0.01,
    pitch: Math.min(pitchLimit, Math.max(-pitchLimit, rotation.pitch + dyPx * 0.01)),
  };
}
