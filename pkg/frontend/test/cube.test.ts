import { describe, expect, test } from "vitest";

import {
  CubePoint,
  cubePoints,
  cubeScales,
  dragRotation,
  hoverLabel,
  pick,
  projectPoint,
} from "../src/cube.js";
import { mulberry32 } from "./helpers.js";

function somePoints(n: number): CubePoint[] {
  const rand = mulberry32(9);
  return Array.from({ length: n }, (_, i) => ({
    compactness: 0.2 + 0.6 * rand(),
    efficiency_gap: -0.2 + 0.4 * rand(),
    ir: 1 + 30 * rand(),
    ensemble: i % 2 === 0 ? "rst" : "biased",
  }));
}

describe("metric cube", () => {
  test("hover label binds x, y, z to compactness, gap, ir", () => {
    const p: CubePoint = { compactness: 0.61, efficiency_gap: -0.043, ir: 12.5, ensemble: "rst" };
    expect(hoverLabel(p)).toEqual({ x: 0.61, y: -0.043, z: 12.5, ensemble: "rst" });
  });

  test("a single-point cloud projects and picks", () => {
    const points = cubePoints({
      header: ["compactness", "efficiency_gap", "ir", "ensemble"],
      rows: [[0.5, 0.01, 3.0, "only"]],
    });
    const scales = cubeScales(points);
    const s = projectPoint(points[0], scales, { yaw: 0.3, pitch: 0.2 }, 420);
    expect(Number.isFinite(s.x) && Number.isFinite(s.y)).toBe(true);
    expect(pick(points, scales, { yaw: 0.3, pitch: 0.2 }, 420, [s.x, s.y])).toBe(0);
  });

  test("picking stays correct under arbitrary rotations", () => {
    const points = somePoints(60);
    const scales = cubeScales(points);
    const rand = mulberry32(77);
    for (let trial = 0; trial < 25; trial++) {
      const rotation = { yaw: rand() * 6.28, pitch: (rand() - 0.5) * 2.8 };
      const target = Math.floor(rand() * points.length);
      const s = projectPoint(points[target], scales, rotation, 420);
      const hit = pick(points, scales, rotation, 420, [s.x, s.y], 3);
      expect(hit).not.toBeNull();
      // an overlapping point may win the pick, but only at (near) zero
      // screen distance, so its projection must coincide
      const hs = projectPoint(points[hit!], scales, rotation, 420);
      const sameScreen = Math.hypot(hs.x - s.x, hs.y - s.y);
      const targetDist = 0;
      expect(sameScreen).toBeLessThanOrEqual(targetDist + 3);
    }
  });

  test("pick returns null away from all points", () => {
    const points = somePoints(10);
    const scales = cubeScales(points);
    expect(pick(points, scales, { yaw: 0, pitch: 0 }, 420, [-100, -100], 5)).toBeNull();
  });

  test("drag accumulates rotation and clamps pitch", () => {
    let rotation = { yaw: 0, pitch: 0 };
    rotation = dragRotation(rotation, 100, 50);
    expect(rotation.yaw).toBeCloseTo(1.0);
    expect(rotation.pitch).toBeCloseTo(0.5);
    rotation = dragRotation(rotation, 0, 100000);
    expect(rotation.pitch).toBeLessThan(Math.PI / 2);
  });

  test("degenerate axis (constant metric) still projects", () => {
    const points: CubePoint[] = [
      { compactness: 0.5, efficiency_gap: 0.0, ir: 2.0, ensemble: "a" },
      { compactness: 0.5, efficiency_gap: 0.1, ir: 3.0, ensemble: "a" },
    ];
    const scales = cubeScales(points);
    const s = projectPoint(points[0], scales, { yaw: 0.5, pitch: 0.5 }, 400);
    expect(Number.isFinite(s.x)).toBe(true);
  });
});
