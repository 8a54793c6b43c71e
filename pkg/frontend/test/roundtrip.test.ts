/** Round-trip against a real bundle produced by the engine's export
 * command: load it, and confirm that every number surfaced anywhere in the
 * UI layer is exactly a bundle value (no client-side recomputation). */

import { describe, expect, test } from "vitest";

import { cubePoints, cubeScales, hoverLabel, pick, projectPoint } from "../src/cube.js";
import { cubeTooltip, displayValue } from "../src/format.js";
import { loadBundle } from "../src/loader.js";
import { pcpAxes, pcpLines } from "../src/pcp.js";
import { fileFetcher } from "./helpers.js";

const fetchJson = fileFetcher();

describe("exported bundle round trip", () => {
  test("loads without schema errors and lists both plans", async () => {
    const bundle = await loadBundle(fetchJson);
    expect([...bundle.plans.keys()].sort()).toEqual(["balanced", "quads"]);
    expect(bundle.cloud.rows.length).toBeGreaterThan(50);
    for (const plan of bundle.manifest.plans) {
      expect(bundle.plans.get(plan.name)!.features).toHaveLength(plan.k);
    }
  });

  test("every cube hover label equals its bundle row", async () => {
    const bundle = await loadBundle(fetchJson);
    const points = cubePoints(bundle.cloud);
    points.forEach((point, i) => {
      const label = hoverLabel(point);
      const row = bundle.cloud.rows[i];
      expect(label.x).toBe(row[0]);
      expect(label.y).toBe(row[1]);
      expect(label.z).toBe(row[2]);
      expect(label.ensemble).toBe(row[3]);
      const tip = cubeTooltip(label.x, label.y, label.z, label.ensemble);
      expect(tip).toContain(String(row[0]));
      expect(tip).toContain(String(row[1]));
      expect(tip).toContain(String(row[2]));
    });
  });

  test("picking a projected point recovers its own row", async () => {
    const bundle = await loadBundle(fetchJson);
    const points = cubePoints(bundle.cloud);
    const scales = cubeScales(points);
    const rotation = { yaw: 0.9, pitch: 0.35 };
    // pick at the exact projected position of a point; the nearest match
    // must carry identical metric values (overlapping points are fine)
    for (const i of [0, 7, points.length - 1]) {
      const s = projectPoint(points[i], scales, rotation, 420);
      const hit = pick(points, scales, rotation, 420, [s.x, s.y], 4);
      expect(hit).not.toBeNull();
      const got = hoverLabel(points[hit!]);
      const want = hoverLabel(points[i]);
      expect(got.x).toBe(want.x);
      expect(got.y).toBe(want.y);
      expect(got.z).toBe(want.z);
    }
  });

  test("parallel-coordinate vertices carry raw bundle attribute values", async () => {
    const bundle = await loadBundle(fetchJson);
    const plan = bundle.plans.get("balanced")!;
    const axes = pcpAxes(bundle.manifest.attributes, [plan]);
    const lines = pcpLines(plan, axes);
    expect(lines).toHaveLength(plan.features.length);
    for (const line of lines) {
      const feature = plan.features.find((f) => f.properties.district === line.district)!;
      for (const axis of axes) {
        expect(line.values[axis.key]).toBe(feature.properties[axis.key]);
        expect(displayValue(line.values[axis.key])).toBe(String(feature.properties[axis.key]));
      }
      for (const [, yFrac] of line.vertices) {
        expect(yFrac).toBeGreaterThanOrEqual(-1e-12);
        expect(yFrac).toBeLessThanOrEqual(1 + 1e-12);
      }
    }
  });

  test("plan metrics shown in the UI are bundle values verbatim", async () => {
    const bundle = await loadBundle(fetchJson);
    const raw = (await fetchJson("metrics.json")) as Record<string, Record<string, number>>;
    for (const plan of bundle.manifest.plans) {
      for (const key of ["ir", "normalized_ir", "mean_polsby_popper", "efficiency_gap"]) {
        const shown = displayValue(plan.metrics[key as keyof typeof plan.metrics] as number);
        expect(shown).toBe(String(raw[plan.name][key]));
      }
    }
  });
});
