import { describe, expect, test } from "vitest";

import { barHeight, classify, legendRanges, proportionalRadius, quantileBreaks } from "../src/breaks.js";
import { loadBundle } from "../src/loader.js";
import { linkedLine, pcpAxes, pcpLines } from "../src/pcp.js";
import { isGeographic, mercator, tileCover } from "../src/tiles.js";
import { fileFetcher } from "./helpers.js";

describe("class breaks", () => {
  test("breaks cover the full value range", () => {
    const values = [3, 9, 1, 7, 5, 2, 8];
    const breaks = quantileBreaks(values, 5);
    expect(breaks.min).toBe(1);
    expect(breaks.max).toBe(9);
    expect(breaks.thresholds.at(-1)).toBe(9);
    const ranges = legendRanges(breaks);
    expect(ranges[0][0]).toBe(1);
    expect(ranges.at(-1)![1]).toBe(9);
    expect(ranges).toHaveLength(5);
  });

  test("classify maps min to the first class and max to the last", () => {
    const breaks = quantileBreaks([0, 10, 20, 30, 40, 50], 5);
    expect(classify(0, breaks)).toBe(0);
    expect(classify(50, breaks)).toBe(4);
    for (const v of [5, 15, 25, 45]) {
      const c = classify(v, breaks);
      expect(c).toBeGreaterThanOrEqual(0);
      expect(c).toBeLessThan(5);
    }
  });

  test("proportional radius scales with the square root of the value", () => {
    expect(proportionalRadius(100, 100, 28)).toBe(28);
    expect(proportionalRadius(25, 100, 28)).toBeCloseTo(14);
    expect(proportionalRadius(0, 100, 28)).toBe(0);
  });

  test("bar heights interpolate the value range", () => {
    expect(barHeight(0, 0, 10, 60)).toBe(0);
    expect(barHeight(10, 0, 10, 60)).toBe(60);
    expect(barHeight(5, 0, 10, 60)).toBe(30);
  });
});

describe("symbol and line counts", () => {
  test("one polyline and one symbol position per district", async () => {
    const bundle = await loadBundle(fileFetcher());
    for (const plan of bundle.manifest.plans) {
      const geo = bundle.plans.get(plan.name)!;
      const axes = pcpAxes(bundle.manifest.attributes, [geo]);
      const lines = pcpLines(geo, axes);
      expect(lines).toHaveLength(plan.k);
      expect(new Set(lines.map((l) => l.district)).size).toBe(plan.k);
    }
  });

  test("hovering a district links to exactly its polyline", async () => {
    const bundle = await loadBundle(fileFetcher());
    const geo = bundle.plans.get("balanced")!;
    const axes = pcpAxes(bundle.manifest.attributes, [geo]);
    const lines = pcpLines(geo, axes);
    expect(linkedLine(lines, 2)!.district).toBe(2);
    expect(linkedLine(lines, null)).toBeNull();
    expect(linkedLine(lines, 99)).toBeNull();
  });
});

describe("tile math", () => {
  test("synthetic grid coordinates count as geographic only within bounds", () => {
    expect(isGeographic([[0, 0], [4, 4]])).toBe(true);
    expect(isGeographic([[500, 0]])).toBe(false);
  });

  test("mercator maps the origin to the world center", () => {
    const [x, y] = mercator([0, 0]);
    expect(x).toBeCloseTo(0.5, 12);
    expect(y).toBeCloseTo(0.5, 12);
  });

  test("tile cover spans the requested viewport", () => {
    const tiles = tileCover("https://tiles/{z}/{x}/{y}.png", [0.4, 0.4], [0.6, 0.6], 2048);
    expect(tiles.length).toBeGreaterThan(0);
    for (const tile of tiles) {
      expect(tile.url).toMatch(/^https:\/\/tiles\/\d+\/\d+\/\d+\.png$/);
      expect(tile.z).toBe(3);
    }
  });
});
