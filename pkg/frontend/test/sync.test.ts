import { describe, expect, test } from "vitest";

import { fitBounds, PaneEvent, project, SyncedPanes, viewsEqual } from "../src/sync.js";
import { mulberry32 } from "./helpers.js";

describe("pane synchronization", () => {
  test("zooming one pane zooms the other identically", () => {
    const panes = new SyncedPanes({ center: [5, 5], zoom: 3 });
    panes.apply({ pane: "left", type: "zoom", delta: 2 });
    expect(panes.get("right").zoom).toBe(5);
    expect(viewsEqual(panes.get("left"), panes.get("right"))).toBe(true);
  });

  test("panning one pane moves the other's center identically", () => {
    const panes = new SyncedPanes({ center: [0, 0], zoom: 0 });
    panes.apply({ pane: "right", type: "pan", dxPx: 40, dyPx: -24 });
    const left = panes.get("left");
    const right = panes.get("right");
    expect(left.center).toEqual(right.center);
    expect(left.center).toEqual([-40, -24]);
  });

  test("50-event scripted interaction fuzz never diverges the panes", () => {
    const rand = mulberry32(1234);
    const panes = new SyncedPanes(fitBounds([[0, 0], [4, 4]], [440, 400]));
    for (let i = 0; i < 50; i++) {
      const pane = rand() < 0.5 ? "left" : "right";
      const event: PaneEvent =
        rand() < 0.5
          ? { pane, type: "pan", dxPx: (rand() - 0.5) * 200, dyPx: (rand() - 0.5) * 200 }
          : { pane, type: "zoom", delta: (rand() - 0.5) * 2 };
      panes.apply(event);
      expect(viewsEqual(panes.get("left"), panes.get("right"), 0)).toBe(true);
    }
  });

  test("change listeners fire with the shared state", () => {
    const panes = new SyncedPanes({ center: [0, 0], zoom: 0 });
    const seen: number[] = [];
    panes.onChange((state) => seen.push(state.zoom));
    panes.apply({ pane: "left", type: "zoom", delta: 1 });
    panes.apply({ pane: "right", type: "zoom", delta: 1 });
    expect(seen).toEqual([1, 2]);
  });

  test("projection round-trips pan deltas in screen pixels", () => {
    const panes = new SyncedPanes({ center: [10, 10], zoom: 2 });
    const size: [number, number] = [400, 400];
    const before = project(panes.get("left"), size, [10, 10]);
    panes.apply({ pane: "left", type: "pan", dxPx: 25, dyPx: 10 });
    const after = project(panes.get("left"), size, [10, 10]);
    expect(after[0] - before[0]).toBeCloseTo(25, 9);
    expect(after[1] - before[1]).toBeCloseTo(10, 9);
  });

  test("fitBounds centers the box", () => {
    const view = fitBounds([[0, 0], [4, 2]], [440, 400]);
    expect(view.center).toEqual([2, 1]);
    const [sx, sy] = project(view, [440, 400], [2, 1]);
    expect(sx).toBeCloseTo(220);
    expect(sy).toBeCloseTo(200);
  });
});
