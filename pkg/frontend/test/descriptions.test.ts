import { describe as group, expect, test } from "vitest";

import { describe as describeKey, describedKeys } from "../src/descriptions.js";
import { loadBundle } from "../src/loader.js";
import { fileFetcher } from "./helpers.js";

group("metric descriptions", () => {
  test("every bundle attribute has a description", async () => {
    const bundle = await loadBundle(fileFetcher());
    for (const attr of bundle.manifest.attributes) {
      expect(describeKey(attr.key), attr.key).not.toBe("");
    }
  });

  test("every plan-level metric field has a description", () => {
    for (const key of ["ir", "normalized_ir", "mean_polsby_popper",
                       "efficiency_gap", "seats_dem", "seats_rep", "cut_edges"]) {
      expect(describeKey(key), key).not.toBe("");
    }
  });

  test("unknown keys describe to the empty string", () => {
    expect(describeKey("nonsense")).toBe("");
    expect(describedKeys()).toContain("ir");
  });
});
