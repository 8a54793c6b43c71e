import { readFile } from "node:fs/promises";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { JsonFetcher } from "../src/loader.js";

export const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixture");

export function fileFetcher(root: string = FIXTURE_DIR): JsonFetcher {
  return async (rel) => JSON.parse(await readFile(join(root, rel), "utf-8"));
}

/** Small deterministic PRNG so fuzz tests replay exactly. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
