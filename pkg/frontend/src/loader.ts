/** Bundle loading over any JSON fetcher (browser fetch, or fs in tests). */

import { validateManifest, validatePlanGeoJson, validatePointCloud } from "./schema.js";
import type { BundleIndex, PlanGeoJson } from "./types.js";

export type JsonFetcher = (relativePath: string) => Promise<unknown>;

export async function loadBundle(fetchJson: JsonFetcher): Promise<BundleIndex> {
  const manifest = validateManifest(await fetchJson("manifest.json"));
  const cloud = validatePointCloud(await fetchJson(manifest.point_cloud));
  const attributeKeys = manifest.attributes.map((a) => a.key);
  const plans = new Map<string, PlanGeoJson>();
  for (const plan of manifest.plans) {
    const geo = validatePlanGeoJson(await fetchJson(plan.geojson), attributeKeys, plan.name, plan.k);
    plans.set(plan.name, geo);
  }
  return { manifest, cloud, plans };
}

export function httpFetcher(baseUrl: string): JsonFetcher {
  const base = baseUrl.endsWith("/") ? baseUrl : `${baseUrl}/`;
  return async (rel) => {
    const response = await fetch(base + rel);
    if (!response.ok) {
      throw new Error(`fetch failed for ${rel}: HTTP ${response.status}`);
    }
    return response.json();
  };
}
