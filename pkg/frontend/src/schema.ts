/** Bundle schema validation. Violations report the offending field path. */

import type {
  BundleManifest,
  PlanGeoJson,
  PointCloud,
} from "./types.js";

export class SchemaError extends Error {
  readonly path: string;

  constructor(path: string, message: string) {
    super(`${path}: ${message}`);
    this.name = "SchemaError";
    this.path = path;
  }
}

function need(condition: boolean, path: string, message: string): asserts condition {
  if (!condition) throw new SchemaError(path, message);
}

function isNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

const METRIC_SCALARS = [
  "ir",
  "normalized_ir",
  "mean_polsby_popper",
  "efficiency_gap",
  "seats_dem",
  "seats_rep",
  "intra_flows",
  "inter_flows",
  "cut_edges",
] as const;

function validateMetrics(x: unknown, path: string): void {
  need(typeof x === "object" && x !== null, path, "expected a metrics object");
  const m = x as Record<string, unknown>;
  for (const key of METRIC_SCALARS) {
    need(isNumber(m[key]), `${path}.${key}`, "missing or non-numeric metric");
  }
  for (const key of ["per_district_pp", "per_district_eg"]) {
    const arr = m[key];
    need(Array.isArray(arr) && arr.every(isNumber), `${path}.${key}`, "expected a numeric array");
  }
}

export function validateManifest(x: unknown): BundleManifest {
  need(typeof x === "object" && x !== null, "manifest", "expected an object");
  const m = x as Record<string, unknown>;
  need(m.schema_version === 1, "manifest.schema_version", "unsupported schema version");
  need(Array.isArray(m.plans), "manifest.plans", "expected an array");
  (m.plans as unknown[]).forEach((plan, i) => {
    const path = `manifest.plans[${i}]`;
    need(typeof plan === "object" && plan !== null, path, "expected an object");
    const p = plan as Record<string, unknown>;
    need(typeof p.name === "string" && p.name.length > 0, `${path}.name`, "missing plan name");
    need(typeof p.label === "string", `${path}.label`, "missing plan label");
    need(isNumber(p.k) && p.k >= 1, `${path}.k`, "missing district count");
    need(typeof p.geojson === "string", `${path}.geojson`, "missing geometry reference");
    validateMetrics(p.metrics, `${path}.metrics`);
  });
  need(Array.isArray(m.attributes) && m.attributes.length > 0, "manifest.attributes", "expected a nonempty array");
  (m.attributes as unknown[]).forEach((attr, i) => {
    const a = attr as Record<string, unknown>;
    need(typeof a?.key === "string", `manifest.attributes[${i}].key`, "missing attribute key");
    need(typeof a?.label === "string", `manifest.attributes[${i}].label`, "missing attribute label");
  });
  need(typeof m.point_cloud === "string", "manifest.point_cloud", "missing point cloud reference");
  need(typeof m.metrics_table === "string", "manifest.metrics_table", "missing metrics table reference");
  need(m.tile_url === null || typeof m.tile_url === "string", "manifest.tile_url", "expected string or null");
  return m as unknown as BundleManifest;
}

export function validatePointCloud(x: unknown): PointCloud {
  need(typeof x === "object" && x !== null, "point_cloud", "expected an object");
  const c = x as Record<string, unknown>;
  const header = c.header;
  need(
    Array.isArray(header) &&
      header.length === 4 &&
      header[0] === "compactness" &&
      header[1] === "efficiency_gap" &&
      header[2] === "ir" &&
      header[3] === "ensemble",
    "point_cloud.header",
    "expected [compactness, efficiency_gap, ir, ensemble]",
  );
  need(Array.isArray(c.rows), "point_cloud.rows", "expected an array");
  (c.rows as unknown[]).forEach((row, i) => {
    const path = `point_cloud.rows[${i}]`;
    need(Array.isArray(row) && row.length === 4, path, "expected a 4-element row");
    const [a, b, cc, label] = row as unknown[];
    need(isNumber(a) && isNumber(b) && isNumber(cc), path, "expected three numbers");
    need(typeof label === "string", `${path}[3]`, "expected an ensemble label");
  });
  return c as unknown as PointCloud;
}

export function validatePlanGeoJson(
  x: unknown,
  attributeKeys: string[],
  planName: string,
  districtCount?: number,
): PlanGeoJson {
  const path = `plans.${planName}`;
  need(typeof x === "object" && x !== null, path, "expected a FeatureCollection");
  const g = x as Record<string, unknown>;
  need(g.type === "FeatureCollection", `${path}.type`, "expected FeatureCollection");
  need(Array.isArray(g.features) && g.features.length > 0, `${path}.features`, "expected nonempty features");
  if (districtCount !== undefined) {
    need(
      (g.features as unknown[]).length === districtCount,
      `${path}.features`,
      `expected one feature per district (${districtCount})`,
    );
  }
  (g.features as unknown[]).forEach((feature, i) => {
    const f = feature as Record<string, unknown>;
    const fpath = `${path}.features[${i}]`;
    need(typeof f?.geometry === "object" && f.geometry !== null, `${fpath}.geometry`, "missing geometry");
    const props = f?.properties as Record<string, unknown> | undefined;
    need(typeof props === "object" && props !== null, `${fpath}.properties`, "missing properties");
    need(isNumber(props.district), `${fpath}.properties.district`, "missing district id");
    for (const key of attributeKeys) {
      need(isNumber(props[key]), `${fpath}.properties.${key}`, "missing attribute value");
    }
  });
  return g as unknown as PlanGeoJson;
}
