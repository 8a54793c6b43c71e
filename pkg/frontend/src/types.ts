/** Bundle schema shared by the exporter and this explorer.
 *
 * Every number shown anywhere in the UI traces back to one of these fields;
 * the explorer computes layout only, never metric values.
 */

export interface PlanMetricsFlat {
  ir: number;
  normalized_ir: number;
  mean_polsby_popper: number;
  per_district_pp: number[];
  efficiency_gap: number;
  per_district_eg: number[];
  seats_dem: number;
  seats_rep: number;
  intra_flows: number;
  inter_flows: number;
  cut_edges: number;
}

export interface PlanEntry {
  name: string;
  label: string;
  k: number;
  geojson: string;
  metrics: PlanMetricsFlat;
}

export interface AttributeEntry {
  key: string;
  label: string;
}

export interface BundleManifest {
  schema_version: number;
  generator: string;
  plans: PlanEntry[];
  attributes: AttributeEntry[];
  point_cloud: string;
  metrics_table: string;
  tile_url: string | null;
}

export interface PointCloud {
  header: string[];
  rows: [number, number, number, string][];
}

export interface DistrictProperties {
  district: number;
  population: number;
  voting_age_pop: number;
  votes_dem: number;
  votes_rep: number;
  polsby_popper: number;
  eff_gap_share: number;
  intra_flows: number;
  inter_flows: number;
  area: number;
  perimeter: number;
  [key: string]: number;
}

export interface DistrictFeature {
  type: "Feature";
  properties: DistrictProperties;
  geometry: { type: string; coordinates: unknown };
}

export interface PlanGeoJson {
  type: "FeatureCollection";
  features: DistrictFeature[];
}

export interface BundleIndex {
  manifest: BundleManifest;
  cloud: PointCloud;
  plans: Map<string, PlanGeoJson>;
}
