"""Web bundle export: everything the browser explorer consumes.

The bundle is a self-contained directory; all numbers the explorer shows
are computed here, never client-side. District outlines come from
dissolving unit polygons (shared boundaries cancel in the union), so the
explorer ships no geometry engine.

Layout:
  manifest.json        plan roster, attribute catalog, file references
  plans/<name>.geojson district-dissolved features with per-district fields
  metrics.json         flat PlanMetrics per plan
  metrics.csv          the same table, delimited
  point_cloud.json     {header, rows} for the 3D cube
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from shapely.geometry import mapping, shape
from shapely.ops import unary_union

from .errors import ConfigError, UnknownUnitInAssignment
from .flows import FlowMatrix
from .graph import Partition, UnitGraph, district_geometry
from .metrics import PlanMetrics, polsby_popper, score_plan

SCHEMA_VERSION = 1

ATTRIBUTE_CATALOG = [
    {"key": "population", "label": "Population"},
    {"key": "voting_age_pop", "label": "Voting-age population"},
    {"key": "votes_dem", "label": "Democratic votes"},
    {"key": "votes_rep", "label": "Republican votes"},
    {"key": "polsby_popper", "label": "Polsby-Popper compactness"},
    {"key": "eff_gap_share", "label": "Efficiency-gap share"},
    {"key": "intra_flows", "label": "Intra-district flows"},
    {"key": "inter_flows", "label": "Inter-district flows"},
    {"key": "area", "label": "Area (km2)"},
    {"key": "perimeter", "label": "Perimeter (km)"},
]


def _district_flow_attribution(
    partition: Partition, flows: FlowMatrix
) -> tuple[list[float], list[float]]:
    """Per-district flow mass: intra has both endpoints inside; inter counts
    the full value of every flow crossing that district's boundary."""
    intra = [0.0] * partition.k
    inter = [0.0] * partition.k
    assignment = partition.assignment
    for (o, d), f in flows.entries.items():
        do, dd = assignment[o], assignment[d]
        if do == dd:
            intra[do - 1] += f
        else:
            inter[do - 1] += f
            inter[dd - 1] += f
    return intra, inter


def _dissolve(members: list[str], geom_by_id: dict) -> dict:
    return mapping(unary_union([geom_by_id[u] for u in members]))


def _plan_geojson(
    partition: Partition,
    flows: FlowMatrix,
    metrics: PlanMetrics,
    geom_by_id: dict,
) -> dict:
    intra, inter = _district_flow_attribution(partition, flows)
    features = []
    for d in range(1, partition.k + 1):
        i = d - 1
        area, perimeter = district_geometry(partition, d)
        members = sorted(partition.district_units[i])
        features.append({
            "type": "Feature",
            "properties": {
                "district": d,
                "population": partition.population[i],
                "voting_age_pop": sum(
                    partition.graph.nodes[u].voting_age_pop for u in members
                ),
                "votes_dem": partition.votes_dem[i],
                "votes_rep": partition.votes_rep[i],
                "polsby_popper": polsby_popper(area, perimeter),
                "eff_gap_share": metrics.per_district_eg[i],
                "intra_flows": intra[i],
                "inter_flows": inter[i],
                "area": area,
                "perimeter": perimeter,
            },
            "geometry": _dissolve(members, geom_by_id),
        })
    return {"type": "FeatureCollection", "features": features}


def export_web_bundle(
    plans: dict[str, dict[str, int]],
    units_geojson: dict,
    graph: UnitGraph,
    flows: FlowMatrix,
    out_dir: Path,
    point_cloud_rows: list[list] | None = None,
    labels: dict[str, str] | None = None,
    tile_url: str | None = None,
    flip_eg_sign: bool = False,
) -> Path:
    """Write the bundle; returns the manifest path.

    plans maps plan name to a unit->district assignment. flip_eg_sign is a
    presentation-only toggle that negates displayed efficiency-gap values
    (the engine's sign convention is wasted-dem minus wasted-rep).
    """
    geom_by_id = {}
    for feature in units_geojson.get("features", []):
        uid = feature.get("properties", {}).get("id")
        if uid is None:
            raise ConfigError("unit GeoJSON features need an 'id' property")
        geom_by_id[uid] = shape(feature["geometry"])
    for name, assignment in plans.items():
        for unit in assignment:
            if unit not in geom_by_id:
                raise UnknownUnitInAssignment(unit)

    out_dir = Path(out_dir)
    (out_dir / "plans").mkdir(parents=True, exist_ok=True)

    def present(value: float) -> float:
        return -value if flip_eg_sign else value

    metrics_by_plan: dict[str, PlanMetrics] = {}
    plan_entries = []
    for name in sorted(plans):
        partition = Partition.from_assignment(graph, flows, plans[name])
        metrics = score_plan(partition, graph, flows)
        metrics_by_plan[name] = metrics
        geo = _plan_geojson(partition, flows, metrics, geom_by_id)
        if flip_eg_sign:
            for feature in geo["features"]:
                feature["properties"]["eff_gap_share"] = present(
                    feature["properties"]["eff_gap_share"]
                )
        geo_path = out_dir / "plans" / f"{name}.geojson"
        geo_path.write_text(json.dumps(geo, sort_keys=True), encoding="utf-8")
        plan_entries.append({
            "name": name,
            "label": (labels or {}).get(name, name),
            "k": partition.k,
            "geojson": f"plans/{name}.geojson",
            "metrics": _present_metrics(metrics, present),
        })

    metrics_json = {
        name: _present_metrics(m, present) for name, m in metrics_by_plan.items()
    }
    (out_dir / "metrics.json").write_text(
        json.dumps(metrics_json, sort_keys=True), encoding="utf-8"
    )

    csv_fields = ["plan", "ir", "normalized_ir", "mean_polsby_popper",
                  "efficiency_gap", "seats_dem", "seats_rep", "cut_edges",
                  "intra_flows", "inter_flows"]
    with open(out_dir / "metrics.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(csv_fields)
        for name in sorted(metrics_by_plan):
            m = metrics_by_plan[name]
            writer.writerow([name, m.ir, m.normalized_ir, m.mean_polsby_popper,
                             present(m.efficiency_gap), m.seats_dem, m.seats_rep,
                             m.cut_edges, m.intra_flows, m.inter_flows])

    if point_cloud_rows is None:
        point_cloud_rows = [["compactness", "efficiency_gap", "ir", "ensemble"]]
    cloud = {"header": point_cloud_rows[0], "rows": point_cloud_rows[1:]}
    if flip_eg_sign:
        eg_i = cloud["header"].index("efficiency_gap")
        cloud["rows"] = [
            [present(v) if i == eg_i else v for i, v in enumerate(row)]
            for row in cloud["rows"]
        ]
    (out_dir / "point_cloud.json").write_text(
        json.dumps(cloud, sort_keys=True), encoding="utf-8"
    )

    manifest = {
        "schema_version": SCHEMA_VERSION,
        "generator": "districtflow",
        "plans": plan_entries,
        "attributes": ATTRIBUTE_CATALOG,
        "point_cloud": "point_cloud.json",
        "metrics_table": "metrics.csv",
        "tile_url": tile_url,
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, sort_keys=True), encoding="utf-8")
    return manifest_path


def _present_metrics(metrics: PlanMetrics, present) -> dict:
    d = metrics.to_dict()
    d["efficiency_gap"] = present(d["efficiency_gap"])
    d["per_district_eg"] = [present(v) for v in d["per_district_eg"]]
    return d
