"""Command-line entry point.

Verbs:
  ingest      CSVs -> graph/flow artifacts plus a digest file
  run         config + artifacts -> JSONL record stream and a run manifest
  analyze     record streams -> analysis JSON, CSV tables, report figures
  export-web  plans + unit GeoJSON -> explorer bundle
  score       one assignment -> PlanMetrics JSON on stdout

All randomness flows from config seeds; no command reads system entropy, so
rerunning any command on identical inputs reproduces identical outputs.
Chain failures exit nonzero after printing machine-readable error JSON.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import sys
import time
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .analysis import (
    Ensemble,
    compare_ensembles,
    ensure_comparable,
    point_cloud,
    seat_bands,
    summarize,
)
from .chain import Chain, ChainConfig, read_records_jsonl
from .errors import ConfigError, DistrictFlowError
from .flows import disaggregate_votes, monthly_average, scale_flows
from .graph import Partition, build_graph
from .ingest import (
    file_sha256,
    flow_digest,
    load_artifact,
    load_artifacts_dir,
    read_assignment_csv,
    read_device_flows_csv,
    read_edges_csv,
    read_nodes_csv,
    read_origin_stats_csv,
    read_ward_votes_csv,
    read_weights_csv,
    save_artifact,
    write_assignment_csv,
    write_flow_matrix_csv,
)
from .metrics import score_plan
from .recom import Method, ProposalConfig, seed_plan
from .rng import substream
from .webexport import export_web_bundle

SUMMARY_FIELDS = ("ir", "normalized_ir", "mean_polsby_popper", "efficiency_gap", "cut_edges")
KS_FIELDS = ("ir", "mean_polsby_popper", "efficiency_gap")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except DistrictFlowError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="districtflow")
    parser.add_argument("--version", action="version", version=f"districtflow {__version__}")
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("ingest", help="build graph and flow artifacts from CSVs")
    p.add_argument("--nodes", required=True, type=Path)
    p.add_argument("--edges", required=True, type=Path)
    p.add_argument("--flows", required=True, type=Path, nargs="+",
                   help="monthly device-flow CSVs (averaged entry-wise)")
    p.add_argument("--stats", required=True, type=Path)
    p.add_argument("--ward-votes", type=Path,
                   help="optional ward,votes_dem,votes_rep CSV to disaggregate")
    p.add_argument("--ward-weights", type=Path,
                   help="ward,unit,weight CSV; required with --ward-votes")
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("run", help="run one chain (or several with --jobs)")
    p.add_argument("--config", required=True, type=Path, nargs="+",
                   help="chain config file(s), TOML or JSON")
    p.add_argument("--artifacts", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--jobs", type=int, default=1,
                   help="process count for batch runs of several configs")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("analyze", help="summaries, KS tests, seat bands, cube data")
    p.add_argument("--runs", required=True, type=Path, nargs="+",
                   help="run directories (or records.jsonl paths)")
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("export-web", help="write the explorer bundle")
    p.add_argument("--artifacts", required=True, type=Path)
    p.add_argument("--plan", required=True, action="append",
                   metavar="NAME=ASSIGNMENT_CSV")
    p.add_argument("--units", required=True, type=Path, help="unit GeoJSON")
    p.add_argument("--analysis", type=Path, help="analysis.json for the point cloud")
    p.add_argument("--tile-url", help="base-map tile URL template for the explorer")
    p.add_argument("--flip-eg-sign", action="store_true",
                   help="negate displayed efficiency-gap values")
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(handler=cmd_export_web)

    p = sub.add_parser("score", help="score one plan; metrics JSON to stdout")
    p.add_argument("--artifacts", required=True, type=Path)
    p.add_argument("--assignment", required=True, type=Path)
    p.set_defaults(handler=cmd_score)

    return parser


# -- ingest -------------------------------------------------------------------

def cmd_ingest(args) -> int:
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    stats = read_origin_stats_csv(args.stats)
    monthly = [scale_flows(read_device_flows_csv(p), stats) for p in args.flows]
    flows = monthly_average(monthly)

    nodes = read_nodes_csv(args.nodes)
    if args.ward_votes:
        if not args.ward_weights:
            raise ConfigError("--ward-votes needs --ward-weights")
        votes = disaggregate_votes(read_ward_votes_csv(args.ward_votes),
                                   read_weights_csv(args.ward_weights))
        nodes = [
            n if n.id not in votes else
            dataclasses.replace(n, votes_dem=votes[n.id][0], votes_rep=votes[n.id][1])
            for n in nodes
        ]
    graph = build_graph(nodes, read_edges_csv(args.edges), flows)

    save_artifact(graph, out / "graph.pkl")
    save_artifact(flows, out / "flows.pkl")
    write_flow_matrix_csv(flows, out / "flows.csv")

    digests = {
        "inputs": {str(p): file_sha256(p) for p in
                   [args.nodes, args.edges, args.stats, *args.flows]},
        "graph_digest": graph.digest(),
        "flow_digest": flow_digest(flows),
    }
    (out / "digests.json").write_text(json.dumps(digests, indent=2, sort_keys=True))
    print(json.dumps({"graph_digest": graph.digest(), "flow_digest": flow_digest(flows),
                      "nodes": len(graph.nodes), "edges": len(graph.edges),
                      "flow_entries": len(flows)}))
    return 0


# -- run ----------------------------------------------------------------------

def _load_config_file(path: Path) -> dict:
    raw = path.read_bytes()
    if path.suffix.lower() == ".toml":
        return tomllib.loads(raw.decode("utf-8"))
    return json.loads(raw)


def _chain_config_from_file(path: Path, graph, flows, seed_override: int | None) -> tuple[ChainConfig, str]:
    cfg = _load_config_file(path)
    try:
        method = Method(cfg["method"])
        proposal = ProposalConfig(
            method=method,
            bias=cfg.get("bias"),
            epsilon=cfg.get("epsilon", 0.03),
            max_tree_retries=cfg.get("max_tree_retries", 10_000),
        )
        seed = int(seed_override if seed_override is not None else cfg["seed"])
        steps = int(cfg["steps"])
        multiplier = float(cfg.get("compactness_multiplier", 1.0))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    if "initial_assignment" in cfg:
        assignment_path = (path.parent / cfg["initial_assignment"]).resolve()
        assignment = read_assignment_csv(assignment_path, graph)
        initial = Partition.from_assignment(graph, flows, assignment)
    elif "seed_districts" in cfg:
        initial = seed_plan(graph, flows, int(cfg["seed_districts"]),
                            proposal.epsilon, substream(seed, 0))
    else:
        raise ConfigError(f"{path}: config needs initial_assignment or seed_districts")

    try:
        chain_config = ChainConfig(
            proposal=proposal, steps=steps, compactness_multiplier=multiplier,
            seed=seed, initial_plan=initial,
            record_assignments_every=int(cfg.get("record_assignments_every", 0)),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    label = cfg.get("label") or path.stem
    return chain_config, label


def _run_one(config_path: Path, artifacts: Path, out_dir: Path, seed_override: int | None) -> dict:
    graph, flows = load_artifacts_dir(artifacts)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()

    manifest = {
        "engine_version": __version__,
        "config_path": str(config_path),
        "output_dir": str(out_dir),
        "input_digests": {
            "config": file_sha256(config_path),
            "graph": graph.digest(),
            "flows": flow_digest(flows),
        },
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True))

    try:
        config, label = _chain_config_from_file(config_path, graph, flows, seed_override)
        manifest.update({
            "label": label,
            "config": {
                "proposal": config.proposal.to_dict(),
                "steps": config.steps,
                "compactness_multiplier": config.compactness_multiplier,
                "seed": config.seed,
                "record_assignments_every": config.record_assignments_every,
            },
            "config_digest": config.digest(),
        })
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True))

        chain = Chain(config, graph, flows)
        snap_dir = out_dir / "assignments"
        with open(out_dir / "records.jsonl", "w", encoding="utf-8") as fh:
            for rec in chain.records():
                fh.write(rec.to_json_line() + "\n")
                if rec.assignment is not None:
                    snap_dir.mkdir(exist_ok=True)
                    write_assignment_csv(rec.assignment,
                                         snap_dir / f"step_{rec.step:06d}.csv")
    except DistrictFlowError as exc:
        error = {"error": type(exc).__name__, "message": str(exc)}
        (out_dir / "error.json").write_text(json.dumps(error, indent=2))
        manifest["duration_seconds"] = time.monotonic() - started
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
        raise

    manifest["duration_seconds"] = time.monotonic() - started
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return {"label": manifest["label"], "out": str(out_dir)}


def cmd_run(args) -> int:
    configs: list[Path] = args.config
    if len(configs) == 1:
        result = _run_one(configs[0], args.artifacts, args.out, args.seed)
        print(json.dumps(result))
        return 0

    # Batch mode: one subdirectory per config, fully independent chains.
    jobs = max(1, args.jobs)
    results = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = {
            pool.submit(_run_one, cfg, args.artifacts, args.out / cfg.stem, args.seed): cfg
            for cfg in configs
        }
        for fut in concurrent.futures.as_completed(futures):
            results.append(fut.result())
    print(json.dumps(sorted(results, key=lambda r: r["label"])))
    return 0


# -- analyze ------------------------------------------------------------------

def _load_ensemble(run: Path) -> Ensemble:
    records_path = run / "records.jsonl" if run.is_dir() else run
    manifest_path = records_path.parent / "manifest.json"
    if not manifest_path.exists():
        raise ConfigError(f"no manifest.json next to {records_path}")
    manifest = json.loads(manifest_path.read_text())
    records = read_records_jsonl(records_path)
    return Ensemble.from_records(
        manifest.get("label", records_path.parent.name),
        records,
        config_digest=manifest.get("config_digest", ""),
        graph_digest=manifest["input_digests"]["graph"],
        flow_digest=manifest["input_digests"]["flows"],
    )


def cmd_analyze(args) -> int:
    from . import plots

    ensembles = [_load_ensemble(run) for run in args.runs]
    ensure_comparable(*ensembles)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    summaries = {
        field: {e.label: summarize(e, field).to_dict() for e in ensembles}
        for field in SUMMARY_FIELDS
    }
    ks = {}
    for i, a in enumerate(ensembles):
        for b in ensembles[i + 1:]:
            ks[f"{a.label}|{b.label}"] = {
                field: compare_ensembles(a, b, field).to_dict() for field in KS_FIELDS
            }
    bands = {e.label: [band.to_dict() for band in seat_bands(e)] for e in ensembles}
    cloud = point_cloud(ensembles)

    analysis = {
        "ensembles": {e.label: {"n": len(e.records), "config_digest": e.config_digest}
                      for e in ensembles},
        "graph_digest": ensembles[0].graph_digest,
        "flow_digest": ensembles[0].flow_digest,
        "summaries": summaries,
        "ks": ks,
        "seat_bands": bands,
        "point_cloud": cloud,
    }
    (out / "analysis.json").write_text(json.dumps(analysis, indent=2, sort_keys=True))

    _write_csv(out / "summaries.csv",
               ["metric", "ensemble", "min", "max", "mean", "median", "q1", "q3"],
               [[field, label, *[s[c] for c in ("min", "max", "mean", "median", "q1", "q3")]]
                for field, per in summaries.items() for label, s in sorted(per.items())])
    _write_csv(out / "seat_bands.csv",
               ["ensemble", "seats_dem", "seats_rep", "count", "mean_efficiency_gap"],
               [[label, b["seats_dem"], b["seats_rep"], b["count"], b["mean_efficiency_gap"]]
                for label, bs in sorted(bands.items()) for b in bs])
    _write_csv(out / "point_cloud.csv", cloud[0], cloud[1:])

    figures = out / "figures"
    figures.mkdir(exist_ok=True)
    plots.ir_boxplot(ensembles, figures / "ir_boxplot.png")
    plots.seat_band_bars(
        {e.label: seat_bands(e) for e in ensembles}, figures / "seat_bands.png"
    )
    plots.metric_cube(cloud, figures / "metric_cube.png")

    print(json.dumps({"ensembles": [e.label for e in ensembles],
                      "out": str(out / "analysis.json")}))
    return 0


def _write_csv(path: Path, header: list, rows: list[list]) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# -- export-web ---------------------------------------------------------------

def cmd_export_web(args) -> int:
    graph, flows = load_artifacts_dir(args.artifacts)

    plans = {}
    for spec_arg in args.plan:
        name, sep, csv_path = spec_arg.partition("=")
        if not sep:
            raise ConfigError(f"--plan wants NAME=ASSIGNMENT_CSV, got {spec_arg!r}")
        plans[name] = read_assignment_csv(Path(csv_path), graph)

    units_geojson = json.loads(Path(args.units).read_text(encoding="utf-8"))
    cloud = None
    if args.analysis:
        cloud = json.loads(args.analysis.read_text())["point_cloud"]

    manifest_path = export_web_bundle(
        plans, units_geojson, graph, flows, args.out,
        point_cloud_rows=cloud, tile_url=args.tile_url,
        flip_eg_sign=args.flip_eg_sign,
    )
    print(json.dumps({"bundle": str(manifest_path.parent), "plans": sorted(plans)}))
    return 0


# -- score --------------------------------------------------------------------

def cmd_score(args) -> int:
    graph, flows = load_artifacts_dir(args.artifacts)
    assignment = read_assignment_csv(args.assignment, graph)
    partition = Partition.from_assignment(graph, flows, assignment)
    metrics = score_plan(partition, graph, flows)
    print(json.dumps(metrics.to_dict(), sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
