"""Regenerate the explorer's test fixture bundle from the 4x4 grid demo.

Runs the engine CLI end to end (ingest, two chains, analyze, export-web) and
leaves the bundle in frontend/test/fixture/. The bundle is committed so the
frontend tests run without a Python environment.
"""

from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "tests"))

from districtflow.cli import main
from districtflow.ingest import load_artifact, write_assignment_csv
from districtflow.recom import seed_plan
from districtflow.rng import substream
from districtflow.synth import grid_units_geojson

from conftest import write_grid_csvs

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "test" / "fixture"


def run(*argv):
    code = main([str(a) for a in argv])
    if code != 0:
        raise SystemExit(f"command failed: {argv}")


def build(target: Path) -> None:
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        csvs = tmp / "csvs"
        write_grid_csvs(csvs, 4, 4)
        artifacts = tmp / "artifacts"
        run("ingest", "--nodes", csvs / "nodes.csv", "--edges", csvs / "edges.csv",
            "--flows", csvs / "flows_01.csv", csvs / "flows_02.csv",
            "--stats", csvs / "stats.csv", "--out", artifacts)

        for name, method, bias in (("rst", "RST", None), ("biased", "BiasedRST", 100.0)):
            config = {"method": method, "epsilon": 0.05, "steps": 40,
                      "seed": 42, "compactness_multiplier": 2.0,
                      "seed_districts": 2, "label": name}
            if bias is not None:
                config["bias"] = bias
            cfg_path = tmp / f"{name}.json"
            cfg_path.write_text(json.dumps(config))
            run("run", "--config", cfg_path, "--artifacts", artifacts,
                "--out", tmp / name)

        analysis = tmp / "analysis"
        run("analyze", "--runs", tmp / "rst", tmp / "biased", "--out", analysis)

        graph = load_artifact(artifacts / "graph.pkl")
        flows = load_artifact(artifacts / "flows.pkl")
        units_path = tmp / "units.geojson"
        units_path.write_text(json.dumps(grid_units_geojson(4, 4)))
        plans = {
            "balanced": seed_plan(graph, flows, 2, 0.05, substream(71, 0)),
            "quads": None,
        }
        from districtflow.graph import Partition

        quad = {}
        for r in range(4):
            for c in range(4):
                quad[f"r{r:02d}c{c:02d}"] = 1 if c < 2 else 2
        plans["quads"] = Partition.from_assignment(graph, flows, quad)

        plan_args = []
        for name, plan in plans.items():
            path = tmp / f"{name}.csv"
            write_assignment_csv(plan.assignment, path)
            plan_args += ["--plan", f"{name}={path}"]

        if target.exists():
            shutil.rmtree(target)
        run("export-web", "--artifacts", artifacts, *plan_args,
            "--units", units_path, "--analysis", analysis / "analysis.json",
            "--out", target)
    print(f"fixture bundle written to {target}")


if __name__ == "__main__":
    build(FIXTURE_DIR)
