from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from districtflow.recom import seed_plan
from districtflow.rng import substream
from districtflow.synth import grid_graph, unit_id


@pytest.fixture(scope="session")
def grid44():
    return grid_graph(4, 4)


@pytest.fixture(scope="session")
def grid66():
    return grid_graph(6, 6)


@pytest.fixture(scope="session")
def grid44_plan(grid44):
    graph, flows = grid44
    return seed_plan(graph, flows, 2, 0.03, substream(101, 0))


@pytest.fixture(scope="session")
def grid66_plan4(grid66):
    graph, flows = grid66
    return seed_plan(graph, flows, 4, 0.03, substream(202, 0))


@pytest.fixture()
def path4(grid44):
    """1x4 path graph, handy for hand-checkable cut arithmetic."""
    from districtflow.flows import FlowMatrix
    from districtflow.graph import UnitNode, build_graph

    nodes = [
        UnitNode(id=f"p{i}", population=1, voting_age_pop=1,
                 votes_dem=2.0 + i, votes_rep=1.0, area=1.0, perimeter=4.0)
        for i in range(4)
    ]
    edges = [(f"p{i}", f"p{i+1}", 1.0) for i in range(3)]
    flows = FlowMatrix({(f"p{i}", f"p{i+1}"): 1.0 for i in range(3)})
    return build_graph(nodes, edges, flows), flows


def make_split_assignment(rows, cols, first_cols, labels=(1, 2)):
    """Vertical split: columns < first_cols get labels[0], the rest labels[1]."""
    return {
        unit_id(r, c): labels[0] if c < first_cols else labels[1]
        for r in range(rows) for c in range(cols)
    }


def write_grid_csvs(out, rows, cols, months=2):
    """Write the ingest CSVs for a planted-community grid.

    Origin stats use pop == num_devices, so scaled flows equal the raw
    device flows and the ingested matrix matches planted_flows exactly.
    """
    import csv

    from districtflow.synth import grid_edges, grid_nodes, planted_flows

    out.mkdir(parents=True, exist_ok=True)
    nodes = grid_nodes(rows, cols)
    with open(out / "nodes.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "population", "voting_age_pop", "votes_dem",
                    "votes_rep", "area", "perimeter"])
        for n in nodes:
            w.writerow([n.id, n.population, n.voting_age_pop,
                        repr(n.votes_dem), repr(n.votes_rep), n.area, n.perimeter])
    with open(out / "edges.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["u", "v", "shared_perimeter"])
        w.writerows(grid_edges(rows, cols))
    with open(out / "stats.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["origin", "pop", "num_devices"])
        for n in nodes:
            w.writerow([n.id, 100, 100])
    flows = planted_flows(rows, cols)
    flow_paths = []
    for month in range(1, months + 1):
        path = out / f"flows_{month:02d}.csv"
        flow_paths.append(path)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["origin", "destination", "device_flows"])
            for (o, d), f in flows.entries.items():
                w.writerow([o, d, repr(f)])
    return flow_paths


@pytest.fixture(scope="session")
def grid44_csv_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("grid44_csvs")
    write_grid_csvs(out, 4, 4)
    return out


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        print(f"\n[{status}] {name}")
