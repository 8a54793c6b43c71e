"""File ingestion and artifact storage.

CSV schemas (UTF-8, '.' decimal separator):
  nodes:       id,population,voting_age_pop,votes_dem,votes_rep,area,perimeter
  edges:       u,v,shared_perimeter
  device flows: origin,destination,device_flows      (one file per month)
  origin stats: origin,pop,num_devices
  flow matrix: origin,destination,flow
  ward votes:  ward,votes_dem,votes_rep
  weights:     ward,unit,weight
  assignment:  unit_id,district

Graph and flow artifacts are pickled with an embedded sha256 so corruption
is detected on load; digests derive from content, not file bytes.
"""

from __future__ import annotations

import csv
import hashlib
import json
import pickle
from pathlib import Path
from typing import Iterator

from .errors import ConfigError, CorruptCheckpoint, UnknownUnitInAssignment
from .flows import DeviceFlowRecord, FlowMatrix, OriginStats
from .graph import UnitGraph, UnitNode

_ARTIFACT_MAGIC = b"DFART1\n"


class ParseError(ConfigError):
    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")


def _rows(path) -> Iterator[tuple[int, dict]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for i, row in enumerate(reader, start=2):
            yield i, row


def _field(path, line_no, row, name, cast):
    raw = row.get(name)
    if raw is None or raw == "":
        raise ParseError(path, line_no, f"missing column {name!r}")
    try:
        return cast(raw)
    except ValueError as exc:
        raise ParseError(path, line_no, f"bad {name!r} value {raw!r}") from exc


def read_nodes_csv(path) -> list[UnitNode]:
    nodes = []
    for line_no, row in _rows(path):
        try:
            nodes.append(UnitNode(
                id=_field(path, line_no, row, "id", str),
                population=_field(path, line_no, row, "population", int),
                voting_age_pop=_field(path, line_no, row, "voting_age_pop", int),
                votes_dem=_field(path, line_no, row, "votes_dem", float),
                votes_rep=_field(path, line_no, row, "votes_rep", float),
                area=_field(path, line_no, row, "area", float),
                perimeter=_field(path, line_no, row, "perimeter", float),
            ))
        except ValueError as exc:
            raise ParseError(path, line_no, str(exc)) from exc
    return nodes


def read_edges_csv(path) -> list[tuple[str, str, float]]:
    return [
        (_field(path, n, row, "u", str), _field(path, n, row, "v", str),
         _field(path, n, row, "shared_perimeter", float))
        for n, row in _rows(path)
    ]


def read_device_flows_csv(path) -> list[DeviceFlowRecord]:
    return [
        DeviceFlowRecord(
            origin=_field(path, n, row, "origin", str),
            destination=_field(path, n, row, "destination", str),
            device_flows=_field(path, n, row, "device_flows", float),
        )
        for n, row in _rows(path)
    ]


def read_origin_stats_csv(path) -> dict[str, OriginStats]:
    out = {}
    for n, row in _rows(path):
        st = OriginStats(
            origin=_field(path, n, row, "origin", str),
            pop=_field(path, n, row, "pop", int),
            num_devices=_field(path, n, row, "num_devices", int),
        )
        out[st.origin] = st
    return out


def read_flow_matrix_csv(path) -> FlowMatrix:
    entries = {}
    for n, row in _rows(path):
        key = (_field(path, n, row, "origin", str),
               _field(path, n, row, "destination", str))
        entries[key] = entries.get(key, 0.0) + _field(path, n, row, "flow", float)
    return FlowMatrix(entries)


def write_flow_matrix_csv(flows: FlowMatrix, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["origin", "destination", "flow"])
        for (o, d), f in flows.entries.items():
            writer.writerow([o, d, repr(f)])


def read_ward_votes_csv(path) -> dict[str, tuple[float, float]]:
    return {
        _field(path, n, row, "ward", str): (
            _field(path, n, row, "votes_dem", float),
            _field(path, n, row, "votes_rep", float),
        )
        for n, row in _rows(path)
    }


def read_weights_csv(path) -> dict[tuple[str, str], float]:
    return {
        (_field(path, n, row, "ward", str), _field(path, n, row, "unit", str)):
            _field(path, n, row, "weight", float)
        for n, row in _rows(path)
    }


def read_assignment_csv(path, graph: UnitGraph | None = None) -> dict[str, int]:
    assignment = {}
    for n, row in _rows(path):
        unit = _field(path, n, row, "unit_id", str)
        if graph is not None and unit not in graph.nodes:
            raise UnknownUnitInAssignment(unit)
        assignment[unit] = _field(path, n, row, "district", int)
    return assignment


def write_assignment_csv(assignment: dict[str, int], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["unit_id", "district"])
        for unit, d in sorted(assignment.items()):
            writer.writerow([unit, d])


# -- binary artifacts --------------------------------------------------------

def save_artifact(obj, path) -> None:
    payload = pickle.dumps(obj, protocol=4)
    digest = hashlib.sha256(payload).hexdigest().encode()
    with open(path, "wb") as fh:
        fh.write(_ARTIFACT_MAGIC + digest + b"\n" + payload)


def load_artifact(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob.startswith(_ARTIFACT_MAGIC):
        raise CorruptCheckpoint(f"{path} is not an engine artifact")
    digest, sep, payload = blob[len(_ARTIFACT_MAGIC):].partition(b"\n")
    if not sep or hashlib.sha256(payload).hexdigest().encode() != digest:
        raise CorruptCheckpoint(f"{path} failed its content hash check")
    return pickle.loads(payload)


def flow_digest(flows: FlowMatrix) -> str:
    raw = json.dumps(
        [[o, d, f] for (o, d), f in flows.entries.items()],
        separators=(",", ":"),
    ).encode()
    return hashlib.sha256(raw).hexdigest()


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def load_artifacts_dir(artifacts: Path) -> tuple[UnitGraph, FlowMatrix]:
    graph = load_artifact(artifacts / "graph.pkl")
    flows = load_artifact(artifacts / "flows.pkl")
    return graph, flows
