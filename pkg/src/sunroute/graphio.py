"""CSV load/dump for road graphs.

Formats:

- nodes CSV, header ``id,lat,lon,p0,p1,...,p23``; one row per node where
  ``p0..p23`` is the hour-of-day forecast irradiance profile.
- edges CSV, header ``from,to,length_m``; one row per directed edge.

Floats are written with ``repr`` so a dump/load round trip reproduces the
graph exactly.
"""

from __future__ import annotations

import csv
import io
from typing import IO, Iterable

from .model import (
    GeoPoint,
    HOURS_PER_DAY,
    RoadEdge,
    RoadGraph,
    RoadNode,
    ValidationError,
    validate_graph,
)

NODES_HEADER = ["id", "lat", "lon"] + [f"p{h}" for h in range(HOURS_PER_DAY)]
EDGES_HEADER = ["from", "to", "length_m"]


class GraphFormatError(ValidationError):
    """Raised for malformed graph CSV input; messages carry line numbers."""


def _text_lines(stream: IO[bytes] | IO[str]) -> Iterable[str]:
    data = stream.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data)


def _parse_float(raw: str, what: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise GraphFormatError(f"{where}: invalid {what} {raw!r}") from None


def _parse_int(raw: str, what: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise GraphFormatError(f"{where}: invalid {what} {raw!r}") from None


def load_graph(nodes_file: IO[bytes] | IO[str], edges_file: IO[bytes] | IO[str]) -> RoadGraph:
    """Parse and validate a road graph from nodes/edges CSV streams.

    Raises :class:`GraphFormatError` naming the offending line for parse
    errors, duplicate or non-contiguous node ids, edges referencing
    unknown ids, and non-positive lengths.
    """
    nodes: dict[int, RoadNode] = {}
    reader = csv.reader(_text_lines(nodes_file))
    header = next(reader, None)
    if header != NODES_HEADER:
        raise GraphFormatError(
            f"nodes line 1: expected header {','.join(NODES_HEADER)!r}"
        )
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        where = f"nodes line {lineno}"
        if len(row) != len(NODES_HEADER):
            raise GraphFormatError(
                f"{where}: expected {len(NODES_HEADER)} fields, got {len(row)}"
            )
        node_id = _parse_int(row[0], "node id", where)
        if node_id in nodes:
            raise GraphFormatError(f"{where}: duplicate node id {node_id}")
        lat = _parse_float(row[1], "lat", where)
        lon = _parse_float(row[2], "lon", where)
        profile = tuple(
            _parse_float(raw, f"profile value p{h}", where)
            for h, raw in enumerate(row[3:])
        )
        for h, value in enumerate(profile):
            if not 0.0 <= value <= 1.0:
                raise GraphFormatError(f"{where}: p{h} value {value!r} outside [0, 1]")
        try:
            position = GeoPoint(lat, lon)
        except ValidationError as exc:
            raise GraphFormatError(f"{where}: {exc}") from None
        nodes[node_id] = RoadNode(id=node_id, position=position, offline_profile=profile)

    if set(nodes) != set(range(len(nodes))):
        raise GraphFormatError(
            f"nodes: ids must be contiguous 0..{len(nodes) - 1}, got {sorted(nodes)}"
        )

    edges: list[RoadEdge] = []
    seen: set[tuple[int, int]] = set()
    reader = csv.reader(_text_lines(edges_file))
    header = next(reader, None)
    if header != EDGES_HEADER:
        raise GraphFormatError(f"edges line 1: expected header {','.join(EDGES_HEADER)!r}")
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        where = f"edges line {lineno}"
        if len(row) != 3:
            raise GraphFormatError(f"{where}: expected 3 fields, got {len(row)}")
        src = _parse_int(row[0], "from id", where)
        dst = _parse_int(row[1], "to id", where)
        length = _parse_float(row[2], "length_m", where)
        for endpoint in (src, dst):
            if endpoint not in nodes:
                raise GraphFormatError(f"{where}: unknown node id {endpoint}")
        if src == dst:
            raise GraphFormatError(f"{where}: self-loop at node {src}")
        if length <= 0:
            raise GraphFormatError(f"{where}: length_m must be > 0, got {row[2]}")
        if (src, dst) in seen:
            raise GraphFormatError(f"{where}: duplicate directed edge ({src}, {dst})")
        seen.add((src, dst))
        edges.append(RoadEdge(src=src, dst=dst, length_m=length))

    graph = RoadGraph(
        nodes=tuple(nodes[i] for i in range(len(nodes))),
        edges=tuple(edges),
    )
    violations = validate_graph(graph)
    if violations:
        raise GraphFormatError("; ".join(violations))
    return graph


def dump_graph(g: RoadGraph) -> tuple[str, str]:
    """Serialize a graph back to (nodes CSV, edges CSV) text."""
    nodes_out = io.StringIO()
    writer = csv.writer(nodes_out, lineterminator="\n")
    writer.writerow(NODES_HEADER)
    for node in g.nodes:
        writer.writerow(
            [node.id, repr(node.position.lat), repr(node.position.lon)]
            + [repr(v) for v in node.offline_profile]
        )

    edges_out = io.StringIO()
    writer = csv.writer(edges_out, lineterminator="\n")
    writer.writerow(EDGES_HEADER)
    for edge in g.edges:
        writer.writerow([edge.src, edge.dst, repr(edge.length_m)])

    return nodes_out.getvalue(), edges_out.getvalue()
