"""Sensor report ingestion: line protocol, node assignment, latest-value store.

Report line grammar (one sample per line, single spaces, at most one
trailing newline):

    SCORE1 <station:[A-Za-z0-9]{1,16}> <lat:decimal> <lon:decimal> <irradiance:decimal> <t:integer>

``SCORE1`` is the protocol magic/version token. Decimal fields accept an
optional sign, fraction, and exponent; the timestamp is a plain integer
hour count.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field

from .model import GeoPoint, IrradianceSample, RoadGraph, haversine_m

MAGIC = "SCORE1"
DEFAULT_MAX_RADIUS_M = 500.0

ACCEPTED = "accepted"
SUPERSEDED_KEPT = "superseded-kept"

_STATION_RE = re.compile(r"[A-Za-z0-9]{1,16}")
_DECIMAL_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INTEGER_RE = re.compile(r"[+-]?\d+")


class PacketError(ValueError):
    """Malformed report line; ``field`` names the offending part."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def parse_packet(line: str) -> IrradianceSample:
    """Parse one report line into a validated sample.

    Rejections name the failing field: magic token, field count, station,
    lat/lon/irradiance value or range, or a non-integer timestamp.
    """
    body = line[:-1] if line.endswith("\n") else line
    if any(ch in body for ch in "\r\n\t"):
        raise PacketError("line", "embedded control whitespace")
    fields = body.split(" ")
    if len(fields) != 6:
        raise PacketError("field count", f"expected 6 fields, got {len(fields)}")
    magic, station, lat_raw, lon_raw, irr_raw, t_raw = fields

    if magic != MAGIC:
        raise PacketError("magic", f"unsupported version token {magic!r}")
    if not _STATION_RE.fullmatch(station):
        raise PacketError("station", f"must be 1-16 alphanumeric chars, got {station!r}")

    def decimal(raw: str, name: str, lo: float, hi: float) -> float:
        if not _DECIMAL_RE.fullmatch(raw):
            raise PacketError(name, f"not a decimal number: {raw!r}")
        value = float(raw)
        if not lo <= value <= hi:
            raise PacketError(name, f"value {value!r} outside [{lo}, {hi}]")
        return value

    lat = decimal(lat_raw, "lat", -90.0, 90.0)
    lon = decimal(lon_raw, "lon", -180.0, 180.0)
    irradiance = decimal(irr_raw, "irradiance", 0.0, 1.0)

    if not _INTEGER_RE.fullmatch(t_raw):
        raise PacketError("timestamp", f"not an integer: {t_raw!r}")
    t = int(t_raw)
    if t < 0:
        raise PacketError("timestamp", f"must be >= 0, got {t}")

    return IrradianceSample(
        station=station,
        position=GeoPoint(lat, lon),
        irradiance=irradiance,
        measured_at=t,
    )


def format_packet(sample: IrradianceSample) -> str:
    """Canonical report line for a sample, newline-terminated.

    ``format_packet`` and :func:`parse_packet` round-trip bit-exactly:
    floats are written with ``repr`` so reparsing reproduces the same
    values and therefore the same line.
    """
    if not _STATION_RE.fullmatch(sample.station):
        raise PacketError("station", f"not expressible in the line grammar: {sample.station!r}")
    return (
        f"{MAGIC} {sample.station} {sample.position.lat!r} {sample.position.lon!r} "
        f"{sample.irradiance!r} {sample.measured_at}\n"
    )


def assign_node(
    sample: IrradianceSample, g: RoadGraph, max_radius_m: float = DEFAULT_MAX_RADIUS_M
) -> int | None:
    """Nearest graph node within ``max_radius_m`` of the sample, or None.

    Equidistant candidates resolve to the lower node id.
    """
    if not g.nodes:
        return None
    best_d, best_id = min(
        (haversine_m(sample.position, node.position), node.id) for node in g.nodes
    )
    return best_id if best_d <= max_radius_m else None


def _supersedes(new: IrradianceSample, old: IrradianceSample) -> bool:
    """Total preference order making store merges order-independent.

    Newest measurement wins; timestamp ties go to the lexicographically
    smaller station, then to the remaining fields so any two distinct
    samples are strictly ordered.
    """
    if new.measured_at != old.measured_at:
        return new.measured_at > old.measured_at
    if new.station != old.station:
        return new.station < old.station
    new_rest = (new.irradiance, new.position.lat, new.position.lon)
    old_rest = (old.irradiance, old.position.lat, old.position.lon)
    return new_rest > old_rest


class SampleStore:
    """Thread-safe latest-sample-per-node store with an append-only raw log.

    The raw log keeps every accepted line, so replaying it through
    :func:`ingest_report_lines` rebuilds an identical store.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._latest: dict[int, IrradianceSample] = {}
        self._raw_log: list[str] = []

    def ingest(self, sample: IrradianceSample, node_id: int, raw_line: str | None = None) -> str:
        """Keep the better of (stored, incoming) for ``node_id``.

        Returns :data:`ACCEPTED` if the incoming sample is now stored,
        :data:`SUPERSEDED_KEPT` if the existing one was newer or
        tie-preferred (the store is unchanged).
        """
        with self._lock:
            existing = self._latest.get(node_id)
            if existing is not None and not _supersedes(sample, existing):
                return SUPERSEDED_KEPT
            self._latest[node_id] = sample
            self._raw_log.append(raw_line if raw_line is not None else format_packet(sample))
            return ACCEPTED

    def latest(self) -> dict[int, IrradianceSample]:
        """Consistent snapshot of the per-node latest samples."""
        with self._lock:
            return dict(self._latest)

    def raw_log(self) -> list[str]:
        with self._lock:
            return list(self._raw_log)

    def __len__(self) -> int:
        with self._lock:
            return len(self._latest)


@dataclass
class ReportSummary:
    """Per-line outcome counts for a batch of report lines."""

    accepted: int = 0
    superseded: int = 0
    dropped: int = 0
    rejected: int = 0
    rejections: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "superseded": self.superseded,
            "dropped": self.dropped,
            "rejected": self.rejected,
            "rejections": self.rejections,
        }


def ingest_report_lines(
    store: SampleStore,
    graph: RoadGraph,
    text: str,
    max_radius_m: float = DEFAULT_MAX_RADIUS_M,
) -> ReportSummary:
    """Parse, assign, and ingest a batch of newline-separated report lines.

    Lines that fail the grammar are counted as rejected (with 1-based line
    numbers and the field-level error); well-formed samples too far from
    every node are counted as dropped.
    """
    summary = ReportSummary()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            sample = parse_packet(line)
        except PacketError as exc:
            summary.rejected += 1
            summary.rejections.append({"line": lineno, "error": str(exc)})
            continue
        node_id = assign_node(sample, graph, max_radius_m)
        if node_id is None:
            summary.dropped += 1
            continue
        outcome = store.ingest(sample, node_id, raw_line=line.rstrip("\n") + "\n")
        if outcome == ACCEPTED:
            summary.accepted += 1
        else:
            summary.superseded += 1
    return summary
