"""Domain model for the solar-aware routing toolkit.

Conventions used throughout the package:

- Irradiance values are dimensionless, normalized to [0, 1] where 1 is
  full sun.
- Timestamps are integer hours elapsed since the dataset's reference
  epoch (hour 0 = midnight at the start of the year), so hour-of-day is
  simply ``t % 24``.
- Road lengths and distances are meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_000.0

HOURS_PER_DAY = 24


class ValidationError(ValueError):
    """Raised when a domain value violates its constraints."""


def check_irradiance(value: float, name: str = "irradiance") -> float:
    """Validate a normalized irradiance value, returning it as a float."""
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must be in [0, 1], got {value!r}")
    return value


def check_timestamp(hours: int, name: str = "timestamp") -> int:
    """Validate an hour-resolution timestamp (non-negative integer)."""
    if not isinstance(hours, int) or isinstance(hours, bool):
        raise ValidationError(f"{name} must be an integer hour count, got {hours!r}")
    if hours < 0:
        raise ValidationError(f"{name} must be >= 0, got {hours}")
    return hours


@dataclass(frozen=True)
class GeoPoint:
    """WGS84-style coordinate pair in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.lat <= 90.0:
            raise ValidationError(f"latitude must be in [-90, 90], got {self.lat!r}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValidationError(f"longitude must be in [-180, 180], got {self.lon!r}")


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points, in meters."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


@dataclass(frozen=True)
class RoadNode:
    """A crossroad: integer id, position, and a 24-slot hour-of-day
    irradiance forecast profile.

    Graph-level invariants (profile length/range, id contiguity) are
    checked by :func:`validate_graph`, not here, so that invalid graphs
    can be constructed and diagnosed.
    """

    id: int
    position: GeoPoint
    offline_profile: tuple[float, ...]

    def offline_at(self, t_hours: int) -> float:
        """Forecast irradiance at the hour-of-day of timestamp ``t_hours``."""
        return self.offline_profile[t_hours % HOURS_PER_DAY]


@dataclass(frozen=True)
class RoadEdge:
    """Directed road segment between two node ids, physical length in meters."""

    src: int
    dst: int
    length_m: float


@dataclass(frozen=True)
class RoadGraph:
    """Directed road network. Undirected roads appear as two edges.

    A graph is well-formed when :func:`validate_graph` returns no
    violations: node ids are unique and contiguous from 0, profiles have
    24 values in [0, 1], edge endpoints exist, lengths are positive and
    finite, and there are no self-loops or duplicate directed edges.
    """

    nodes: tuple[RoadNode, ...]
    edges: tuple[RoadEdge, ...]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> RoadNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise ValidationError(f"unknown node id {node_id}")


def validate_graph(g: RoadGraph) -> list[str]:
    """Return one description per violated graph invariant (empty if valid)."""
    violations: list[str] = []

    seen_ids: set[int] = set()
    for node in g.nodes:
        if node.id in seen_ids:
            violations.append(f"duplicate node id {node.id}")
        seen_ids.add(node.id)
        if len(node.offline_profile) != HOURS_PER_DAY:
            violations.append(
                f"node {node.id}: offline profile has {len(node.offline_profile)} "
                f"values, expected {HOURS_PER_DAY}"
            )
        else:
            for hour, value in enumerate(node.offline_profile):
                if not 0.0 <= value <= 1.0:
                    violations.append(
                        f"node {node.id}: profile value {value!r} at hour {hour} "
                        "outside [0, 1]"
                    )
    expected_ids = set(range(len(g.nodes)))
    if seen_ids != expected_ids:
        violations.append(
            f"node ids are not contiguous 0..{len(g.nodes) - 1}: got {sorted(seen_ids)}"
        )

    seen_edges: set[tuple[int, int]] = set()
    for edge in g.edges:
        label = f"edge ({edge.src}, {edge.dst}, {edge.length_m!r})"
        if edge.src not in seen_ids:
            violations.append(f"{label}: unknown source id {edge.src}")
        if edge.dst not in seen_ids:
            violations.append(f"{label}: unknown destination id {edge.dst}")
        if edge.src == edge.dst:
            violations.append(f"{label}: self-loop at node {edge.src}")
        if not (math.isfinite(edge.length_m) and edge.length_m > 0):
            violations.append(f"{label}: length must be positive and finite")
        if (edge.src, edge.dst) in seen_edges:
            violations.append(f"{label}: duplicate directed edge")
        seen_edges.add((edge.src, edge.dst))

    return violations


@dataclass(frozen=True)
class CarParams:
    """Vehicle parameters that determine how much drive energy the panels
    can recover per meter."""

    motor_power_w: float
    panel_area_m2: float
    panel_efficiency: float
    full_sun_power_wm2: float

    def __post_init__(self) -> None:
        if not self.motor_power_w > 0:
            raise ValidationError(f"motor_power_w must be > 0, got {self.motor_power_w!r}")
        if not self.panel_area_m2 > 0:
            raise ValidationError(f"panel_area_m2 must be > 0, got {self.panel_area_m2!r}")
        if not 0 < self.panel_efficiency <= 1:
            raise ValidationError(
                f"panel_efficiency must be in (0, 1], got {self.panel_efficiency!r}"
            )
        if not self.full_sun_power_wm2 > 0:
            raise ValidationError(
                f"full_sun_power_wm2 must be > 0, got {self.full_sun_power_wm2!r}"
            )


# Reference vehicle: 11 kW motor, two 0.726 m^2 panels at 18% efficiency,
# 957 W/m^2 incident power under full (unity) irradiance.
DEFAULT_CAR = CarParams(
    motor_power_w=11_000.0,
    panel_area_m2=2 * 0.726,
    panel_efficiency=0.18,
    full_sun_power_wm2=957.0,
)

MAX_STATION_LEN = 16


@dataclass(frozen=True)
class IrradianceSample:
    """One online sensor reading: who measured, where, how much sun, when."""

    station: str
    position: GeoPoint
    irradiance: float
    measured_at: int

    def __post_init__(self) -> None:
        if not self.station:
            raise ValidationError("station must be non-empty")
        if len(self.station) > MAX_STATION_LEN:
            raise ValidationError(
                f"station must be at most {MAX_STATION_LEN} chars, got {len(self.station)}"
            )
        if any(ch.isspace() for ch in self.station):
            raise ValidationError(f"station must not contain whitespace: {self.station!r}")
        check_irradiance(self.irradiance)
        check_timestamp(self.measured_at, "measured_at")
