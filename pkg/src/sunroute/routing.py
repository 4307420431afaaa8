"""Energy-aware route selection.

A car that recovers solar energy while driving effectively shortens sunny
road segments: a segment of physical length L with mean irradiance r
costs ``L * (1 - c * r)`` where ``c`` is the fraction of drive energy the
panels reimburse per meter at full sun. Those effective lengths form a
dense matrix on which Dijkstra's algorithm picks minimum-cost routes.
"""

from __future__ import annotations

import heapq
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .fusion import FusedGrid
from .model import CarParams, RoadGraph, ValidationError, check_irradiance

UNREACHABLE = math.inf

# Two path costs within this relative tolerance count as a tie, resolved
# toward the lexicographically smaller node sequence.
COST_REL_TOL = 1e-9


def conversion_share(p: CarParams) -> float:
    """Fraction of drive energy reimbursed per meter at unity irradiance.

    ``c = efficiency * full_sun_power * area / motor_power``. A value of
    1 or more would make sunny segments free or negative, which signals a
    physically inconsistent car configuration and is rejected.
    """
    c = p.panel_efficiency * p.full_sun_power_wm2 * p.panel_area_m2 / p.motor_power_w
    if c >= 1.0:
        raise ValidationError(
            f"conversion share {c:.4f} >= 1: panels would fully cancel drive energy"
        )
    return c


def check_share(c: float, name: str = "conversion share") -> float:
    c = float(c)
    if not 0.0 <= c < 1.0:
        raise ValidationError(f"{name} must be in [0, 1), got {c!r}")
    return c


def edge_irradiance(r_u: float, r_v: float) -> float:
    """Segment irradiance: arithmetic mean of the endpoint node values."""
    check_irradiance(r_u, "r_u")
    check_irradiance(r_v, "r_v")
    return (r_u + r_v) / 2.0


def effective_length(length_m: float, r_seg: float, c: float) -> float:
    """Solar-discounted segment length ``length_m * (1 - c * r_seg)``."""
    if not (math.isfinite(length_m) and length_m > 0):
        raise ValidationError(f"length_m must be positive and finite, got {length_m!r}")
    check_irradiance(r_seg, "r_seg")
    check_share(c)
    return length_m * (1.0 - c * r_seg)


@dataclass(frozen=True)
class WeightMatrix:
    """Dense effective-length matrix plus the matching physical lengths.

    ``effective[i, j]`` is the solar-discounted cost of edge i->j, ``inf``
    where no edge exists, and 0 on the diagonal. ``physical`` has the same
    sparsity with raw lengths, so routes can report both totals. Both
    arrays are frozen after construction.
    """

    n: int
    effective: np.ndarray
    physical: np.ndarray

    def __post_init__(self) -> None:
        for name in ("effective", "physical"):
            arr = np.array(getattr(self, name), dtype=float, copy=True)
            if arr.shape != (self.n, self.n):
                raise ValidationError(f"{name} matrix must be {self.n}x{self.n}")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def from_effective(cls, effective: np.ndarray) -> "WeightMatrix":
        """Wrap a bare effective matrix (physical lengths unknown: reuse it)."""
        effective = np.asarray(effective, dtype=float)
        return cls(n=effective.shape[0], effective=effective, physical=effective)

    def to_csv(self) -> str:
        """One row per line, ``repr`` floats, ``inf`` for absent edges."""
        out = io.StringIO()
        for i in range(self.n):
            out.write(",".join(repr(float(v)) for v in self.effective[i]))
            out.write("\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "WeightMatrix":
        rows = [line.split(",") for line in text.splitlines() if line]
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValidationError("matrix CSV must be square")
        try:
            eff = np.array([[float(v) for v in row] for row in rows], dtype=float)
        except ValueError as exc:
            raise ValidationError(f"malformed matrix CSV: {exc}") from None
        return cls.from_effective(eff)


def build_weighted_matrix(g: RoadGraph, grid: FusedGrid, c: float) -> WeightMatrix:
    """Discount every edge of ``g`` by the fused segment irradiance."""
    check_share(c)
    fused = grid.by_id()
    n = g.node_count
    effective = np.full((n, n), UNREACHABLE)
    physical = np.full((n, n), UNREACHABLE)
    np.fill_diagonal(effective, 0.0)
    np.fill_diagonal(physical, 0.0)
    for edge in g.edges:
        for endpoint in (edge.src, edge.dst):
            if endpoint not in fused:
                raise ValidationError(f"node {endpoint} missing from fused grid")
        r_seg = edge_irradiance(fused[edge.src].r, fused[edge.dst].r)
        effective[edge.src, edge.dst] = effective_length(edge.length_m, r_seg, c)
        physical[edge.src, edge.dst] = edge.length_m
    return WeightMatrix(n=n, effective=effective, physical=physical)


@dataclass(frozen=True)
class Route:
    """A selected route: node sequence plus effective and physical totals."""

    nodes: tuple[int, ...]
    total_effective_m: float
    total_physical_m: float

    def to_json(self) -> str:
        payload = {
            "nodes": list(self.nodes),
            "effective_m": self.total_effective_m,
            "physical_m": self.total_physical_m,
        }
        return json.dumps(payload, separators=(",", ":"))


def _costs_close(a: float, b: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= COST_REL_TOL * max(abs(a), abs(b))


def shortest_route(m: WeightMatrix, src: int, dst: int) -> Route | None:
    """Minimum effective-length route from ``src`` to ``dst``.

    Returns None when ``dst`` is unreachable. Deterministic tie-breaking:
    among routes whose costs tie within ``COST_REL_TOL`` the one with the
    lexicographically smallest node sequence wins, and the frontier pops
    the lowest node id among equal keys. With strictly positive edge
    weights every tight predecessor of a node is finalized before the
    node itself pops, so the per-node lexicographic choice is globally
    optimal.
    """
    for name, node in (("src", src), ("dst", dst)):
        if not 0 <= node < m.n:
            raise ValidationError(f"{name} id {node} out of range 0..{m.n - 1}")

    dist = [math.inf] * m.n
    path: list[tuple[int, ...] | None] = [None] * m.n
    done = [False] * m.n
    dist[src] = 0.0
    path[src] = (src,)
    frontier: list[tuple[float, int]] = [(0.0, src)]

    while frontier:
        d, u = heapq.heappop(frontier)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        if u == dst:
            break
        base = path[u]
        assert base is not None
        for v in range(m.n):
            w = float(m.effective[u, v])
            if v == u or w == UNREACHABLE:
                continue
            cand = dist[u] + w
            if cand < dist[v] and not _costs_close(cand, dist[v]):
                dist[v] = cand
                path[v] = base + (v,)
                heapq.heappush(frontier, (cand, v))
            elif _costs_close(cand, dist[v]):
                cand_path = base + (v,)
                current = path[v]
                if current is None or cand_path < current:
                    path[v] = cand_path

    if not done[dst] or path[dst] is None:
        return None
    route_nodes = path[dst]
    physical = sum(
        (float(m.physical[a, b]) for a, b in zip(route_nodes, route_nodes[1:])), 0.0
    )
    return Route(
        nodes=route_nodes,
        total_effective_m=float(dist[dst]),
        total_physical_m=physical,
    )
