from __future__ import annotations

import pytest

from sunroute.fusion import FusedGrid, FusedNode
from sunroute.model import GeoPoint, RoadEdge, RoadGraph, RoadNode


def const_profile(r: float) -> tuple[float, ...]:
    return tuple([float(r)] * 24)


def make_graph(irradiances, edges, base=(43.85, 18.41)) -> RoadGraph:
    """Small graph with one node per irradiance value (constant profiles)."""
    nodes = tuple(
        RoadNode(i, GeoPoint(base[0] + 0.001 * i, base[1]), const_profile(r))
        for i, r in enumerate(irradiances)
    )
    return RoadGraph(nodes=nodes, edges=tuple(RoadEdge(s, d, float(w)) for s, d, w in edges))


def make_grid(irradiances, as_of: int = 12) -> FusedGrid:
    return FusedGrid(
        as_of=as_of,
        entries=tuple(
            FusedNode(id=i, r=float(r), a_used=0.0, sample_age_h=None)
            for i, r in enumerate(irradiances)
        ),
    )


@pytest.fixture
def triangle_graph() -> RoadGraph:
    """Nodes 0-1-2 with edges 0->1 (1 km), 1->2 (1 km), 0->2 (3 km)."""
    return make_graph(
        [0.5, 0.5, 0.5],
        [(0, 1, 1000.0), (1, 2, 1000.0), (0, 2, 3000.0)],
    )


@pytest.fixture
def two_route_graph() -> RoadGraph:
    """Shady 1000 m route 0->1->4 (r = 0.1) vs sunny 0->2->3->4.

    The sunny alternative is 1200 m total: two 100 m connectors at the
    shared endpoints (segment irradiance 0.55) around a 1000 m stretch at
    full sun. Effective costs are 1000 - 100 c (shady) and 1200 - 1110 c
    (sunny), so the sunny route wins for c > 200/1010.
    """
    return make_graph(
        [0.1, 0.1, 1.0, 1.0, 0.1],
        [(0, 1, 500.0), (1, 4, 500.0), (0, 2, 100.0), (2, 3, 1000.0), (3, 4, 100.0)],
    )


TWO_ROUTE_IRR = (0.1, 0.1, 1.0, 1.0, 0.1)
TWO_ROUTE_CROSSOVER = 200.0 / 1010.0
SHADY_ROUTE = (0, 1, 4)
SUNNY_ROUTE = (0, 2, 3, 4)


@pytest.fixture
def two_route_grid() -> FusedGrid:
    return make_grid(TWO_ROUTE_IRR)
