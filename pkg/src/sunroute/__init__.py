"""Solar-aware road routing toolkit.

Fuses online sensor irradiance with offline forecasts per road-network
node, discounts road segments by the solar energy a car recovers while
driving them, selects routes with Dijkstra's algorithm, and ranks parking
spots by a sun/walking-distance criterion.
"""

from .fusion import (
    FusedGrid,
    FusedNode,
    FusionModel,
    fuse,
    fuse_grid,
    weight_diurnal,
    weight_gaussian,
    wrap_mod24,
)
from .graphio import GraphFormatError, dump_graph, load_graph
from .ingest import (
    ACCEPTED,
    PacketError,
    SUPERSEDED_KEPT,
    SampleStore,
    assign_node,
    format_packet,
    ingest_report_lines,
    parse_packet,
)
from .model import (
    CarParams,
    DEFAULT_CAR,
    GeoPoint,
    IrradianceSample,
    RoadEdge,
    RoadGraph,
    RoadNode,
    ValidationError,
    haversine_m,
    validate_graph,
)
from .parking import (
    ParkingParams,
    ParkingSpot,
    RankedSpot,
    parking_score,
    select_parking,
    walking_distance,
)
from .routing import (
    Route,
    UNREACHABLE,
    WeightMatrix,
    build_weighted_matrix,
    conversion_share,
    edge_irradiance,
    effective_length,
    shortest_route,
)

__version__ = "0.1.0"
