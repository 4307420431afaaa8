from __future__ import annotations

import io
import random

import pytest

from sunroute.graphio import GraphFormatError, dump_graph, load_graph
from sunroute.model import (
    CarParams,
    DEFAULT_CAR,
    GeoPoint,
    IrradianceSample,
    RoadEdge,
    RoadGraph,
    RoadNode,
    ValidationError,
    validate_graph,
)

from conftest import const_profile, make_graph


NODES_2 = (
    "id,lat,lon," + ",".join(f"p{h}" for h in range(24)) + "\n"
    "0,43.85,18.41," + ",".join(["0.5"] * 24) + "\n"
    "1,43.86,18.42," + ",".join(["0.25"] * 24) + "\n"
)
EDGES_1 = "from,to,length_m\n0,1,750.5\n"


def _load(nodes_text: str, edges_text: str) -> RoadGraph:
    return load_graph(io.BytesIO(nodes_text.encode()), io.BytesIO(edges_text.encode()))


class TestTypes:
    def test_geo_point_ranges(self):
        GeoPoint(90.0, -180.0)
        with pytest.raises(ValidationError):
            GeoPoint(90.1, 0.0)
        with pytest.raises(ValidationError):
            GeoPoint(0.0, 180.5)

    def test_car_params_validation(self):
        with pytest.raises(ValidationError):
            CarParams(0.0, 1.0, 0.5, 957.0)
        with pytest.raises(ValidationError):
            CarParams(11000.0, 1.0, 1.5, 957.0)
        with pytest.raises(ValidationError):
            CarParams(11000.0, 1.0, 0.18, -1.0)

    def test_default_car_constants(self):
        assert DEFAULT_CAR.motor_power_w == 11_000.0
        assert DEFAULT_CAR.panel_area_m2 == pytest.approx(1.452)
        assert DEFAULT_CAR.panel_efficiency == 0.18
        assert DEFAULT_CAR.full_sun_power_wm2 == 957.0

    def test_sample_validation(self):
        pos = GeoPoint(0.0, 0.0)
        IrradianceSample("E74ABC", pos, 0.5, 100)
        with pytest.raises(ValidationError):
            IrradianceSample("", pos, 0.5, 100)
        with pytest.raises(ValidationError):
            IrradianceSample("X" * 17, pos, 0.5, 100)
        with pytest.raises(ValidationError):
            IrradianceSample("A B", pos, 0.5, 100)
        with pytest.raises(ValidationError):
            IrradianceSample("OK", pos, 1.5, 100)
        with pytest.raises(ValidationError):
            IrradianceSample("OK", pos, 0.5, -1)

    def test_timestamp_difference_is_integer_hours(self):
        s1 = IrradianceSample("A", GeoPoint(0, 0), 0.5, 4120)
        s2 = IrradianceSample("B", GeoPoint(0, 0), 0.5, 4100)
        assert s1.measured_at - s2.measured_at == 20

    def test_offline_at_wraps_hour_of_day(self):
        profile = tuple(h / 24 for h in range(24))
        node = RoadNode(0, GeoPoint(0, 0), profile)
        assert node.offline_at(0) == profile[0]
        assert node.offline_at(26) == profile[2]
        assert node.offline_at(64) == profile[16]


class TestLoadGraph:
    def test_two_node_pair(self):
        g = _load(NODES_2, EDGES_1)
        assert g.node_count == 2
        assert g.edges == (RoadEdge(0, 1, 750.5),)
        assert g.nodes[1].offline_profile == const_profile(0.25)

    def test_negative_length_names_line(self):
        with pytest.raises(GraphFormatError, match="edges line 2"):
            _load(NODES_2, "from,to,length_m\n0,1,-5\n")

    def test_bad_header_rejected(self):
        with pytest.raises(GraphFormatError, match="nodes line 1"):
            _load("id,lat,lon\n", EDGES_1)

    def test_unknown_edge_endpoint_names_line(self):
        with pytest.raises(GraphFormatError, match="edges line 3.*99"):
            _load(NODES_2, "from,to,length_m\n0,1,10\n1,99,10\n")

    def test_duplicate_node_id_names_line(self):
        bad = NODES_2 + "1,43.87,18.43," + ",".join(["0.1"] * 24) + "\n"
        with pytest.raises(GraphFormatError, match="nodes line 4.*duplicate"):
            _load(bad, EDGES_1)

    def test_noncontiguous_ids_rejected(self):
        bad = NODES_2.replace("\n1,", "\n7,")
        with pytest.raises(GraphFormatError, match="contiguous"):
            _load(bad, "from,to,length_m\n")

    def test_profile_out_of_range_names_line(self):
        bad = NODES_2.replace("0.25", "1.25")
        with pytest.raises(GraphFormatError, match="nodes line 3"):
            _load(bad, EDGES_1)

    def test_self_loop_rejected(self):
        with pytest.raises(GraphFormatError, match="self-loop"):
            _load(NODES_2, "from,to,length_m\n1,1,100\n")

    def test_duplicate_edge_rejected(self):
        with pytest.raises(GraphFormatError, match="duplicate directed edge"):
            _load(NODES_2, "from,to,length_m\n0,1,10\n0,1,20\n")

    def test_fifty_node_grid_fixture(self):
        # 5 x 10 lattice, bidirectional streets: the prototype network scale.
        rows, cols = 5, 10
        lines = ["id,lat,lon," + ",".join(f"p{h}" for h in range(24))]
        for i in range(rows * cols):
            r, c = divmod(i, cols)
            lines.append(f"{i},{43.8 + r * 0.002},{18.4 + c * 0.002}," + ",".join(["0.5"] * 24))
        edge_lines = ["from,to,length_m"]
        for i in range(rows * cols):
            r, c = divmod(i, cols)
            if c + 1 < cols:
                edge_lines += [f"{i},{i + 1},200", f"{i + 1},{i},200"]
            if r + 1 < rows:
                edge_lines += [f"{i},{i + cols},220", f"{i + cols},{i},220"]
        g = _load("\n".join(lines) + "\n", "\n".join(edge_lines) + "\n")
        assert g.node_count == 50
        assert validate_graph(g) == []

    def test_round_trip_stability(self, two_route_graph):
        nodes_csv, edges_csv = dump_graph(two_route_graph)
        reloaded = _load(nodes_csv, edges_csv)
        assert reloaded == two_route_graph
        assert dump_graph(reloaded) == (nodes_csv, edges_csv)

    def test_round_trip_random_graphs(self):
        rng = random.Random(4242)
        for _ in range(25):
            n = rng.randint(1, 8)
            irr = [round(rng.random(), 6) for _ in range(n)]
            edges = [
                (i, j, round(rng.uniform(1, 5000), 3))
                for i in range(n)
                for j in range(n)
                if i != j and rng.random() < 0.3
            ]
            g = make_graph(irr, edges)
            nodes_csv, edges_csv = dump_graph(g)
            assert _load(nodes_csv, edges_csv) == g


class TestValidateGraph:
    def test_valid_triangle(self, triangle_graph):
        assert validate_graph(triangle_graph) == []

    def test_self_loop_names_node(self):
        g = make_graph([0.5, 0.5, 0.5], [(0, 1, 100.0)])
        g = RoadGraph(nodes=g.nodes, edges=g.edges + (RoadEdge(2, 2, 100.0),))
        violations = validate_graph(g)
        assert len(violations) == 1
        assert "self-loop" in violations[0] and "2" in violations[0]

    def test_unknown_endpoint_names_edge(self):
        base = make_graph([0.5] * 10, [(0, 1, 100.0)])
        g = RoadGraph(nodes=base.nodes, edges=base.edges + (RoadEdge(3, 99, 50.0),))
        violations = validate_graph(g)
        assert len(violations) == 1
        assert "(3, 99" in violations[0]

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda g: RoadGraph(g.nodes + (g.nodes[0],), g.edges),  # duplicate id
            lambda g: RoadGraph(g.nodes[:-1], g.edges),  # dangling edge endpoints
            lambda g: RoadGraph(g.nodes, g.edges + (RoadEdge(0, 1, -3.0),)),
            lambda g: RoadGraph(g.nodes, g.edges + (RoadEdge(0, 1, float("inf")),)),
            lambda g: RoadGraph(g.nodes, g.edges + (RoadEdge(1, 1, 5.0),)),
            lambda g: RoadGraph(g.nodes, g.edges + (g.edges[0],)),  # duplicate edge
            lambda g: RoadGraph(
                (RoadNode(0, g.nodes[0].position, (0.5,) * 23),) + g.nodes[1:], g.edges
            ),  # short profile
            lambda g: RoadGraph(
                (RoadNode(0, g.nodes[0].position, (1.5,) + (0.5,) * 23),) + g.nodes[1:],
                g.edges,
            ),  # out-of-range profile
        ],
    )
    def test_mutations_are_flagged(self, triangle_graph, mutate):
        assert validate_graph(triangle_graph) == []
        assert validate_graph(mutate(triangle_graph)) != []
