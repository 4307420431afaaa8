from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from sunroute.fusion import FusionModel, fuse_grid
from sunroute.ingest import SampleStore, format_packet, ingest_report_lines
from sunroute.model import DEFAULT_CAR, IrradianceSample
from sunroute.routing import build_weighted_matrix, conversion_share
from sunroute.server import create_app


@pytest.fixture
def served(two_route_graph):
    store = SampleStore()
    app = create_app(store, two_route_graph, DEFAULT_CAR, FusionModel.diurnal())
    return store, two_route_graph, TestClient(app)


def report_lines(graph, entries) -> str:
    return "".join(
        format_packet(IrradianceSample(st, graph.nodes[node].position, r, t))
        for st, node, r, t in entries
    )


class TestEndpoints:
    def test_health(self, served):
        _, _, client = served
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.text == "ok"

    def test_grid_is_deterministic_between_posts(self, served):
        _, _, client = served
        a = client.get("/grid", params={"t": 12})
        b = client.get("/grid", params={"t": 12})
        assert a.status_code == 200
        assert a.content == b.content
        assert a.headers["content-type"].startswith("application/json")

    def test_matrix_with_zero_share_is_physical(self, served):
        _, graph, client = served
        resp = client.get("/matrix", params={"t": 12, "c": 0})
        assert resp.status_code == 200
        lengths = {
            (e.src, e.dst): e.length_m for e in graph.edges
        }
        rows = [line.split(",") for line in resp.text.splitlines()]
        for (src, dst), length in lengths.items():
            assert float(rows[src][dst]) == length
        assert rows[0][3] == "inf"

    def test_matrix_default_share_uses_car(self, served):
        _, graph, client = served
        explicit = client.get(
            "/matrix", params={"t": 12, "c": repr(conversion_share(DEFAULT_CAR))}
        )
        default = client.get("/matrix", params={"t": 12})
        assert default.text == explicit.text

    def test_report_mixed_lines(self, served):
        store, graph, client = served
        body = report_lines(graph, [("AA", 0, 0.9, 5)]) + "SCORE1 X 0 0 1.5 10\n"
        resp = client.post("/report", content=body)
        assert resp.status_code == 422
        summary = resp.json()
        assert summary["accepted"] == 1
        assert summary["rejected"] == 1
        assert summary["rejections"][0]["line"] == 2
        assert len(store) == 1

    def test_report_all_good(self, served):
        _, graph, client = served
        resp = client.post("/report", content=report_lines(graph, [("AA", 0, 0.9, 5)]))
        assert resp.status_code == 200
        assert resp.json()["rejected"] == 0

    def test_report_changes_grid(self, served):
        _, graph, client = served
        before = client.get("/grid", params={"t": 12}).content
        client.post("/report", content=report_lines(graph, [("AA", 0, 0.93, 12)]))
        after = client.get("/grid", params={"t": 12}).content
        assert before != after

    @pytest.mark.parametrize(
        "path,params",
        [
            ("/grid", {}),
            ("/grid", {"t": "abc"}),
            ("/grid", {"t": -1}),
            ("/matrix", {"t": "x"}),
            ("/matrix", {"t": 1, "c": "1.5"}),
            ("/matrix", {"t": 1, "c": "nope"}),
        ],
    )
    def test_malformed_queries_get_400(self, served, path, params):
        _, _, client = served
        assert client.get(path, params=params).status_code == 400


class TestPipelineEquivalence:
    def test_served_output_matches_offline_pipeline(self, served):
        store, graph, client = served
        body = report_lines(
            graph, [("AA", 0, 0.9, 5), ("BB", 2, 0.4, 9), ("CC", 0, 0.7, 11)]
        )
        assert client.post("/report", content=body).status_code == 200

        offline_store = SampleStore()
        ingest_report_lines(offline_store, graph, body)
        model = FusionModel.diurnal()
        grid = fuse_grid(graph, offline_store.latest(), 12, model)
        matrix = build_weighted_matrix(graph, grid, 0.1)

        assert client.get("/grid", params={"t": 12}).text == grid.to_json()
        assert client.get("/matrix", params={"t": 12, "c": "0.1"}).text == matrix.to_csv()
