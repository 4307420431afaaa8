"""HTTP service exposing fused grids and weight matrices to routing clients.

Endpoints:

- ``GET /health`` -> ``ok``
- ``GET /grid?t=<hour>`` -> fused grid JSON
- ``GET /matrix?t=<hour>&c=<share>`` -> effective-length matrix CSV
  (``c`` defaults to the configured car's conversion share)
- ``POST /report`` (body: report lines) -> per-line accept/reject summary,
  status 422 when any line was rejected

Responses are rendered through the same serializers as the offline
pipeline, so a frozen store yields byte-identical output either way.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from .fusion import FusionModel, fuse_grid
from .ingest import DEFAULT_MAX_RADIUS_M, SampleStore, ingest_report_lines
from .model import CarParams, DEFAULT_CAR, RoadGraph, ValidationError
from .routing import build_weighted_matrix, check_share, conversion_share


def _bad_request(detail: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": detail})


def create_app(
    store: SampleStore,
    graph: RoadGraph,
    car: CarParams = DEFAULT_CAR,
    model: FusionModel = FusionModel.gaussian(),
    max_radius_m: float = DEFAULT_MAX_RADIUS_M,
) -> FastAPI:
    app = FastAPI(title="sunroute", version="0.1.0")

    def parse_hour(raw: str | None) -> int:
        if raw is None:
            raise ValidationError("missing required query parameter 't'")
        try:
            t = int(raw)
        except ValueError:
            raise ValidationError(f"'t' must be an integer hour, got {raw!r}") from None
        if t < 0:
            raise ValidationError(f"'t' must be >= 0, got {t}")
        return t

    @app.get("/health")
    def health() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.get("/grid")
    def grid(t: str | None = None) -> Response:
        try:
            hour = parse_hour(t)
            fused = fuse_grid(graph, store.latest(), hour, model)
        except ValidationError as exc:
            return _bad_request(str(exc))
        return Response(content=fused.to_json(), media_type="application/json")

    @app.get("/matrix")
    def matrix(t: str | None = None, c: str | None = None) -> Response:
        try:
            hour = parse_hour(t)
            if c is None:
                share = conversion_share(car)
            else:
                try:
                    share = check_share(float(c))
                except ValueError:
                    raise ValidationError(f"'c' must be a number in [0, 1), got {c!r}") from None
            fused = fuse_grid(graph, store.latest(), hour, model)
            weights = build_weighted_matrix(graph, fused, share)
        except ValidationError as exc:
            return _bad_request(str(exc))
        return Response(content=weights.to_csv(), media_type="text/csv")

    @app.post("/report")
    async def report(request: Request) -> JSONResponse:
        body = (await request.body()).decode("utf-8", errors="replace")
        summary = ingest_report_lines(store, graph, body, max_radius_m)
        status = 422 if summary.rejected else 200
        return JSONResponse(status_code=status, content=summary.to_dict())

    return app


def serve(
    store: SampleStore,
    graph: RoadGraph,
    car: CarParams = DEFAULT_CAR,
    model: FusionModel = FusionModel.gaussian(),
    host: str = "127.0.0.1",
    port: int = 8000,
    max_radius_m: float = DEFAULT_MAX_RADIUS_M,
) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(store, graph, car, model, max_radius_m), host=host, port=port)
