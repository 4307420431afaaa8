"""Reproducible studies: fusion estimation error and route shift vs share.

The fusion-error study takes a 3-day hourly irradiance series (72 values,
exactly 31 of them non-zero daylight hours) and estimates the value at a
target hour, pretending in turn that each daylight hour holds the last
available measurement. The forecast stand-in is a fresh uniform draw from
(0, 1) per trial, so the mean absolute error per measurement age shows
how quickly each weight model falls back to the forecast.

The route-shift study sweeps the conversion share c over a fixed graph
and fused grid and reports where the selected route departs from the
c = 0 shortest-path baseline.
"""

from __future__ import annotations

import configparser
import csv
import io
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .fusion import FusedGrid, FusionModel, fuse
from .graphio import load_graph
from .model import RoadGraph, ValidationError, check_irradiance
from .routing import Route, build_weighted_matrix, check_share, shortest_route

SERIES_LEN = 72
DAYLIGHT_HOURS = 31
DEFAULT_TARGET_INDEX = 64  # 16:00 on day 3
DEFAULT_TRIALS = 100
DEFAULT_SEED = 7

DEFAULT_MODELS = (
    FusionModel.gaussian(100_000),
    FusionModel.gaussian(10),
    FusionModel.diurnal(),
)


def synthetic_three_day_series() -> tuple[float, ...]:
    """Plausible stand-in series: three bell-shaped days, 31 daylight hours.

    Days 1 and 2 run 06:00-16:00; day 3 has an overcast-dark morning and
    runs 08:00-16:00, putting the last non-zero hour at the default
    target index 64.
    """
    series = [0.0] * SERIES_LEN
    for day_start, first_hour, last_hour, amplitude in (
        (0, 6, 16, 0.80),
        (24, 6, 16, 0.85),
        (48, 8, 16, 0.90),
    ):
        n = last_hour - first_hour + 1
        for k in range(n):
            value = amplitude * float(np.sin(np.pi * (k + 0.5) / n))
            series[day_start + first_hour + k] = round(value, 4)
    return tuple(series)


@dataclass(frozen=True)
class FusionErrorConfig:
    """Inputs for the fusion-error study.

    The series must hold exactly 31 non-zero values, all at or before the
    target index (measurements never come from the future), and the
    target hour itself must be a daylight hour.
    """

    series: tuple[float, ...]
    target_index: int = DEFAULT_TARGET_INDEX
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    models: tuple[FusionModel, ...] = DEFAULT_MODELS

    def __post_init__(self) -> None:
        if len(self.series) != SERIES_LEN:
            raise ValidationError(
                f"series must have {SERIES_LEN} hourly values, got {len(self.series)}"
            )
        for i, value in enumerate(self.series):
            check_irradiance(value, f"series[{i}]")
        if not 0 <= self.target_index < SERIES_LEN:
            raise ValidationError(f"target index {self.target_index} outside the series")
        nonzero = [i for i, v in enumerate(self.series) if v != 0.0]
        if len(nonzero) != DAYLIGHT_HOURS:
            raise ValidationError(
                f"series must have exactly {DAYLIGHT_HOURS} non-zero daylight hours, "
                f"got {len(nonzero)}"
            )
        late = [i for i in nonzero if i > self.target_index]
        if late:
            raise ValidationError(f"daylight hours after the target index: {late}")
        if self.series[self.target_index] == 0.0:
            raise ValidationError("target hour must itself be a daylight hour")
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        if not self.models:
            raise ValidationError("at least one fusion model is required")


@dataclass(frozen=True)
class FusionErrorRow:
    """Mean absolute estimation error when the last measurement is dt old."""

    dt: int
    errors: tuple[float, ...]
    forecast_only: float


@dataclass(frozen=True)
class FusionErrorTable:
    model_labels: tuple[str, ...]
    rows: tuple[FusionErrorRow, ...]

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("dt," + ",".join(self.model_labels) + ",forecast_only\n")
        for row in self.rows:
            cells = [str(row.dt)] + [repr(e) for e in row.errors] + [repr(row.forecast_only)]
            out.write(",".join(cells) + "\n")
        return out.getvalue()

    def column(self, label: str) -> dict[int, float]:
        """Errors for one model keyed by dt."""
        if label == "forecast_only":
            return {row.dt: row.forecast_only for row in self.rows}
        idx = self.model_labels.index(label)
        return {row.dt: row.errors[idx] for row in self.rows}


def _forecast_draws(seed: int, series_index: int, trials: int) -> np.ndarray:
    # One RNG substream per (seed, hour index, trial index): results do not
    # depend on evaluation order, so trials could run in parallel and the
    # output would stay byte-identical.
    return np.array(
        [np.random.default_rng([seed, series_index, j]).random() for j in range(trials)]
    )


def run_fusion_error_study(cfg: FusionErrorConfig) -> FusionErrorTable:
    """Mean |estimate - truth| per measurement age, per weight model.

    For each daylight hour i, the series value at i plays the last
    available measurement (age dt = target - i) and each model's fused
    estimate is compared to the true value at the target hour; the
    forecast r_off is drawn uniformly per trial, shared across models.
    The rightmost output column is the pure-forecast error for reference.
    """
    r_true = cfg.series[cfg.target_index]
    labels = tuple(m.label for m in cfg.models)
    rows = []
    for i, r_on in enumerate(cfg.series):
        if r_on == 0.0:
            continue
        dt = cfg.target_index - i
        draws = _forecast_draws(cfg.seed, i, cfg.trials)
        errors = []
        for model in cfg.models:
            a = model.weight(dt)
            total = 0.0
            for u in draws:
                total += abs(fuse(r_on, float(u), a) - r_true)
            errors.append(total / cfg.trials)
        forecast_only = float(np.mean(np.abs(draws - r_true)))
        rows.append(FusionErrorRow(dt=dt, errors=tuple(errors), forecast_only=forecast_only))
    rows.sort(key=lambda row: row.dt)
    return FusionErrorTable(model_labels=labels, rows=tuple(rows))


@dataclass(frozen=True)
class RouteShiftEntry:
    c: float
    route: Route | None
    changed: bool


@dataclass(frozen=True)
class RouteShiftReport:
    baseline: Route | None
    entries: tuple[RouteShiftEntry, ...]

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("c,changed,effective_m,physical_m,route\n")
        for e in self.entries:
            if e.route is None:
                out.write(f"{e.c!r},{str(e.changed).lower()},,,unreachable\n")
            else:
                path = "-".join(str(n) for n in e.route.nodes)
                out.write(
                    f"{e.c!r},{str(e.changed).lower()},"
                    f"{e.route.total_effective_m!r},{e.route.total_physical_m!r},{path}\n"
                )
        return out.getvalue()


def run_route_scenario(
    graph: RoadGraph,
    grid: FusedGrid,
    shares: Sequence[float],
    src: int,
    dst: int,
) -> RouteShiftReport:
    """Route per conversion share, flagged against the c = 0 baseline.

    An unreachable destination yields None routes rather than an error,
    mirroring the routing contract.
    """
    for c in shares:
        check_share(c)
    baseline = shortest_route(build_weighted_matrix(graph, grid, 0.0), src, dst)
    baseline_nodes = None if baseline is None else baseline.nodes
    entries = []
    for c in shares:
        route = shortest_route(build_weighted_matrix(graph, grid, float(c)), src, dst)
        route_nodes = None if route is None else route.nodes
        entries.append(
            RouteShiftEntry(c=float(c), route=route, changed=route_nodes != baseline_nodes)
        )
    return RouteShiftReport(baseline=baseline, entries=tuple(entries))


def load_hourly_series(stream: IO[bytes] | IO[str]) -> tuple[float, ...]:
    """Read an hourly series CSV with header ``hour,irradiance``.

    Rows must be consecutive hours starting at 0.
    """
    data = stream.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.reader(io.StringIO(data))
    header = next(reader, None)
    if header != ["hour", "irradiance"]:
        raise ValidationError("series CSV must have header 'hour,irradiance'")
    values = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ValidationError(f"series line {lineno}: expected 2 fields")
        try:
            hour, value = int(row[0]), float(row[1])
        except ValueError as exc:
            raise ValidationError(f"series line {lineno}: {exc}") from None
        if hour != len(values):
            raise ValidationError(
                f"series line {lineno}: expected hour {len(values)}, got {hour}"
            )
        values.append(value)
    return tuple(values)


def dump_hourly_series(series: Sequence[float]) -> str:
    out = io.StringIO()
    out.write("hour,irradiance\n")
    for hour, value in enumerate(series):
        out.write(f"{hour},{float(value)!r}\n")
    return out.getvalue()


@dataclass(frozen=True)
class RouteScenarioConfig:
    """File-level inputs for the route-shift study."""

    nodes_csv: Path
    edges_csv: Path
    src: int
    dst: int
    shares: tuple[float, ...]
    grid_source: str

    def load_graph(self) -> RoadGraph:
        with open(self.nodes_csv, "rb") as nodes, open(self.edges_csv, "rb") as edges:
            return load_graph(nodes, edges)

    def load_grid(self) -> FusedGrid:
        return FusedGrid.from_json(fetch_grid_text(self.grid_source))


def fetch_grid_text(source: str) -> str:
    """Read fused-grid JSON from a local path or an HTTP(S) URL."""
    if source.startswith(("http://", "https://")):
        with urllib.request.urlopen(source, timeout=30) as resp:
            return resp.read().decode("utf-8")
    return Path(source).read_text(encoding="utf-8")


def run_route_scenario_config(cfg: RouteScenarioConfig) -> RouteShiftReport:
    graph = cfg.load_graph()
    grid = cfg.load_grid()
    return run_route_scenario(graph, grid, cfg.shares, cfg.src, cfg.dst)


def _require(section: configparser.SectionProxy, key: str, where: str) -> str:
    if key not in section:
        raise ValidationError(f"{where}: missing required key {key!r}")
    return section[key]


def _resolve(base: Path, value: str) -> Path:
    path = Path(value)
    return path if path.is_absolute() else base / path


def load_fusion_error_config(path: str | Path) -> FusionErrorConfig:
    """Read a ``[fusion-error]`` INI section (keys are all optional).

    Recognized keys: ``series_csv`` (path; the built-in synthetic series
    when omitted), ``target_index``, ``trials``, ``seed``, and ``models``
    (comma-separated ``gaussian:<D>`` / ``diurnal`` entries).
    """
    path = Path(path)
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ValidationError(f"cannot read config file {path}")
    if "fusion-error" not in parser:
        raise ValidationError(f"{path}: missing [fusion-error] section")
    section = parser["fusion-error"]

    if "series_csv" in section:
        series_path = _resolve(path.parent, section["series_csv"])
        with open(series_path, "rb") as stream:
            series = load_hourly_series(stream)
    else:
        series = synthetic_three_day_series()
    models = DEFAULT_MODELS
    if "models" in section:
        models = tuple(
            FusionModel.parse(raw) for raw in section["models"].split(",") if raw.strip()
        )
    try:
        return FusionErrorConfig(
            series=series,
            target_index=section.getint("target_index", DEFAULT_TARGET_INDEX),
            trials=section.getint("trials", DEFAULT_TRIALS),
            seed=section.getint("seed", DEFAULT_SEED),
            models=models,
        )
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def load_route_scenario_config(path: str | Path) -> RouteScenarioConfig:
    """Read a ``[route-shift]`` INI section.

    Required keys: ``nodes_csv``, ``edges_csv``, ``src``, ``dst``,
    ``shares`` (comma-separated values in [0, 1)), and ``grid`` (a fused
    grid JSON path or HTTP URL). Relative paths resolve against the
    config file's directory.
    """
    path = Path(path)
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ValidationError(f"cannot read config file {path}")
    if "route-shift" not in parser:
        raise ValidationError(f"{path}: missing [route-shift] section")
    section = parser["route-shift"]
    where = f"{path} [route-shift]"
    try:
        shares = tuple(
            check_share(float(raw))
            for raw in _require(section, "shares", where).split(",")
            if raw.strip()
        )
        grid_raw = _require(section, "grid", where)
        return RouteScenarioConfig(
            nodes_csv=_resolve(path.parent, _require(section, "nodes_csv", where)),
            edges_csv=_resolve(path.parent, _require(section, "edges_csv", where)),
            src=int(_require(section, "src", where)),
            dst=int(_require(section, "dst", where)),
            shares=shares,
            grid_source=(
                grid_raw
                if grid_raw.startswith(("http://", "https://"))
                else str(_resolve(path.parent, grid_raw))
            ),
        )
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from None
