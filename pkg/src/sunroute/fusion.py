"""Fusion of online sensor readings with offline forecast irradiance.

The fused value for a location is the convex combination

    r = a * r_on + (1 - a) * r_off

where the weight ``a`` decays with the age of the online measurement.
Two decay models are provided:

- gaussian: ``a = exp(-dt^2 / D)`` for a measurement ``dt`` hours old.
  ``D`` is an empirical denominator; 100,000 keeps measurements dominant
  for days, 10 discards anything older than about 6-8 hours.
- diurnal: ``a = exp(-m^2 - d)`` where ``m`` is the signed hour-of-day
  offset (``dt mod 24`` mapped into [-11, 12]) and ``d = floor(dt / 24)``
  is the whole-day lag. This prefers measurements taken at the same time
  of day on recent previous days.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

from .model import (
    HOURS_PER_DAY,
    IrradianceSample,
    RoadGraph,
    ValidationError,
    check_irradiance,
    check_timestamp,
)

GAUSSIAN_SLOW_D = 100_000.0
GAUSSIAN_FAST_D = 10.0


def weight_gaussian(dt_hours: int, d: float) -> float:
    """Age weight ``exp(-dt^2 / d)`` for a measurement ``dt_hours`` old.

    Equals 1 exactly at dt = 0 and is strictly decreasing in dt.
    """
    check_timestamp(dt_hours, "dt_hours")
    if not d > 0:
        raise ValidationError(f"decay denominator must be > 0, got {d!r}")
    return math.exp(-(dt_hours * dt_hours) / d)


def wrap_mod24(dt_hours: int) -> int:
    """Hour-of-day offset of ``dt_hours``, mapped into [-11, 12].

    The remainder mod 24 is shifted down by 24 when it exceeds 12, so an
    age of 13 h maps to -11 (eleven hours earlier in the day) and 36 h
    maps to +12.
    """
    check_timestamp(dt_hours, "dt_hours")
    m = dt_hours % HOURS_PER_DAY
    return m - HOURS_PER_DAY if m > 12 else m


def weight_diurnal(dt_hours: int) -> float:
    """Age weight ``exp(-m^2 - d)`` favoring same-time-of-day measurements.

    ``m`` is the wrapped hour offset and ``d`` the whole-day lag, so a
    measurement from exactly one day earlier gets weight ``exp(-1)``
    while one from 12 hours away gets the negligible ``exp(-144)``.
    """
    check_timestamp(dt_hours, "dt_hours")
    m = wrap_mod24(dt_hours)
    days = dt_hours // HOURS_PER_DAY
    return math.exp(-(m * m) - days)


def fuse(r_on: float, r_off: float, a: float) -> float:
    """Convex combination ``a * r_on + (1 - a) * r_off``.

    The result is clamped into [min(r_on, r_off), max(r_on, r_off)] to
    keep the convexity guarantee under floating-point rounding.
    """
    check_irradiance(r_on, "r_on")
    check_irradiance(r_off, "r_off")
    if not 0.0 <= a <= 1.0:
        raise ValidationError(f"fusion weight must be in [0, 1], got {a!r}")
    r = a * r_on + (1.0 - a) * r_off
    lo, hi = min(r_on, r_off), max(r_on, r_off)
    return min(max(r, lo), hi)


@dataclass(frozen=True)
class FusionModel:
    """Selects and parameterizes the age-weight model.

    ``kind`` is ``"gaussian"`` (with ``decay_denominator`` set) or
    ``"diurnal"``.
    """

    kind: str
    decay_denominator: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "gaussian":
            if self.decay_denominator is None or not self.decay_denominator > 0:
                raise ValidationError(
                    f"gaussian model needs a positive denominator, got {self.decay_denominator!r}"
                )
        elif self.kind == "diurnal":
            if self.decay_denominator is not None:
                raise ValidationError("diurnal model takes no denominator")
        else:
            raise ValidationError(f"unknown fusion model kind {self.kind!r}")

    @classmethod
    def gaussian(cls, d: float = GAUSSIAN_SLOW_D) -> "FusionModel":
        return cls(kind="gaussian", decay_denominator=float(d))

    @classmethod
    def diurnal(cls) -> "FusionModel":
        return cls(kind="diurnal")

    @classmethod
    def parse(cls, text: str) -> "FusionModel":
        """Parse a CLI/config model string: ``gaussian:<D>`` or ``diurnal``."""
        text = text.strip()
        if text == "diurnal":
            return cls.diurnal()
        if text.startswith("gaussian:"):
            raw = text.split(":", 1)[1]
            try:
                return cls.gaussian(float(raw))
            except ValueError:
                raise ValidationError(f"invalid gaussian denominator {raw!r}") from None
        raise ValidationError(
            f"unknown fusion model {text!r} (expected 'gaussian:<D>' or 'diurnal')"
        )

    @property
    def label(self) -> str:
        if self.kind == "gaussian":
            return f"gaussian_{self.decay_denominator:g}"
        return "diurnal"

    def weight(self, dt_hours: int) -> float:
        if self.kind == "gaussian":
            assert self.decay_denominator is not None
            return weight_gaussian(dt_hours, self.decay_denominator)
        return weight_diurnal(dt_hours)


@dataclass(frozen=True)
class FusedNode:
    """Fused irradiance for one node, with fusion provenance."""

    id: int
    r: float
    a_used: float
    sample_age_h: int | None


@dataclass(frozen=True)
class FusedGrid:
    """Per-node fused irradiance at a given current time.

    Nodes with no online sample carry the plain forecast value and
    ``a_used = 0``.
    """

    as_of: int
    entries: tuple[FusedNode, ...]

    def by_id(self) -> dict[int, FusedNode]:
        return {e.id: e for e in self.entries}

    def to_json(self) -> str:
        """Canonical JSON wire form, stable byte-for-byte for equal grids."""
        payload = {
            "as_of": self.as_of,
            "nodes": [
                {"id": e.id, "r": e.r, "a": e.a_used, "age_h": e.sample_age_h}
                for e in self.entries
            ],
        }
        return json.dumps(payload, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "FusedGrid":
        try:
            payload = json.loads(text)
            entries = tuple(
                FusedNode(
                    id=int(n["id"]),
                    r=float(n["r"]),
                    a_used=float(n["a"]),
                    sample_age_h=None if n["age_h"] is None else int(n["age_h"]),
                )
                for n in payload["nodes"]
            )
            return cls(as_of=int(payload["as_of"]), entries=entries)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed fused grid JSON: {exc}") from None


def fuse_grid(
    graph: RoadGraph,
    latest_samples: Mapping[int, IrradianceSample],
    t_curr: int,
    model: FusionModel,
) -> FusedGrid:
    """Fuse the latest per-node samples with each node's forecast profile.

    Samples must not be from the future; nodes without a sample fall back
    to the forecast profile at the hour-of-day of ``t_curr``.
    """
    check_timestamp(t_curr, "t_curr")
    node_ids = {n.id for n in graph.nodes}
    for node_id, sample in latest_samples.items():
        if node_id not in node_ids:
            raise ValidationError(f"sample keyed to unknown node id {node_id}")
        if sample.measured_at > t_curr:
            raise ValidationError(
                f"sample for node {node_id} is from the future "
                f"(measured at {sample.measured_at}, now {t_curr})"
            )

    entries = []
    for node in sorted(graph.nodes, key=lambda n: n.id):
        r_off = node.offline_at(t_curr)
        sample = latest_samples.get(node.id)
        if sample is None:
            entries.append(FusedNode(id=node.id, r=r_off, a_used=0.0, sample_age_h=None))
            continue
        age = t_curr - sample.measured_at
        a = model.weight(age)
        r = fuse(sample.irradiance, r_off, a)
        entries.append(FusedNode(id=node.id, r=r, a_used=a, sample_age_h=age))
    return FusedGrid(as_of=t_curr, entries=tuple(entries))
