"""Parking spot selection trading sun exposure against walking distance.

A spot with fused irradiance r at walking distance d meters from the
target scores ``f = r / (d^b + k)``. The defaults b = 1 and k = 200 m
keep the score from collapsing to a pure distance quotient: k anchors the
denominator at the few-hundred-meter walks people accept, so a sunny spot
a block further can beat a shady one next door.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO

from .model import GeoPoint, ValidationError, check_irradiance, haversine_m


@dataclass(frozen=True)
class ParkingSpot:
    id: str
    position: GeoPoint
    irradiance: float

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("parking spot id must be non-empty")
        check_irradiance(self.irradiance)


@dataclass(frozen=True)
class ParkingParams:
    """Score parameters: distance exponent ``b`` and length offset ``k`` (m)."""

    b: float = 1.0
    k: float = 200.0

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise ValidationError(f"distance exponent b must be > 0, got {self.b!r}")
        if not self.k >= 0:
            raise ValidationError(f"length offset k must be >= 0, got {self.k!r}")


def walking_distance(spot: GeoPoint, target: GeoPoint) -> float:
    """Great-circle walking distance in meters (street network ignored)."""
    return haversine_m(spot, target)


def parking_score(r: float, d: float, p: ParkingParams = ParkingParams()) -> float:
    """Spot utility ``r / (d^b + k)``; higher is better."""
    check_irradiance(r)
    if d < 0:
        raise ValidationError(f"distance must be >= 0, got {d!r}")
    if p.k == 0 and d == 0:
        raise ValidationError("score undefined for d = 0 with k = 0")
    return r / (d**p.b + p.k)


@dataclass(frozen=True)
class RankedSpot:
    id: str
    d_m: float
    score: float
    rank: int


def select_parking(
    spots: list[ParkingSpot],
    target: GeoPoint,
    p: ParkingParams = ParkingParams(),
) -> tuple[str, list[RankedSpot]]:
    """Rank spots by score (ties to the smallest id) and return the winner.

    Returns ``(best_spot_id, full_ranking)``; the ranking is ordered best
    first with 1-based ranks.
    """
    if not spots:
        raise ValidationError("no parking spots to select from")
    scored = [
        (spot.id, walking_distance(spot.position, target), spot) for spot in spots
    ]
    ranked = sorted(
        ((sid, d, parking_score(spot.irradiance, d, p)) for sid, d, spot in scored),
        key=lambda item: (-item[2], item[0]),
    )
    ranking = [
        RankedSpot(id=sid, d_m=d, score=score, rank=i)
        for i, (sid, d, score) in enumerate(ranked, start=1)
    ]
    return ranking[0].id, ranking


def load_spots(stream: IO[bytes] | IO[str]) -> list[ParkingSpot]:
    """Read spots from CSV with header ``id,lat,lon,r``."""
    data = stream.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.reader(io.StringIO(data))
    header = next(reader, None)
    if header != ["id", "lat", "lon", "r"]:
        raise ValidationError("spots CSV must have header 'id,lat,lon,r'")
    spots = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise ValidationError(f"spots line {lineno}: expected 4 fields, got {len(row)}")
        try:
            spots.append(
                ParkingSpot(
                    id=row[0],
                    position=GeoPoint(float(row[1]), float(row[2])),
                    irradiance=float(row[3]),
                )
            )
        except (ValueError, ValidationError) as exc:
            raise ValidationError(f"spots line {lineno}: {exc}") from None
    return spots


def ranking_to_csv(ranking: list[RankedSpot]) -> str:
    """Serialize a ranking to CSV with header ``id,d_m,score,rank``."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", "d_m", "score", "rank"])
    for item in ranking:
        writer.writerow([item.id, repr(item.d_m), repr(item.score), item.rank])
    return out.getvalue()
