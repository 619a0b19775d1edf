"""Lidar-derived range geometry and probable crash time.

Pure stateless functions: round-trip time of flight to diagonal range,
the Pythagorean reduction to the longitudinal gap, and the constant-speed
closing time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GeometryViolation, NonClosingSpeeds, NonPositiveTime

__all__ = [
    "SPEED_OF_LIGHT",
    "LidarReading",
    "hypotenuse_from_tof",
    "longitudinal_distance",
    "probable_crash_time",
]

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact SI value


@dataclass(frozen=True)
class LidarReading:
    """One pulse measurement: round-trip time and the lateral centerline offset."""

    ltime: float  # s
    lateral_offset: float  # m

    def __post_init__(self):
        if self.ltime <= 0.0:
            raise NonPositiveTime(f"round-trip time must be positive, got {self.ltime!r}")
        if self.lateral_offset < 0.0:
            raise GeometryViolation(f"lateral offset must be nonnegative, got {self.lateral_offset!r}")


def hypotenuse_from_tof(ltime: float) -> float:
    """Diagonal range from round-trip pulse time: ltime * c / 2."""
    if ltime <= 0.0:
        raise NonPositiveTime(f"round-trip time must be positive, got {ltime!r}")
    return ltime * SPEED_OF_LIGHT / 2.0


def longitudinal_distance(hyp: float, lateral_offset: float) -> float:
    """Along-road gap: the leg sqrt(hyp^2 - lateral_offset^2)."""
    if lateral_offset < 0.0 or hyp < lateral_offset:
        raise GeometryViolation(
            f"need hyp >= lateral offset >= 0, got hyp={hyp!r}, offset={lateral_offset!r}"
        )
    return math.sqrt(hyp * hyp - lateral_offset * lateral_offset)


def probable_crash_time(d: float, v1: float, v2: float) -> float:
    """Closing time d / (v2 - v1); v2 is the trailing (faster) car's speed.

    Raises NonClosingSpeeds when the relative speed is not positive, which
    signals the caller to restart its sensing loop.
    """
    closing = v2 - v1
    if closing <= 0.0:
        raise NonClosingSpeeds(f"relative speed {closing!r} is not positive")
    return d / closing
