"""Keypoint records and their mapping into the 3-D working space.

A roaming path is entered as an ordered list of keypoints, each carrying a
longitude, latitude, height and traversal speed.  All curve math downstream
operates on plain Cartesian working-space coordinates; the projection here is
a componentwise map (identity or per-axis scaling), not real geodesy.
Longitudes outside [-180, 180] are accepted verbatim and never wrapped.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass


class PathTooShortError(ValueError):
    """Raised when a keypoint path has fewer than two points."""


class KeypointParseError(ValueError):
    """Raised when keypoint file content does not match the expected schema.

    ``row`` is the 1-based data row index (header excluded), or 0 for
    header-level problems.
    """

    def __init__(self, message: str, row: int = 0):
        super().__init__(message)
        self.row = row


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class KeyPoint:
    """One path waypoint: position in longitude/latitude/height plus speed.

    Height must be nonnegative and speed strictly positive; longitude and
    latitude are any finite reals (no range clamp).
    """

    longitude: float
    latitude: float
    height: float
    speed: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "longitude", _require_finite("longitude", self.longitude))
        object.__setattr__(self, "latitude", _require_finite("latitude", self.latitude))
        object.__setattr__(self, "height", _require_finite("height", self.height))
        object.__setattr__(self, "speed", _require_finite("speed", self.speed))
        if self.height < 0:
            raise ValueError(f"height must be >= 0, got {self.height}")
        if self.speed <= 0:
            raise ValueError(f"speed must be > 0, got {self.speed}")


@dataclass(frozen=True)
class Point3:
    """A working-space point with finite x, y, z components."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "x", _require_finite("x", self.x))
        object.__setattr__(self, "y", _require_finite("y", self.y))
        object.__setattr__(self, "z", _require_finite("z", self.z))

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Projection:
    """Componentwise map from keypoint coordinates into working space.

    ``raw`` is the identity on (longitude, latitude, height); ``scaled``
    multiplies each component by a strictly positive scale factor.
    """

    mode: str = "raw"
    scale: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if self.mode not in ("raw", "scaled"):
            raise ValueError(f"unknown projection mode {self.mode!r}")
        scale = tuple(float(v) for v in self.scale)
        if len(scale) != 3:
            raise ValueError("scale must have exactly three factors")
        for v in scale:
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"scale factors must be finite and > 0, got {v!r}")
        object.__setattr__(self, "scale", scale)

    @classmethod
    def raw(cls) -> "Projection":
        return cls(mode="raw")

    @classmethod
    def scaled(cls, sx: float, sy: float, sz: float) -> "Projection":
        return cls(mode="scaled", scale=(sx, sy, sz))


def project(kp: KeyPoint, proj: Projection = Projection.raw()) -> Point3:
    """Map a keypoint into working space.

    Raw mode returns (longitude, latitude, height) unchanged; scaled mode
    multiplies componentwise by the projection's scale factors.
    """
    if proj.mode == "raw":
        return Point3(kp.longitude, kp.latitude, kp.height)
    sx, sy, sz = proj.scale
    return Point3(kp.longitude * sx, kp.latitude * sy, kp.height * sz)


_HEADER_BASE = ["longitude", "latitude", "height"]
_HEADER_FULL = _HEADER_BASE + ["speed"]


def load_keypoints(source: str) -> list[KeyPoint]:
    """Parse keypoint CSV content into an ordered list of KeyPoint.

    Schema: header ``longitude,latitude,height[,speed]``, one keypoint per
    row, path order = row order.  When the speed column is absent every
    keypoint gets the default speed 1.0.  Data rows are numbered from 1 in
    error messages.

    Raises PathTooShortError for fewer than two data rows and
    KeypointParseError for malformed headers or rows.
    """
    rows = [r for r in csv.reader(io.StringIO(source)) if r]
    if not rows:
        raise PathTooShortError("keypoint file is empty; a path needs at least 2 keypoints")

    header = [c.strip().lower() for c in rows[0]]
    if header == _HEADER_BASE:
        has_speed = False
    elif header == _HEADER_FULL:
        has_speed = True
    else:
        raise KeypointParseError(
            "expected header 'longitude,latitude,height[,speed]', got "
            + ",".join(header)
        )

    points: list[KeyPoint] = []
    for i, row in enumerate(rows[1:], start=1):
        expected = 4 if has_speed else 3
        if len(row) != expected:
            raise KeypointParseError(
                f"row {i}: expected {expected} columns, got {len(row)}", row=i
            )
        values = []
        for name, cell in zip(_HEADER_FULL, row):
            try:
                values.append(float(cell))
            except ValueError:
                raise KeypointParseError(
                    f"row {i}: column '{name}' is not a number: {cell!r}", row=i
                ) from None
        try:
            if has_speed:
                points.append(KeyPoint(values[0], values[1], values[2], values[3]))
            else:
                points.append(KeyPoint(values[0], values[1], values[2]))
        except ValueError as exc:
            raise KeypointParseError(f"row {i}: {exc}", row=i) from None

    if len(points) < 2:
        raise PathTooShortError(
            f"a path needs at least 2 keypoints, got {len(points)}"
        )
    return points


def serialize_keypoints(keypoints: list[KeyPoint]) -> str:
    """Write keypoints back to CSV (always including the speed column).

    Floats are written with repr so that load_keypoints round-trips exactly.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_HEADER_FULL)
    for kp in keypoints:
        writer.writerow([repr(kp.longitude), repr(kp.latitude), repr(kp.height), repr(kp.speed)])
    return out.getvalue()
