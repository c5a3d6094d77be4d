"""Piecewise path curves through waypoint lists.

Three curve kinds are supported and share one evaluation interface:

* ``polyline`` -- straight chords between consecutive keypoints,
* ``bezier`` -- a single degree-(N-1) curve with the N keypoints as its
  control polygon (interpolates only the first and last keypoint),
* ``catmull_rom`` -- an interpolating cubic whose segment from P0 to P1 is
  the Hermite cubic with end tangents m0 = t*(P1 - P_prev) and
  m1 = t*(P_next - P0), where t is the tension in [0, 1].

The global curve parameter s runs over [0, 1].  For polyline and
catmull_rom it is partitioned uniformly across the N-1 segments (segment i
covers [i/(N-1), (i+1)/(N-1)]); the bezier curve is one span.  Missing
neighbors for the boundary Catmull-Rom segments come from duplicating the
first and last keypoints as phantom endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .geo import PathTooShortError

KINDS = ("polyline", "bezier", "catmull_rom")
DEFAULT_TENSION = 0.5

# Relative tolerance of the adaptive arc-length quadrature.
ARC_LENGTH_REL_TOL = 1e-8


def check_tension(tension: float) -> float:
    tension = float(tension)
    if not math.isfinite(tension) or not 0.0 <= tension <= 1.0:
        raise ValueError(f"tension must be in [0, 1], got {tension!r}")
    return tension


def as_point_array(points) -> np.ndarray:
    """Coerce a sequence of Point3 / triples / an (N, 3) array to float64."""
    if isinstance(points, np.ndarray):
        arr = points.astype(float, copy=True)
    else:
        arr = np.array([tuple(p) for p in points], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an (N, 3) point array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must be finite")
    return arr


def with_phantom_endpoints(points) -> np.ndarray:
    """Duplicate the first and last keypoints as phantom neighbors.

    An N-point path becomes an (N+2)-point list whose windows
    (P[i-1], P[i], P[i+1], P[i+2]) supply the N-1 segment neighborhoods.
    """
    arr = as_point_array(points)
    if len(arr) < 2:
        raise PathTooShortError(f"a path needs at least 2 keypoints, got {len(arr)}")
    return np.vstack([arr[:1], arr, arr[-1:]])


def _hermite_weights(u):
    """Cubic Hermite basis (h00, h10, h01, h11) at u.

    h00 and h01 are computed from the shared polynomial q = 2u^3 - 3u^2 so
    that h00 + h01 == 1 holds exactly in floating point; at u = 0 and u = 1
    the weights are exactly (1,0,0,0) and (0,0,1,0).
    """
    u2 = u * u
    u3 = u2 * u
    q = 2.0 * u3 - 3.0 * u2
    return q + 1.0, u3 - 2.0 * u2 + u, -q, u3 - u2


def _hermite_weights_deriv(u):
    """Derivatives of the Hermite basis with respect to u."""
    u2 = u * u
    qd = 6.0 * u2 - 6.0 * u
    return qd, 3.0 * u2 - 4.0 * u + 1.0, -qd, 3.0 * u2 - 2.0 * u


def _check_unit_interval(u, what: str):
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)) or np.any(u < 0.0) or np.any(u > 1.0):
        raise ValueError(f"{what} must lie in [0, 1]")
    return u


@dataclass(frozen=True)
class CatmullRomSegment:
    """One cubic segment from p0 to p1 with neighbor points p_minus1, p2.

    Stores the end tangents m0, m1 and the cached coefficients of
    P(u) = a*u^3 + b*u^2 + c*u + d.  Evaluation goes through the Hermite
    basis, which reproduces p0, p1, m0, m1 exactly at the ends.
    """

    p_minus1: np.ndarray
    p0: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    tension: float
    m0: np.ndarray
    m1: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def point(self, u):
        """Position at local parameter u in [0, 1]; u may be an array."""
        u = _check_unit_interval(u, "segment parameter u")
        h00, h10, h01, h11 = _hermite_weights(u)
        return (
            np.multiply.outer(h00, self.p0)
            + np.multiply.outer(h10, self.m0)
            + np.multiply.outer(h01, self.p1)
            + np.multiply.outer(h11, self.m1)
        )

    def derivative(self, u):
        """dP/du at local parameter u in [0, 1]; u may be an array."""
        u = _check_unit_interval(u, "segment parameter u")
        h00, h10, h01, h11 = _hermite_weights_deriv(u)
        return (
            np.multiply.outer(h00, self.p0)
            + np.multiply.outer(h10, self.m0)
            + np.multiply.outer(h01, self.p1)
            + np.multiply.outer(h11, self.m1)
        )


def build_segment(p_minus1, p0, p1, p2, tension: float = DEFAULT_TENSION) -> CatmullRomSegment:
    """Build one Catmull-Rom segment from p0 to p1 with the given neighbors."""
    tension = check_tension(tension)
    pts = as_point_array([p_minus1, p0, p1, p2])
    pm1, q0, q1, q2 = pts
    m0 = tension * (q1 - pm1)
    m1 = tension * (q2 - q0)
    a = 2.0 * q0 - 2.0 * q1 + m0 + m1
    b = -3.0 * q0 + 3.0 * q1 - 2.0 * m0 - m1
    return CatmullRomSegment(
        p_minus1=pm1, p0=q0, p1=q1, p2=q2, tension=tension,
        m0=m0, m1=m1, a=a, b=b, c=m0.copy(), d=q0.copy(),
    )


class PathCurve:
    """A piecewise curve of one of the three kinds over fixed keypoints.

    Immutable after construction; evaluation methods are pure.
    """

    def __init__(self, kind: str, keypoints, tension: float = DEFAULT_TENSION):
        if kind not in KINDS:
            raise ValueError(f"unknown curve kind {kind!r}; expected one of {KINDS}")
        pts = as_point_array(keypoints)
        if len(pts) < 2:
            raise PathTooShortError(f"a path needs at least 2 keypoints, got {len(pts)}")
        self.kind = kind
        self.keypoints = pts
        self.keypoints.setflags(write=False)
        self.n_segments = len(pts) - 1
        self.tension = check_tension(tension) if kind == "catmull_rom" else None

        if kind == "catmull_rom":
            padded = with_phantom_endpoints(pts)
            self.segments = tuple(
                build_segment(padded[i], padded[i + 1], padded[i + 2], padded[i + 3], self.tension)
                for i in range(self.n_segments)
            )
            # Stacked per-segment Hermite data for vectorized evaluation;
            # rows are the very arrays the segments cache, so scalar and
            # vectorized paths agree bit for bit.
            self._p0 = np.stack([s.p0 for s in self.segments])
            self._m0 = np.stack([s.m0 for s in self.segments])
            self._p1 = np.stack([s.p1 for s in self.segments])
            self._m1 = np.stack([s.m1 for s in self.segments])
        elif kind == "polyline":
            self.segments = ()
            self._starts = pts[:-1]
            self._diffs = pts[1:] - pts[:-1]
        else:  # bezier
            self.segments = ()
            self._control = pts

    @classmethod
    def polyline(cls, keypoints) -> "PathCurve":
        return cls("polyline", keypoints)

    @classmethod
    def bezier(cls, keypoints) -> "PathCurve":
        return cls("bezier", keypoints)

    @classmethod
    def catmull_rom(cls, keypoints, tension: float = DEFAULT_TENSION) -> "PathCurve":
        return cls("catmull_rom", keypoints, tension)

    def knot_parameters(self) -> np.ndarray:
        """Global s values of the keypoints (for bezier, the target-switch grid)."""
        return np.linspace(0.0, 1.0, len(self.keypoints))

    def _locate(self, ss: np.ndarray):
        """Map global parameters to (segment index, local u)."""
        x = ss * self.n_segments
        idx = np.minimum(np.floor(x).astype(int), self.n_segments - 1)
        return idx, x - idx

    def positions(self, ss) -> np.ndarray:
        """Evaluate the curve at an array of global parameters in [0, 1]."""
        ss = _check_unit_interval(np.atleast_1d(ss), "curve parameter s")
        if self.kind == "bezier":
            pos, _ = _de_casteljau(self._control, ss)
            return pos
        idx, u = self._locate(ss)
        if self.kind == "polyline":
            return self._starts[idx] + u[:, None] * self._diffs[idx]
        h00, h10, h01, h11 = _hermite_weights(u)
        return (
            h00[:, None] * self._p0[idx]
            + h10[:, None] * self._m0[idx]
            + h01[:, None] * self._p1[idx]
            + h11[:, None] * self._m1[idx]
        )

    def position(self, s: float) -> np.ndarray:
        """Evaluate the curve at one global parameter in [0, 1]."""
        return self.positions(float(s))[0]

    def tangents(self, ss) -> np.ndarray:
        """Unnormalized derivative dP/ds at an array of global parameters.

        At polyline knots the right-hand segment direction wins (the final
        knot s=1 belongs to the last segment).
        """
        ss = _check_unit_interval(np.atleast_1d(ss), "curve parameter s")
        if self.kind == "bezier":
            _, deriv = _de_casteljau(self._control, ss)
            return deriv
        idx, u = self._locate(ss)
        if self.kind == "polyline":
            return self.n_segments * self._diffs[idx]
        h00, h10, h01, h11 = _hermite_weights_deriv(u)
        return self.n_segments * (
            h00[:, None] * self._p0[idx]
            + h10[:, None] * self._m0[idx]
            + h01[:, None] * self._p1[idx]
            + h11[:, None] * self._m1[idx]
        )

    def tangent(self, s: float) -> np.ndarray:
        """Unnormalized derivative dP/ds at one global parameter."""
        return self.tangents(float(s))[0]

    def parametric_speed(self, s: float) -> float:
        """|dP/ds| at one global parameter."""
        return float(np.linalg.norm(self.tangent(s)))

    def one_sided_tangents(self, knot: int) -> tuple[np.ndarray, np.ndarray]:
        """Left/right dP/ds limits at interior knot index (1..N-2).

        For bezier the curve is smooth, so both sides are the same vector.
        """
        if not 1 <= knot <= len(self.keypoints) - 2:
            raise ValueError(f"interior knot index must be in [1, {len(self.keypoints) - 2}]")
        if self.kind == "polyline":
            return (self.n_segments * self._diffs[knot - 1],
                    self.n_segments * self._diffs[knot])
        if self.kind == "catmull_rom":
            return (self.n_segments * self.segments[knot - 1].m1,
                    self.n_segments * self.segments[knot].m0)
        t = self.tangent(knot / self.n_segments)
        return t, t

    def arc_length(self, s0: float = 0.0, s1: float = 1.0) -> float:
        """Arc length between two global parameters.

        Polyline lengths are exact chord sums; bezier and catmull_rom use
        adaptive quadrature of |dP/ds| with relative tolerance
        ARC_LENGTH_REL_TOL, split at the segment knots.
        """
        s0, s1 = float(s0), float(s1)
        if not (math.isfinite(s0) and math.isfinite(s1)) or not 0.0 <= s0 <= s1 <= 1.0:
            raise ValueError(f"need 0 <= s0 <= s1 <= 1, got ({s0!r}, {s1!r})")
        if s0 == s1:
            return 0.0

        if self.kind == "polyline":
            chord = np.linalg.norm(self._diffs, axis=1)
            x0, x1 = s0 * self.n_segments, s1 * self.n_segments
            i0 = min(int(math.floor(x0)), self.n_segments - 1)
            i1 = min(int(math.floor(x1)), self.n_segments - 1)
            if i0 == i1:
                return float(chord[i0] * (x1 - x0))
            total = chord[i0] * (i0 + 1 - x0) + chord[i1] * (x1 - i1)
            total += chord[i0 + 1:i1].sum()
            return float(total)

        if self.kind == "catmull_rom":
            interior = [k / self.n_segments for k in range(1, self.n_segments)]
            cuts = [s0] + [c for c in interior if s0 < c < s1] + [s1]
        else:
            cuts = [s0, s1]

        speed = lambda s: float(np.linalg.norm(self.tangent(s)))
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            piece, _ = quad(speed, a, b, epsabs=1e-12, epsrel=ARC_LENGTH_REL_TOL, limit=200)
            total += piece
        return total

    def __repr__(self):
        extra = f", tension={self.tension}" if self.kind == "catmull_rom" else ""
        return f"PathCurve({self.kind!r}, {len(self.keypoints)} keypoints{extra})"


def _de_casteljau(control: np.ndarray, u: np.ndarray):
    """Evaluate a Bezier curve and its derivative by de Casteljau recursion.

    Returns (positions, derivatives), each (len(u), 3), for control points
    of shape (n+1, 3) evaluated at parameters u in [0, 1].
    """
    n = len(control) - 1
    b = np.broadcast_to(control, (len(u), n + 1, 3)).copy()
    w = u[:, None, None]
    for step in range(n - 1):
        m = n - step
        b[:, :m, :] = (1.0 - w) * b[:, :m, :] + w * b[:, 1:m + 1, :]
    if n >= 1:
        deriv = n * (b[:, 1, :] - b[:, 0, :])
        pos = (1.0 - u[:, None]) * b[:, 0, :] + u[:, None] * b[:, 1, :]
    else:
        deriv = np.zeros((len(u), 3))
        pos = b[:, 0, :].copy()
    return pos, deriv
