"""Deterministic roaming simulator over a path curve.

An agent (a sphere) follows a PathCurve at per-keypoint speeds through a
scene of sphere obstacles and selectable targets.  The simulator produces
the roaming-task metrics: traversal time, collision count (one event per
obstacle entry; re-entry counts again) and UI-ray selection accuracy.  Ray
aim error is modeled as seeded directional noise so accuracy is
reproducible without human subjects.  Traversal stops at the end of the
path or when the energy budget (default 300 s) runs out.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .spline import PathCurve

DEFAULT_ENERGY_BUDGET = 300.0
DEFAULT_AGENT_RADIUS = 1.0

# Default ray-attempt trigger distance, as a multiple of each target's radius.
TRIGGER_RADIUS_FACTOR = 3.0


def _as_center(value, what: str) -> np.ndarray:
    center = np.asarray(value, dtype=float)
    if center.shape != (3,) or not np.all(np.isfinite(center)):
        raise ValueError(f"{what} center must be three finite numbers")
    return center


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_center(self.center, "sphere"))
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"sphere radius must be > 0, got {self.radius!r}")


@dataclass(frozen=True)
class Target:
    id: str
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_center(self.center, "target"))
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"target radius must be > 0, got {self.radius!r}")


@dataclass(frozen=True)
class SceneSpec:
    """Obstacle and target spheres plus agent radius and energy budget."""

    obstacles: tuple[Sphere, ...] = ()
    targets: tuple[Target, ...] = ()
    agent_radius: float = DEFAULT_AGENT_RADIUS
    energy_budget: float = DEFAULT_ENERGY_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "targets", tuple(self.targets))
        if not (math.isfinite(self.agent_radius) and self.agent_radius >= 0):
            raise ValueError(f"agent_radius must be >= 0, got {self.agent_radius!r}")
        if not (math.isfinite(self.energy_budget) and self.energy_budget > 0):
            raise ValueError(f"energy_budget must be > 0, got {self.energy_budget!r}")
        ids = [t.id for t in self.targets]
        if len(set(ids)) != len(ids):
            raise ValueError("target ids must be unique")

    @classmethod
    def from_json(cls, text: str) -> "SceneSpec":
        """Parse the scene JSON document.

        Schema: {"obstacles": [{"center": [x,y,z], "radius": r}, ...],
        "targets": [{"id": "...", "center": [...], "radius": r}, ...],
        "agent_radius": r, "energy_budget": s}.  agent_radius defaults to
        1.0 and energy_budget to 300 when absent.
        """
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"scene is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ValueError("scene JSON must be an object")
        obstacles = tuple(
            Sphere(center=o["center"], radius=o["radius"])
            for o in doc.get("obstacles", [])
        )
        targets = tuple(
            Target(id=str(t["id"]), center=t["center"], radius=t["radius"])
            for t in doc.get("targets", [])
        )
        return cls(
            obstacles=obstacles,
            targets=targets,
            agent_radius=float(doc.get("agent_radius", DEFAULT_AGENT_RADIUS)),
            energy_budget=float(doc.get("energy_budget", DEFAULT_ENERGY_BUDGET)),
        )

    def to_json(self) -> str:
        doc = {
            "obstacles": [
                {"center": list(o.center), "radius": o.radius} for o in self.obstacles
            ],
            "targets": [
                {"id": t.id, "center": list(t.center), "radius": t.radius}
                for t in self.targets
            ],
            "agent_radius": self.agent_radius,
            "energy_budget": self.energy_budget,
        }
        return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class SpeedProfile:
    """Per-keypoint speeds, interpolated linearly in global s between knots."""

    speeds: np.ndarray

    def __post_init__(self):
        speeds = np.asarray(self.speeds, dtype=float)
        if speeds.ndim != 1 or len(speeds) < 2:
            raise ValueError("need a speed per keypoint (at least 2)")
        if not np.all(np.isfinite(speeds)) or np.any(speeds <= 0):
            raise ValueError("speeds must be finite and > 0")
        object.__setattr__(self, "speeds", speeds)

    @classmethod
    def from_keypoints(cls, keypoints) -> "SpeedProfile":
        return cls(np.array([kp.speed for kp in keypoints], dtype=float))

    @classmethod
    def constant(cls, speed: float, n_keypoints: int) -> "SpeedProfile":
        return cls(np.full(n_keypoints, float(speed)))

    def speed_at(self, s: float) -> float:
        knots = np.linspace(0.0, 1.0, len(self.speeds))
        return float(np.interp(s, knots, self.speeds))


@dataclass(frozen=True)
class SimResult:
    """Metrics of one roaming run."""

    time_used: float
    collisions: int
    ray_attempts: int
    ray_hits: int
    accuracy: float
    completed: bool

    def to_dict(self) -> dict:
        return {
            "time_used": self.time_used,
            "collisions": self.collisions,
            "ray_attempts": self.ray_attempts,
            "ray_hits": self.ray_hits,
            "accuracy": self.accuracy,
            "completed": self.completed,
        }


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled states along a curve under a speed profile."""

    times: np.ndarray
    s_values: np.ndarray
    positions: np.ndarray
    view_directions: np.ndarray | None = None


# Arc-length table resolution used by the traversal stepper.
ARC_TABLE_SAMPLES = 2048


def _arc_length_table(curve: PathCurve) -> tuple[np.ndarray, np.ndarray]:
    """Dense (s, cumulative length) table for arc-length parameterization."""
    per_seg = np.arange(ARC_TABLE_SAMPLES) / ARC_TABLE_SAMPLES
    nseg = curve.n_segments
    grid = ((np.arange(nseg)[:, None] + per_seg[None, :]) / nseg).ravel()
    grid = np.append(grid, 1.0)
    points = curve.positions(grid)
    chords = np.linalg.norm(np.diff(points, axis=0), axis=1)
    return grid, np.concatenate([[0.0], np.cumsum(chords)])


def _step_states(curve: PathCurve, profile: SpeedProfile, dt: float, budget: float):
    """Advance along the curve in fixed time steps of dt.

    Each step moves speed*dt units of arc length, resolved through a dense
    precomputed arc-length table (speed is read at the step's start); the
    final step is shortened to land exactly on the path end or on the
    budget.  Returns (times, s_values, completed), starting at t=0.
    """
    if len(profile.speeds) != len(curve.keypoints):
        raise ValueError(
            f"speed profile has {len(profile.speeds)} entries for "
            f"{len(curve.keypoints)} keypoints"
        )
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be > 0, got {dt!r}")

    s_grid, lengths = _arc_length_table(curve)
    total = lengths[-1]
    times = [0.0]
    s_values = [0.0]
    t, s, ell = 0.0, 0.0, 0.0
    completed = total == 0.0
    while not completed and t < budget:
        step = min(dt, budget - t)
        d_ell = profile.speed_at(s) * step
        if ell + d_ell >= total:
            step *= (total - ell) / d_ell
            ell = total
            s = 1.0
            completed = True
        else:
            ell += d_ell
            s = float(np.interp(ell, lengths, s_grid))
        t += step
        times.append(t)
        s_values.append(s)
    return times, s_values, completed


def sample_trajectory(
    curve: PathCurve,
    profile: SpeedProfile,
    dt: float,
    energy_budget: float = math.inf,
    view_model: str | None = None,
) -> Trajectory:
    """Time-sample positions (and optionally view directions) along a curve."""
    times, s_values, _ = _step_states(curve, profile, dt, energy_budget)
    ss = np.array(s_values)
    positions = curve.positions(ss)
    view = None
    if view_model is not None:
        from .camera import view_direction

        view = np.stack([view_direction(curve, view_model, s) for s in ss])
    return Trajectory(np.array(times), ss, positions, view)


def _count_collisions(positions: np.ndarray, scene: SceneSpec) -> int:
    """Count obstacle entry events along sampled positions.

    Overlap is inclusive (touching counts); starting inside an obstacle
    counts as an entry.
    """
    collisions = 0
    for obstacle in scene.obstacles:
        dist = np.linalg.norm(positions - obstacle.center, axis=1)
        inside = dist <= obstacle.radius + scene.agent_radius
        collisions += int(inside[0]) + int(np.sum(inside[1:] & ~inside[:-1]))
    return collisions


def traverse(curve: PathCurve, profile: SpeedProfile, scene: SceneSpec, dt: float) -> SimResult:
    """Run one traversal and report time, collisions and completion.

    Ray metrics are zero here; combine with run_ray_task (or use simulate)
    for the full task metrics.
    """
    times, s_values, completed = _step_states(curve, profile, dt, scene.energy_budget)
    positions = curve.positions(np.array(s_values))
    return SimResult(
        time_used=times[-1],
        collisions=_count_collisions(positions, scene),
        ray_attempts=0,
        ray_hits=0,
        accuracy=0.0,
        completed=completed,
    )


def cast_ray(origin, direction, scene: SceneSpec) -> str | None:
    """Intersect a ray with the scene's targets; nearest hit wins.

    Boundary contact is inclusive: a ray exactly tangent to a sphere hits
    it.  Returns the hit target's id, or None on a miss.  Obstacles do not
    block rays.
    """
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        raise ValueError("ray direction must be nonzero")
    d = direction / norm

    best_t = math.inf
    best_id = None
    for target in scene.targets:
        oc = origin - target.center
        b = float(np.dot(d, oc))
        disc = b * b - float(np.dot(oc, oc)) + target.radius * target.radius
        if disc < 0.0:
            continue
        root = math.sqrt(disc)
        t_hit = -b - root
        if t_hit < 0.0:
            t_hit = -b + root
        if 0.0 <= t_hit < best_t:
            best_t = t_hit
            best_id = target.id
    return best_id


def perturb_direction(rng: np.random.Generator, direction, sigma: float) -> np.ndarray:
    """Apply seeded directional aim noise to a unit direction.

    The perturbed direction follows a von Mises-Fisher distribution around
    the ideal one with concentration 1/sigma^2, so sigma is the small-angle
    standard deviation per axis; sigma=0 returns the direction unchanged
    and large sigma approaches a uniform direction on the sphere.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma!r}")
    d = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(d)
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    d = d / norm
    if sigma * sigma == 0.0:  # includes subnormal sigma whose square underflows
        return d

    kappa = 1.0 / (sigma * sigma)
    u = rng.random()
    # Inverse-CDF sampling of the polar cosine w for the 3-D vMF distribution.
    w = 1.0 + math.log(u + (1.0 - u) * math.exp(-2.0 * kappa)) / kappa
    w = max(-1.0, min(1.0, w))
    phi = 2.0 * math.pi * rng.random()

    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(d)))] = 1.0
    e1 = np.cross(d, axis)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)
    sin_theta = math.sqrt(max(0.0, 1.0 - w * w))
    return sin_theta * (math.cos(phi) * e1 + math.sin(phi) * e2) + w * d


def run_ray_task(
    points,
    sigma: float,
    seed: int,
    scene: SceneSpec,
    trigger_distance: float | None = None,
) -> tuple[int, int]:
    """Emit selection rays along a trajectory and count attempts and hits.

    One attempt fires each time the agent enters the trigger zone of a
    target (distance below trigger_distance, default 3x that target's
    radius; being inside at the first point counts as an entry).  The
    attempt aims at the nearest target's center, perturbed by the seeded
    noise model, and hits when the cast ray strikes that intended target.
    Attempts are processed in time order, breaking ties by target order, so
    results are reproducible per seed.
    """
    if not scene.targets:
        raise ValueError("ray task needs at least one target in the scene")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma!r}")
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 3:
        raise ValueError(f"expected (N, 3) trajectory points, got shape {points.shape}")

    centers = np.stack([t.center for t in scene.targets])
    triggers = np.array([
        trigger_distance if trigger_distance is not None else TRIGGER_RADIUS_FACTOR * t.radius
        for t in scene.targets
    ])
    dist = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
    within = dist <= triggers[None, :]
    entries = np.vstack([within[:1], within[1:] & ~within[:-1]])

    rng = np.random.default_rng(seed)
    attempts = 0
    hits = 0
    for k in range(len(points)):
        for j in np.nonzero(entries[k])[0]:
            intended = scene.targets[int(np.argmin(dist[k]))]
            aim = intended.center - points[k]
            if np.linalg.norm(aim) == 0.0:
                raise ValueError("ray origin coincides with the target center")
            direction = perturb_direction(rng, aim, sigma)
            attempts += 1
            if cast_ray(points[k], direction, scene) == intended.id:
                hits += 1
    return attempts, hits


def simulate(
    curve: PathCurve,
    profile: SpeedProfile,
    scene: SceneSpec,
    dt: float,
    seed: int = 0,
    sigma: float = 0.0,
    trigger_distance: float | None = None,
) -> SimResult:
    """Full roaming run: traversal metrics plus the UI-ray task."""
    times, s_values, completed = _step_states(curve, profile, dt, scene.energy_budget)
    positions = curve.positions(np.array(s_values))
    collisions = _count_collisions(positions, scene)
    attempts, hits = 0, 0
    if scene.targets:
        attempts, hits = run_ray_task(positions, sigma, seed, scene, trigger_distance)
    return SimResult(
        time_used=times[-1],
        collisions=collisions,
        ray_attempts=attempts,
        ray_hits=hits,
        accuracy=hits / attempts if attempts else 0.0,
        completed=completed,
    )
