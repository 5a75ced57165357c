"""Domain types for world state plus the line-delimited dataset format.

A :class:`Scene` is one prediction example: 2.5 s of observed history
sampled at 2 Hz (six frames including the prediction instant), a static
road description, the id of the target entity, and the ground-truth
future stored as five xy-displacements (meters, 1 s apart) relative to
the target's position in the last frame.

Coordinates live in a local metric frame per scene: x east, y north,
meters.  All types are frozen; a loaded dataset is safe to share across
threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

NUM_FRAMES = 6
NUM_FUTURE = 5
FRAME_SPACING_S = 0.5
FUTURE_SPACING_S = 1.0
TIMESTAMP_TOL_S = 1e-9

ENTITY_CLASSES = ("vehicle", "pedestrian", "cyclist")
ROAD_KINDS = (
    "lane_line",
    "drivable_polygon",
    "crosswalk",
    "stop_line",
    "junction_connection",
)
# Kinds drawn as filled polygons; the rest are polylines.
POLYGON_KINDS = frozenset({"drivable_polygon", "crosswalk", "junction_connection"})
PERMISSIBILITIES = ("permitted", "yield", "prohibited")

SCHEMA_VERSION = 1


class SceneValidationError(ValueError):
    """An invariant of a domain type was violated; the message names the field."""


class DatasetError(ValueError):
    """Malformed dataset file; the message carries the 1-based line number."""


def _require_finite(name: str, values: Iterable[float]) -> None:
    for v in values:
        if not math.isfinite(v):
            raise SceneValidationError(f"{name} must be finite, got {v!r}")


def _as_pair(name: str, value) -> tuple[float, float]:
    pair = tuple(float(v) for v in value)
    if len(pair) != 2:
        raise SceneValidationError(f"{name} must have 2 components, got {len(pair)}")
    _require_finite(name, pair)
    return pair  # type: ignore[return-value]


@dataclass(frozen=True)
class EntityState:
    """Perception output for a single tracked entity at one timestep.

    cov_norms carries the Frobenius norms of the position, velocity and
    acceleration covariance estimates (in that order); zeros mean exact
    perception.
    """

    entity_id: int
    entity_class: str
    position: tuple[float, float]
    velocity: tuple[float, float]
    acceleration: tuple[float, float]
    heading: float
    extent: tuple[float, float]
    cov_norms: tuple[float, float, float]

    def __post_init__(self):
        if self.entity_class not in ENTITY_CLASSES:
            raise SceneValidationError(
                f"entity_class must be one of {ENTITY_CLASSES}, got {self.entity_class!r}"
            )
        _as_pair("position", self.position)
        _as_pair("velocity", self.velocity)
        _as_pair("acceleration", self.acceleration)
        _require_finite("heading", (self.heading,))
        if not (-math.pi <= self.heading < math.pi):
            raise SceneValidationError(f"heading must lie in [-pi, pi), got {self.heading}")
        if len(self.extent) != 2 or not all(e > 0 for e in self.extent):
            raise SceneValidationError(f"extent components must be > 0, got {self.extent}")
        _require_finite("extent", self.extent)
        if len(self.cov_norms) != 3 or not all(c >= 0 for c in self.cov_norms):
            raise SceneValidationError(f"cov_norms must be 3 values >= 0, got {self.cov_norms}")
        _require_finite("cov_norms", self.cov_norms)


def _segments_properly_intersect(p1, p2, q1, q2) -> bool:
    """True when the open segments cross at a single interior point."""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4)


@dataclass(frozen=True)
class RoadElement:
    """One geometric primitive of the semantic map.

    lane_line and stop_line are polylines; the remaining kinds are simple
    (non-self-intersecting) polygons.  junction_connection elements carry
    the connection_id that traffic lights reference.
    """

    kind: str
    points: tuple[tuple[float, float], ...]
    connection_id: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ROAD_KINDS:
            raise SceneValidationError(f"kind must be one of {ROAD_KINDS}, got {self.kind!r}")
        if len(self.points) < 2:
            raise SceneValidationError(f"geometry needs >= 2 points, got {len(self.points)}")
        for p in self.points:
            _as_pair("points", p)
        if self.connection_id is not None and self.kind != "junction_connection":
            raise SceneValidationError("connection_id is only valid on junction_connection")
        if self.is_polygon:
            pts = self.points
            n = len(pts)
            for i in range(n):
                a1, a2 = pts[i], pts[(i + 1) % n]
                for j in range(i + 1, n):
                    if j == i or (j + 1) % n == i or (i + 1) % n == j:
                        continue
                    b1, b2 = pts[j], pts[(j + 1) % n]
                    if _segments_properly_intersect(a1, a2, b1, b2):
                        raise SceneValidationError(
                            f"{self.kind} polygon is self-intersecting at edges {i} and {j}"
                        )

    @property
    def is_polygon(self) -> bool:
        return self.kind in POLYGON_KINDS


@dataclass(frozen=True)
class TrafficLightState:
    connection_id: int
    permissibility: str

    def __post_init__(self):
        if self.permissibility not in PERMISSIBILITIES:
            raise SceneValidationError(
                f"permissibility must be one of {PERMISSIBILITIES}, got {self.permissibility!r}"
            )


@dataclass(frozen=True)
class Frame:
    """World snapshot at one timestep: entities plus traffic-light states."""

    timestamp: float
    entities: tuple[EntityState, ...]
    lights: tuple[TrafficLightState, ...] = ()

    def entity(self, entity_id: int) -> Optional[EntityState]:
        for e in self.entities:
            if e.entity_id == entity_id:
                return e
        return None


@dataclass(frozen=True)
class Scene:
    """One prediction example; validated on construction."""

    frames: tuple[Frame, ...]
    road: tuple[RoadElement, ...]
    target_id: int
    future: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.frames) != NUM_FRAMES:
            raise SceneValidationError(f"expected {NUM_FRAMES} frames, got {len(self.frames)}")
        for i in range(1, NUM_FRAMES):
            dt = self.frames[i].timestamp - self.frames[i - 1].timestamp
            if abs(dt - FRAME_SPACING_S) > TIMESTAMP_TOL_S:
                raise SceneValidationError(
                    f"frame spacing must be {FRAME_SPACING_S} s, got {dt} at frame {i}"
                )
        for i, frame in enumerate(self.frames):
            if frame.entity(self.target_id) is None:
                raise SceneValidationError(
                    f"target_id {self.target_id} missing from frame {i}"
                )
        if len(self.future) != NUM_FUTURE:
            raise SceneValidationError(f"future must have {NUM_FUTURE} entries, got {len(self.future)}")
        for p in self.future:
            _as_pair("future", p)
        connection_ids = {
            e.connection_id for e in self.road if e.kind == "junction_connection"
        }
        for frame in self.frames:
            for light in frame.lights:
                if light.connection_id not in connection_ids:
                    raise SceneValidationError(
                        f"traffic light references unknown connection_id {light.connection_id}"
                    )

    def target_state(self, frame_index: int = -1) -> EntityState:
        """Target entity state; defaults to the prediction instant."""
        state = self.frames[frame_index].entity(self.target_id)
        assert state is not None  # guaranteed by the constructor
        return state


# --- serialization ----------------------------------------------------------
#
# One JSON object per line, UTF-8, schema pinned by a top-level "v" field.
# Floats are written with repr-precision, so save -> load is lossless.
# The full schema is documented in docs/format.md.


def _entity_to_json(e: EntityState) -> dict:
    return {
        "id": e.entity_id,
        "class": e.entity_class,
        "position": list(e.position),
        "velocity": list(e.velocity),
        "acceleration": list(e.acceleration),
        "heading": e.heading,
        "extent": list(e.extent),
        "cov_norms": list(e.cov_norms),
    }


def _entity_from_json(obj: dict) -> EntityState:
    return EntityState(
        entity_id=int(obj["id"]),
        entity_class=obj["class"],
        position=tuple(float(v) for v in obj["position"]),
        velocity=tuple(float(v) for v in obj["velocity"]),
        acceleration=tuple(float(v) for v in obj["acceleration"]),
        heading=float(obj["heading"]),
        extent=tuple(float(v) for v in obj["extent"]),
        cov_norms=tuple(float(v) for v in obj["cov_norms"]),
    )


def scene_to_json(scene: Scene) -> dict:
    return {
        "v": SCHEMA_VERSION,
        "target_id": scene.target_id,
        "frames": [
            {
                "t": f.timestamp,
                "entities": [_entity_to_json(e) for e in f.entities],
                "lights": [
                    {"connection_id": l.connection_id, "state": l.permissibility}
                    for l in f.lights
                ],
            }
            for f in scene.frames
        ],
        "road": [
            {
                "kind": r.kind,
                "points": [list(p) for p in r.points],
                **({"connection_id": r.connection_id} if r.connection_id is not None else {}),
            }
            for r in scene.road
        ],
        "future": [list(p) for p in scene.future],
    }


def scene_from_json(obj: dict) -> Scene:
    version = obj.get("v")
    if version != SCHEMA_VERSION:
        raise DatasetError(f"unsupported schema version {version!r}")
    frames = tuple(
        Frame(
            timestamp=float(f["t"]),
            entities=tuple(_entity_from_json(e) for e in f["entities"]),
            lights=tuple(
                TrafficLightState(int(l["connection_id"]), l["state"])
                for l in f.get("lights", [])
            ),
        )
        for f in obj["frames"]
    )
    road = tuple(
        RoadElement(
            kind=r["kind"],
            points=tuple(tuple(float(v) for v in p) for p in r["points"]),
            connection_id=(int(r["connection_id"]) if "connection_id" in r else None),
        )
        for r in obj["road"]
    )
    future = tuple(tuple(float(v) for v in p) for p in obj["future"])
    return Scene(frames=frames, road=road, target_id=int(obj["target_id"]), future=future)


def save_dataset(scenes: Sequence[Scene], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for scene in scenes:
            fh.write(json.dumps(scene_to_json(scene), separators=(",", ":")))
            fh.write("\n")


def load_dataset(path) -> list[Scene]:
    scenes = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"line {lineno}: invalid JSON ({exc})") from exc
            try:
                scenes.append(scene_from_json(obj))
            except (SceneValidationError, DatasetError, KeyError, TypeError) as exc:
                raise DatasetError(f"line {lineno}: {exc}") from exc
    return scenes
