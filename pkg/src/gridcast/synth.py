"""Deterministic synthetic scenario generator.

Produces fully scripted :class:`~gridcast.scene.Scene` examples from four
templates:

- ``straight_cruise``: constant-heading travel on a straight road.
- ``four_way_junction_turn``: approach a 4-way junction and take a
  constant-speed circular arc left or right; traffic lights mark the
  permitted connection(s).
- ``lead_follow``: close in on a slower lead vehicle and brake to match
  its speed.
- ``red_light_stop``: brake to a stop line when the light is prohibited,
  cruise through when permitted.

Randomness comes from numpy's Philox counter-based generator, keyed by
``SeedSequence(seed, spawn_key=(stream, ...))`` so each purpose has its
own substream: adding templates or entities never perturbs existing
draws.  Emitted world coordinates and velocities are quantized to
1/1024 m so that translating a whole scene is exact in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .scene import (
    EntityState,
    Frame,
    RoadElement,
    Scene,
    TrafficLightState,
    NUM_FRAMES,
    NUM_FUTURE,
    FRAME_SPACING_S,
)

TEMPLATE_KINDS = (
    "straight_cruise",
    "four_way_junction_turn",
    "lead_follow",
    "red_light_stop",
)

MAX_SPEED = 20.0
MAX_ACCEL = 5.0

VEHICLE_EXTENT = (4.5, 2.0)
PEDESTRIAN_EXTENT = (0.6, 0.6)
CYCLIST_EXTENT = (1.8, 0.6)

LANE_HALF_OFFSET = 1.75   # lane center distance from road axis
ROAD_HALF_WIDTH = 3.5
ARM_LENGTH = 60.0

_QUANTUM = 1.0 / 1024.0   # dyadic grid for emitted coordinates

# substream ids
_S_PARAMS = 0
_S_OTHERS = 1
_S_COVS = 2
_S_SCENE_SEEDS = 3


class TemplateError(ValueError):
    """Template parameters outside their documented ranges."""


@dataclass(frozen=True)
class ScenarioTemplate:
    """A template kind, its scalar parameters, and a 64-bit scene seed.

    Parameters not supplied fall back to per-kind defaults; unknown names
    are rejected.  See ``_PARAM_DEFAULTS`` for the accepted scalars.
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in TEMPLATE_KINDS:
            raise TemplateError(f"unknown template kind {self.kind!r}")
        unknown = set(self.params) - set(_PARAM_DEFAULTS[self.kind])
        if unknown:
            raise TemplateError(f"unknown params for {self.kind}: {sorted(unknown)}")

    def value(self, name: str) -> float:
        return float(self.params.get(name, _PARAM_DEFAULTS[self.kind][name]))


_PARAM_DEFAULTS: dict[str, dict[str, float]] = {
    "straight_cruise": {"speed": 3.5, "heading": 0.0, "accel": 0.0},
    "four_way_junction_turn": {
        "speed": 3.5,
        "turn_direction": 1.0,   # +1 left, -1 right
        "radius": 7.0,
        "arc_delay": 1.0,        # seconds from prediction instant to arc entry
        "ambiguous_phase": 0.0,  # 1.0: lights permit both turn directions
        "lead_vehicle": 0.0,     # 1.0: lead executes the same maneuver ahead
        "center_x": 0.0,
        "center_y": 0.0,
    },
    "lead_follow": {
        "speed": 4.0,
        "lead_speed": 2.0,
        "gap": 18.0,             # bumper gap at prediction time, meters
        "brake_delay": 0.8,      # seconds until the follower starts braking
        "brake_duration": 1.5,
    },
    "red_light_stop": {
        "speed": 4.0,
        "stop_distance": 18.0,   # stop line distance at prediction time
        "phase": 1.0,            # 1.0 prohibited (stop), 0.0 permitted (cruise)
        "center_x": 0.0,
        "center_y": 0.0,
    },
}


def substream(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for one purpose; disjoint for distinct keys."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


def _q(x: float) -> float:
    return round(x * 1024.0) / 1024.0


def _qpair(p) -> tuple[float, float]:
    return (_q(p[0]), _q(p[1]))


def _wrap_heading(h: float) -> float:
    h = math.remainder(h, 2.0 * math.pi)
    if h >= math.pi:
        h -= 2.0 * math.pi
    if h < -math.pi:
        h += 2.0 * math.pi
    return h


# --- path geometry ----------------------------------------------------------


class _Path:
    """Arc-length parameterized curve built from straight and arc pieces.

    Querying beyond either end extends straight along the end tangent, so
    scripts never run off the domain.
    """

    def __init__(self):
        self._segs: list[tuple] = []   # ("straight", origin, dir, length) | ("arc", center, r, th0, sign, length)
        self._cumlen: list[float] = [0.0]

    @property
    def length(self) -> float:
        return self._cumlen[-1]

    def add_straight(self, origin, direction, length: float) -> "_Path":
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        self._segs.append(("straight", np.asarray(origin, dtype=float), d, float(length)))
        self._cumlen.append(self._cumlen[-1] + float(length))
        return self

    def add_arc(self, center, radius: float, theta0: float, sweep: float) -> "_Path":
        # sweep > 0 is counterclockwise (left turn).
        length = abs(sweep) * radius
        self._segs.append(
            ("arc", np.asarray(center, dtype=float), float(radius), float(theta0),
             1.0 if sweep >= 0 else -1.0, length)
        )
        self._cumlen.append(self._cumlen[-1] + length)
        return self

    def at(self, s: float) -> tuple[np.ndarray, np.ndarray, float]:
        """Position, unit tangent, and signed curvature (+ is leftward)."""
        if not self._segs:
            raise ValueError("empty path")
        if s < 0.0:
            pos, tan, _ = self.at(0.0)
            return pos + s * tan, tan, 0.0
        if s > self.length:
            pos, tan, _ = self.at(self.length)
            return pos + (s - self.length) * tan, tan, 0.0
        idx = 0
        for i in range(len(self._segs)):
            if s <= self._cumlen[i + 1] or i == len(self._segs) - 1:
                idx = i
                break
        local = s - self._cumlen[idx]
        seg = self._segs[idx]
        if seg[0] == "straight":
            _, origin, d, _length = seg
            return origin + local * d, d, 0.0
        _, center, r, th0, sign, _length = seg
        th = th0 + sign * local / r
        pos = center + r * np.array([math.cos(th), math.sin(th)])
        tan = sign * np.array([-math.sin(th), math.cos(th)])
        return pos, tan, sign / r


# --- longitudinal motion ----------------------------------------------------


class _Motion:
    """Piecewise constant-acceleration speed profile along a path.

    Built from (time, acceleration) change points; speed clamps at zero
    instead of reversing.  Arc length is measured so that s(0) = 0 at the
    prediction instant.
    """

    def __init__(self, t0: float, v0: float, changes: list[tuple[float, float]]):
        pieces = []   # (t_start, v_start, accel)
        t, v, a = t0, v0, 0.0
        events = sorted(changes)
        for et, ea in events:
            if et < t0:
                raise ValueError("acceleration change before profile start")
            pieces.append((t, v, a))
            v = self._speed_in(pieces[-1], et)
            t, a = et, ea
        pieces.append((t, v, a))
        # split any decelerating piece where speed would cross zero
        final: list[tuple[float, float, float]] = []
        for i, (pt, pv, pa) in enumerate(pieces):
            end = pieces[i + 1][0] if i + 1 < len(pieces) else math.inf
            if pa < 0 and pv + pa * (end - pt) < 0:
                t_stop = pt + pv / (-pa)
                final.append((pt, pv, pa))
                final.append((t_stop, 0.0, 0.0))
            else:
                final.append((pt, pv, pa))
        self._pieces = final
        self._s0 = 0.0
        self._s0 = self.arc_length(0.0)

    @staticmethod
    def _speed_in(piece, t):
        pt, pv, pa = piece
        return max(0.0, pv + pa * (t - pt))

    def _piece_at(self, t: float):
        chosen = self._pieces[0]
        for p in self._pieces:
            if p[0] <= t:
                chosen = p
            else:
                break
        return chosen

    def speed(self, t: float) -> float:
        return self._speed_in(self._piece_at(t), t)

    def accel(self, t: float) -> float:
        piece = self._piece_at(t)
        return piece[2] if self.speed(t) > 0 or piece[2] > 0 else 0.0

    def arc_length(self, t: float) -> float:
        s = 0.0
        for i, (pt, pv, pa) in enumerate(self._pieces):
            end = self._pieces[i + 1][0] if i + 1 < len(self._pieces) else math.inf
            if t <= pt:
                break
            seg_end = min(t, end)
            dt = seg_end - pt
            s += pv * dt + 0.5 * pa * dt * dt
        return s - self._s0


@dataclass
class _Agent:
    entity_id: int
    entity_class: str
    extent: tuple[float, float]
    path: _Path
    motion: _Motion
    s_offset: float            # arc-length position at the prediction instant
    cov_norms: tuple[float, float, float]

    def state(self, t: float) -> EntityState:
        s = self.s_offset + self.motion.arc_length(t)
        pos, tan, curv = self.path.at(s)
        v = self.motion.speed(t)
        a_long = self.motion.accel(t)
        normal = np.array([-tan[1], tan[0]])
        acc = a_long * tan + v * v * curv * normal
        return EntityState(
            entity_id=self.entity_id,
            entity_class=self.entity_class,
            position=_qpair(pos),
            velocity=_qpair(v * tan),
            acceleration=_qpair(acc),
            heading=_wrap_heading(math.atan2(tan[1], tan[0])),
            extent=self.extent,
            cov_norms=self.cov_norms,
        )

    def position(self, t: float) -> np.ndarray:
        s = self.s_offset + self.motion.arc_length(t)
        return self.path.at(s)[0]


def _cov_norms(rng: np.random.Generator) -> tuple[float, float, float]:
    return tuple(float(_q(v)) for v in rng.uniform(0.0, 0.5, size=3))


def _still_motion() -> _Motion:
    return _Motion(-3.0, 0.0, [])


# --- road builders ----------------------------------------------------------


def _straight_road(origin, heading: float, length: float = 2 * ARM_LENGTH) -> list[RoadElement]:
    """Two-lane straight road centered on ``origin`` along ``heading``."""
    d = np.array([math.cos(heading), math.sin(heading)])
    n = np.array([-d[1], d[0]])
    o = np.asarray(origin, dtype=float)
    half = length / 2.0
    a, b = o - half * d, o + half * d

    def pl(offset):
        return tuple(_qpair(p + offset * n) for p in (a, b))

    surface = tuple(
        _qpair(c)
        for c in (
            a - ROAD_HALF_WIDTH * n, b - ROAD_HALF_WIDTH * n,
            b + ROAD_HALF_WIDTH * n, a + ROAD_HALF_WIDTH * n,
        )
    )
    return [
        RoadElement("drivable_polygon", surface),
        RoadElement("lane_line", pl(0.0)),
        RoadElement("lane_line", pl(-ROAD_HALF_WIDTH)),
        RoadElement("lane_line", pl(ROAD_HALF_WIDTH)),
    ]


def _cross_roads(center) -> list[RoadElement]:
    """Two perpendicular roads plus a plus-shaped drivable surface."""
    c = np.asarray(center, dtype=float)
    w, L = ROAD_HALF_WIDTH, ARM_LENGTH
    cross = [
        (c[0] - w, c[1] - L), (c[0] + w, c[1] - L), (c[0] + w, c[1] - w),
        (c[0] + L, c[1] - w), (c[0] + L, c[1] + w), (c[0] + w, c[1] + w),
        (c[0] + w, c[1] + L), (c[0] - w, c[1] + L), (c[0] - w, c[1] + w),
        (c[0] - L, c[1] + w), (c[0] - L, c[1] - w), (c[0] - w, c[1] - w),
    ]
    elems = [RoadElement("drivable_polygon", tuple(_qpair(p) for p in cross))]
    # center lines stop at the junction box on all four arms
    for d in (np.array([1.0, 0.0]), np.array([-1.0, 0.0]), np.array([0.0, 1.0]), np.array([0.0, -1.0])):
        elems.append(
            RoadElement("lane_line", (_qpair(c + w * d), _qpair(c + L * d)))
        )
    # stop lines across each incoming lane (right-hand traffic)
    for d, n in (
        (np.array([0.0, 1.0]), np.array([1.0, 0.0])),    # northbound approach, east half
        (np.array([0.0, -1.0]), np.array([-1.0, 0.0])),  # southbound approach, west half
        (np.array([1.0, 0.0]), np.array([0.0, -1.0])),   # eastbound approach, south half
        (np.array([-1.0, 0.0]), np.array([0.0, 1.0])),   # westbound approach, north half
    ):
        base = c - w * d
        elems.append(
            RoadElement("stop_line", (_qpair(base), _qpair(base + w * n)))
        )
    return elems


def _ribbon(path: _Path, s0: float, s1: float, half_width: float, steps: int = 12):
    """Simple polygon sweeping ``half_width`` to each side of a path span."""
    left, right = [], []
    for i in range(steps + 1):
        s = s0 + (s1 - s0) * i / steps
        pos, tan, _ = path.at(s)
        n = np.array([-tan[1], tan[0]])
        left.append(pos + half_width * n)
        right.append(pos - half_width * n)
    pts = right + left[::-1]
    return tuple(_qpair(p) for p in pts)


def _turn_path(center, approach: float, direction: int, radius: float) -> _Path:
    """Northbound approach lane through the junction, turning left or right.

    ``approach`` is the distance from the arc entry back along the lane at
    which the path begins; the path continues one arm length past the turn.
    """
    c = np.asarray(center, dtype=float)
    lane_x = c[0] + LANE_HALF_OFFSET
    if direction > 0:   # left: exit westbound lane y = cy + LANE_HALF_OFFSET
        entry_y = c[1] + LANE_HALF_OFFSET - radius
        arc_center = np.array([lane_x - radius, entry_y])
        theta0, sweep = 0.0, math.pi / 2
    else:               # right: exit eastbound lane y = cy - LANE_HALF_OFFSET
        entry_y = c[1] - LANE_HALF_OFFSET - radius
        arc_center = np.array([lane_x + radius, entry_y])
        theta0, sweep = math.pi, -math.pi / 2
    path = _Path()
    path.add_straight((lane_x, entry_y - approach), (0.0, 1.0), approach)
    path.add_arc(arc_center, radius, theta0, sweep)
    exit_tan = np.array([-1.0, 0.0]) if direction > 0 else np.array([1.0, 0.0])
    exit_pos, _, _ = path.at(path.length)
    path.add_straight(exit_pos, exit_tan, ARM_LENGTH)
    return path


def _through_path(center, approach: float) -> _Path:
    c = np.asarray(center, dtype=float)
    lane_x = c[0] + LANE_HALF_OFFSET
    path = _Path()
    path.add_straight((lane_x, c[1] - approach), (0.0, 1.0), approach + ARM_LENGTH)
    return path


# --- template generators ----------------------------------------------------


def _check_speed(v: float):
    if not (0.0 <= v <= MAX_SPEED):
        raise TemplateError(f"speed must lie in [0, {MAX_SPEED}] m/s, got {v}")


def _assemble(target: _Agent, others: list[_Agent], road: list[RoadElement],
              lights: list[TrafficLightState]) -> Scene:
    frames = []
    for i in range(NUM_FRAMES):
        t = (i - (NUM_FRAMES - 1)) * FRAME_SPACING_S
        entities = [target.state(t)] + [o.state(t) for o in others]
        frames.append(Frame(timestamp=t, entities=tuple(entities), lights=tuple(lights)))
    p0 = _qpair(target.position(0.0))
    future = []
    for k in range(1, NUM_FUTURE + 1):
        pk = _qpair(target.position(float(k)))
        future.append((pk[0] - p0[0], pk[1] - p0[1]))
    return Scene(frames=tuple(frames), road=tuple(road), target_id=target.entity_id,
                 future=tuple(future))


def _gen_straight_cruise(tpl: ScenarioTemplate) -> Scene:
    v = tpl.value("speed")
    heading = tpl.value("heading")
    accel = tpl.value("accel")
    _check_speed(v)
    if abs(accel) > MAX_ACCEL:
        raise TemplateError(f"|accel| must be <= {MAX_ACCEL}, got {accel}")
    rng = substream(tpl.seed, _S_OTHERS)
    cov_rng = substream(tpl.seed, _S_COVS)

    origin = np.array([0.0, 0.0])
    road = _straight_road(origin, heading)
    d = np.array([math.cos(heading), math.sin(heading)])
    n = np.array([-d[1], d[0]])

    path = _Path().add_straight(origin - ARM_LENGTH * d - LANE_HALF_OFFSET * n,
                                d, 2 * ARM_LENGTH)
    changes = [(-3.0, accel)] if accel else []
    target = _Agent(1, "vehicle", VEHICLE_EXTENT, path,
                    _Motion(-3.0, v, changes), ARM_LENGTH, _cov_norms(cov_rng))

    others: list[_Agent] = []
    if rng.random() < 0.5:
        # adjacent-lane cruiser going the other way, already past the target
        back = _Path().add_straight(origin + ARM_LENGTH * d + LANE_HALF_OFFSET * n,
                                    -d, 2 * ARM_LENGTH)
        v2 = float(rng.uniform(2.0, 4.0))
        others.append(_Agent(2, "vehicle", VEHICLE_EXTENT, back,
                             _Motion(-3.0, v2, []), ARM_LENGTH + float(rng.uniform(6.0, 18.0)),
                             _cov_norms(cov_rng)))
    return _assemble(target, others, road, [])


def _gen_four_way_turn(tpl: ScenarioTemplate) -> Scene:
    v = tpl.value("speed")
    _check_speed(v)
    direction = 1 if tpl.value("turn_direction") >= 0 else -1
    radius = tpl.value("radius")
    if not (3.0 <= radius <= 15.0):
        raise TemplateError(f"radius must lie in [3, 15] m, got {radius}")
    arc_delay = tpl.value("arc_delay")
    if not (0.0 <= arc_delay <= 3.0):
        raise TemplateError(f"arc_delay must lie in [0, 3] s, got {arc_delay}")
    ambiguous = tpl.value("ambiguous_phase") >= 0.5
    with_lead = tpl.value("lead_vehicle") >= 0.5
    center = np.array([tpl.value("center_x"), tpl.value("center_y")])
    rng = substream(tpl.seed, _S_OTHERS)
    cov_rng = substream(tpl.seed, _S_COVS)

    road = _cross_roads(center)
    approach = 3.0 * FRAME_SPACING_S * NUM_FRAMES * max(v, 1.0)  # room for past + lead
    path = _turn_path(center, approach, direction, radius)
    # connections from the northbound approach: left=1, straight=2, right=3
    left_path = _turn_path(center, 2.0, 1, radius)
    right_path = _turn_path(center, 2.0, -1, radius)
    through = _through_path(center, ROAD_HALF_WIDTH + 4.0)
    road.append(RoadElement("junction_connection",
                            _ribbon(left_path, 0.0, left_path.length - ARM_LENGTH + 6.0, 1.6),
                            connection_id=1))
    road.append(RoadElement("junction_connection",
                            _ribbon(through, 0.0, 2.0 * (ROAD_HALF_WIDTH + 4.0), 1.6),
                            connection_id=2))
    road.append(RoadElement("junction_connection",
                            _ribbon(right_path, 0.0, right_path.length - ARM_LENGTH + 6.0, 1.6),
                            connection_id=3))

    own = 1 if direction > 0 else 3
    other_turn = 3 if direction > 0 else 1
    if ambiguous:
        states = {own: "permitted", other_turn: "permitted", 2: "prohibited"}
    else:
        states = {own: "permitted", other_turn: "prohibited", 2: "prohibited"}
    lights = [TrafficLightState(cid, st) for cid, st in sorted(states.items())]

    s_entry = approach   # arc starts where the straight approach ends
    target = _Agent(1, "vehicle", VEHICLE_EXTENT, path, _Motion(-3.0, v, []),
                    s_entry - v * arc_delay, _cov_norms(cov_rng))

    others: list[_Agent] = []
    next_id = 2
    if with_lead:
        gap = float(rng.uniform(10.0, 16.0))
        others.append(_Agent(next_id, "vehicle", VEHICLE_EXTENT, path, _Motion(-3.0, v, []),
                             s_entry - v * arc_delay + gap, _cov_norms(cov_rng)))
        next_id += 1
    if rng.random() < 0.4:
        # departing cross-traffic east of the junction, heading away
        dep = _Path().add_straight(center + np.array([ROAD_HALF_WIDTH + 2.0, -LANE_HALF_OFFSET]),
                                   (1.0, 0.0), ARM_LENGTH)
        others.append(_Agent(next_id, "vehicle", VEHICLE_EXTENT, dep,
                             _Motion(-3.0, float(rng.uniform(2.0, 4.0)), []),
                             float(rng.uniform(2.0, 10.0)), _cov_norms(cov_rng)))
        next_id += 1
    if rng.random() < 0.3:
        corner = center + np.array([ROAD_HALF_WIDTH + 1.5, ROAD_HALF_WIDTH + 1.5])
        walker = _Path().add_straight(corner, (0.0, 1.0), 5.0)
        cls, ext = (("pedestrian", PEDESTRIAN_EXTENT) if rng.random() < 0.7
                    else ("cyclist", CYCLIST_EXTENT))
        others.append(_Agent(next_id, cls, ext, walker, _still_motion(), 0.0,
                             _cov_norms(cov_rng)))
        next_id += 1
    return _assemble(target, others, road, lights)


def _gen_lead_follow(tpl: ScenarioTemplate) -> Scene:
    v = tpl.value("speed")
    vl = tpl.value("lead_speed")
    gap = tpl.value("gap")
    delay = tpl.value("brake_delay")
    dur = tpl.value("brake_duration")
    _check_speed(v)
    _check_speed(vl)
    if vl >= v:
        raise TemplateError("lead_speed must be below speed")
    if gap <= VEHICLE_EXTENT[0]:
        raise TemplateError(f"gap must exceed the vehicle length {VEHICLE_EXTENT[0]}")
    if dur <= 0:
        raise TemplateError("brake_duration must be positive")
    accel = (vl - v) / dur
    if abs(accel) > MAX_ACCEL:
        raise TemplateError("braking exceeds the 5 m/s^2 limit")
    cov_rng = substream(tpl.seed, _S_COVS)

    origin = np.array([0.0, 0.0])
    road = _straight_road(origin, 0.0)
    lane = _Path().add_straight(origin + np.array([-ARM_LENGTH, -LANE_HALF_OFFSET]),
                                (1.0, 0.0), 2 * ARM_LENGTH)
    target = _Agent(1, "vehicle", VEHICLE_EXTENT, lane,
                    _Motion(-3.0, v, [(delay, accel), (delay + dur, 0.0)]),
                    ARM_LENGTH - 10.0, _cov_norms(cov_rng))
    lead = _Agent(2, "vehicle", VEHICLE_EXTENT, lane, _Motion(-3.0, vl, []),
                  ARM_LENGTH - 10.0 + gap, _cov_norms(cov_rng))
    return _assemble(target, [lead], road, [])


def _gen_red_light_stop(tpl: ScenarioTemplate) -> Scene:
    v = tpl.value("speed")
    d_stop = tpl.value("stop_distance")
    prohibited = tpl.value("phase") >= 0.5
    _check_speed(v)
    if d_stop <= 2.0:
        raise TemplateError("stop_distance must exceed 2 m")
    center = np.array([tpl.value("center_x"), tpl.value("center_y")])
    rng = substream(tpl.seed, _S_OTHERS)
    cov_rng = substream(tpl.seed, _S_COVS)

    road = _cross_roads(center)
    through = _through_path(center, ARM_LENGTH)
    road.append(RoadElement("junction_connection",
                            _ribbon(through, ARM_LENGTH - ROAD_HALF_WIDTH - 4.0,
                                    ARM_LENGTH + ROAD_HALF_WIDTH + 4.0, 1.6),
                            connection_id=1))
    lights = [TrafficLightState(1, "prohibited" if prohibited else "permitted")]

    margin = 1.5
    changes = []
    if prohibited:
        braking_room = d_stop - margin
        accel = -(v * v) / (2.0 * braking_room)
        if abs(accel) > MAX_ACCEL:
            raise TemplateError("stopping would exceed the 5 m/s^2 limit")
        changes = [(0.0, accel)]
    # stop line for the northbound approach sits ROAD_HALF_WIDTH south of center
    s_zero = (ARM_LENGTH - ROAD_HALF_WIDTH) - d_stop
    target = _Agent(1, "vehicle", VEHICLE_EXTENT, through, _Motion(-3.0, v, changes),
                    s_zero, _cov_norms(cov_rng))

    others: list[_Agent] = []
    if rng.random() < 0.4:
        # departed vehicle north of the junction, heading away
        others.append(_Agent(2, "vehicle", VEHICLE_EXTENT, through,
                             _Motion(-3.0, float(rng.uniform(2.5, 4.0)), []),
                             ARM_LENGTH + ROAD_HALF_WIDTH + float(rng.uniform(6.0, 16.0)),
                             _cov_norms(cov_rng)))
    return _assemble(target, others, road, lights)


_GENERATORS = {
    "straight_cruise": _gen_straight_cruise,
    "four_way_junction_turn": _gen_four_way_turn,
    "lead_follow": _gen_lead_follow,
    "red_light_stop": _gen_red_light_stop,
}


def generate(template: ScenarioTemplate) -> Scene:
    """Fully scripted scene for the template; a pure function of (kind, params, seed)."""
    return _GENERATORS[template.kind](template)


# --- dataset splits ---------------------------------------------------------
#
# Junction centers are drawn from a 240 m lattice: even slots for training,
# odd slots for testing, so the junction geometry sets never overlap.


def _junction_center(split: str, index: int) -> tuple[float, float]:
    slot = 2 * index if split == "train" else 2 * index + 1
    return (240.0 * slot, 120.0 * (slot % 7))


def _sample_template(kind: str, seed: int, split: str, index: int) -> ScenarioTemplate:
    rng = substream(seed, _S_PARAMS, TEMPLATE_KINDS.index(kind), index,
                    0 if split == "train" else 1)
    scene_seed = int(substream(seed, _S_SCENE_SEEDS, TEMPLATE_KINDS.index(kind), index,
                               0 if split == "train" else 1).integers(0, 2**63 - 1))
    cx, cy = _junction_center(split, index)
    if kind == "straight_cruise":
        params = {
            "speed": float(rng.uniform(2.0, 4.1)),
            "heading": float(rng.uniform(-math.pi, math.pi)),
            "accel": float(rng.choice([0.0, 0.0, 0.25, -0.25])),
        }
    elif kind == "four_way_junction_turn":
        params = {
            "speed": float(rng.uniform(2.5, 4.4)),
            "turn_direction": float(rng.choice([-1.0, 1.0])),
            "radius": float(rng.uniform(5.0, 9.0)),
            "arc_delay": float(rng.uniform(0.3, 1.8)),
            "ambiguous_phase": float(rng.random() < 0.4),
            "lead_vehicle": float(rng.random() < 0.35),
            "center_x": cx,
            "center_y": cy,
        }
    elif kind == "lead_follow":
        speed = float(rng.uniform(3.0, 4.4))
        lead_speed = float(rng.uniform(0.3, 0.6)) * speed
        delay = float(rng.uniform(0.3, 1.5))
        dur = float(rng.uniform(1.0, 2.0))
        params = {
            "speed": speed,
            "lead_speed": lead_speed,
            "gap": 6.0 + lead_speed * 1.2 + (speed - lead_speed) * (delay + dur / 2.0),
            "brake_delay": delay,
            "brake_duration": dur,
        }
    else:
        params = {
            "speed": float(rng.uniform(3.0, 4.4)),
            "stop_distance": float(rng.uniform(12.0, 24.0)),
            "phase": float(rng.random() < 0.5),
            "center_x": cx,
            "center_y": cy,
        }
    return ScenarioTemplate(kind=kind, params=params, seed=scene_seed)


def generate_split(n_train: int, n_test: int, seed: int) -> tuple[list[Scene], list[Scene]]:
    """Train/test scene lists with a fixed 25% mixture over the templates.

    Junction locations are disjoint between the two splits; outputs are a
    pure function of the arguments.
    """
    if n_train < 0 or n_test < 0:
        raise ValueError("counts must be >= 0")

    def build(split: str, n: int) -> list[Scene]:
        scenes = []
        for i in range(n):
            kind = TEMPLATE_KINDS[i % len(TEMPLATE_KINDS)]
            scenes.append(generate(_sample_template(kind, seed, split, i)))
        return scenes

    return build("train", n_train), build("test", n_test)


def generate_junction_set(n: int, seed: int, split: str = "train") -> list[Scene]:
    """Junction-heavy mixture (50% turns, 25% lead-follow, 25% red-light).

    Used by the ablation experiments, where turning and stopping behavior
    carries the signal that the road and other-entity channels must explain.
    """
    kinds = ("four_way_junction_turn", "four_way_junction_turn",
             "lead_follow", "red_light_stop")
    scenes = []
    for i in range(n):
        scenes.append(generate(_sample_template(kinds[i % 4], seed, split, i)))
    return scenes
