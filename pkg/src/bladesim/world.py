"""Blade kinematics, drone kinematics, forward-view sensing and clearance.

Two blade kinds are supported: a pendulum rod swinging about an anchor and
a slider segment shuttling back and forth along a track.  The blade body is
the capsule of radius half_width around the moving centerline segment; a
collision means the drone disc overlaps that body.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

from .geom import (
    DegenerateGeometryError,
    Vec2,
    closest_point_on_segment,
    point_segment_distance,
)

_TINY = 1e-12


class SpeedContractError(RuntimeError):
    """A commanded velocity fell outside [nominal_speed, max_speed]."""


@dataclass(frozen=True)
class Blade:
    """Oscillating obstacle.

    pendulum: a rod of `length` hanging from `anchor` along rest direction
    `axis`, deflected by amplitude*sin(omega*t + phase).
    slider: a segment of half-extent `half_width` perpendicular to `axis`,
    whose center shuttles along `axis` with displacement
    length*sin(omega*t + phase) from `anchor`.
    """

    kind: str  # "pendulum" | "slider"
    anchor: Vec2
    length: float
    half_width: float
    omega: float
    phase: float
    axis: Vec2
    amplitude: float = 0.0  # pendulum only

    def __post_init__(self) -> None:
        if self.kind not in ("pendulum", "slider"):
            raise ValueError(f"unknown blade kind {self.kind!r}")
        if self.length <= 0.0:
            raise ValueError("blade length must be > 0")
        if self.half_width < 0.0:
            raise ValueError("blade half_width must be >= 0")
        if self.omega <= 0.0:
            raise ValueError("blade omega must be > 0")
        if self.axis.norm() == 0.0:
            raise ValueError("blade axis must be a direction")
        if self.kind == "pendulum" and not (0.0 < self.amplitude <= math.pi):
            raise ValueError("pendulum amplitude must be in (0, pi]")

    def max_edge_speed(self) -> float:
        if self.kind == "pendulum":
            return self.length * self.amplitude * self.omega
        return self.length * self.omega


@dataclass(frozen=True)
class BladePose:
    e_edge: Vec2  # leading body point along current motion
    f_edge: Vec2  # trailing body point, 2*half_width behind e_edge
    seg_a: Vec2  # centerline endpoints
    seg_b: Vec2
    edge_velocity: Vec2


@dataclass(frozen=True)
class DroneState:
    position: Vec2
    velocity: Vec2
    radius: float
    nominal_speed: float
    max_speed: float

    def __post_init__(self) -> None:
        if self.radius < 0.0:
            raise ValueError("drone radius must be >= 0")
        if self.nominal_speed <= 0.0:
            raise ValueError("nominal_speed must be > 0")
        if self.max_speed < self.nominal_speed:
            raise ValueError("max_speed must be >= nominal_speed")


def blade_pose(blade: Blade, t: float) -> BladePose:
    """Pose of a blade at time t: centerline, edge points and edge velocity."""
    axis = blade.axis.unit()
    ph = blade.omega * t + blade.phase
    if blade.kind == "pendulum":
        theta = blade.amplitude * math.sin(ph)
        rod = axis.rotated(theta)
        tip = blade.anchor + rod * blade.length
        theta_dot = blade.amplitude * blade.omega * math.cos(ph)
        vel = rod.perp() * (blade.length * theta_dot)
        seg_a, seg_b = blade.anchor, tip
        motion = vel.unit() if vel.norm() > _TINY else rod.perp()
        ref = tip
    else:
        center = blade.anchor + axis * (blade.length * math.sin(ph))
        half = axis.perp() * blade.half_width
        seg_a, seg_b = center - half, center + half
        vel = axis * (blade.length * blade.omega * math.cos(ph))
        motion = vel.unit() if vel.norm() > _TINY else axis
        ref = center
    return BladePose(
        e_edge=ref + motion * blade.half_width,
        f_edge=ref - motion * blade.half_width,
        seg_a=seg_a,
        seg_b=seg_b,
        edge_velocity=vel,
    )


def blade_clearance(p: Vec2, drone_radius: float, blade: Blade, t: float) -> float:
    """Signed clearance of a drone disc at p from the blade body.

    Negative means collision (the disc overlaps the capsule body).
    """
    pose = blade_pose(blade, t)
    return point_segment_distance(p, pose.seg_a, pose.seg_b) - (blade.half_width + drone_radius)


def sense(
    drone: DroneState,
    blades: Sequence[Blade],
    t: float,
    sensing_range: float,
) -> List[Tuple[int, BladePose]]:
    """Blades visible in the drone's 180-degree forward view, nearest first.

    A blade is visible when its closest body point is within range and lies
    in the closed half-plane ahead of the drone's heading.  Ties in distance
    break by blade index.
    """
    if drone.velocity.norm() == 0.0:
        raise DegenerateGeometryError("sense: drone heading undefined at zero velocity")
    heading = drone.velocity.unit()
    hits = []
    for i, blade in enumerate(blades):
        pose = blade_pose(blade, t)
        q = closest_point_on_segment(drone.position, pose.seg_a, pose.seg_b)
        to_q = q - drone.position
        d = to_q.norm()
        if d > _TINY:
            body_point = q - to_q.unit() * min(blade.half_width, d)
        else:
            body_point = q
        dist = max(0.0, d - blade.half_width)
        if dist <= sensing_range and (body_point - drone.position).dot(heading) >= 0.0:
            hits.append((dist, i, pose))
    hits.sort(key=lambda h: (h[0], h[1]))
    return [(i, pose) for _, i, pose in hits]


def step_drone(drone: DroneState, commanded_velocity: Vec2, dt: float) -> DroneState:
    """First-order kinematic step: the commanded velocity is taken exactly."""
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    speed = commanded_velocity.norm()
    lo = drone.nominal_speed * (1.0 - 1e-9)
    hi = drone.max_speed * (1.0 + 1e-9)
    if not (lo <= speed <= hi):
        raise SpeedContractError(
            f"commanded speed {speed} outside [{drone.nominal_speed}, {drone.max_speed}]"
        )
    return replace(
        drone,
        position=drone.position + commanded_velocity * dt,
        velocity=commanded_velocity,
    )
