"""The navigation loop: sense, track, decide, steer, integrate, check.

One simulation is a pure function of (scenario, policy name): identical
inputs produce identical logs.  The fuzzy policy replans straight to the
goal after each completed evasion; the baseline policy first returns to the
original straight path at the perpendicular foot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .geom import Vec2
from .planner import LegPlan, PathRecord, baseline_rejoin, path_cost, replan
from .policy import (
    Action,
    defuzzify,
    detect_and_track,
    memberships,
    merge_commands,
    steering_vector,
    time_to_conflict,
)
from .scenario import Scenario
from .world import DroneState, blade_clearance, sense, step_drone

POLICIES = ("fuzzy", "baseline")

FOLLOW_LABEL = "follow"


class _CrossingSampler:
    """Memoized dt/4-grid crossing test for one active leg.

    Consecutive steps re-examine almost the same sample grid, so caching the
    per-gridpoint predicate gives identical results to first_crossing_time
    at a fraction of the work.  The cache is dropped whenever the leg
    changes.
    """

    def __init__(self, scenario: Scenario):
        from .policy import first_crossing_time  # local to avoid cycle at import

        self._blades = scenario.blades
        self._step = scenario.dt / 4.0
        self._horizon = scenario.policy_params.horizon
        self._padding = scenario.drone_radius
        self._leg: Optional[Tuple[Vec2, Vec2]] = None
        self._hits: Dict[Tuple[int, int], bool] = {}

    def set_leg(self, origin: Vec2, target: Vec2) -> None:
        if self._leg != (origin, target):
            self._leg = (origin, target)
            self._hits.clear()

    def first_crossing(self, bid: int, t0: float) -> Optional[float]:
        from .geom import segment_segment_distance
        from .world import blade_pose

        assert self._leg is not None
        origin, target = self._leg
        blade = self._blades[bid]
        n = max(1, int(round(self._horizon / self._step)))
        j0 = int(round(t0 / self._step))
        for j in range(j0, j0 + n + 1):
            hit = self._hits.get((bid, j))
            if hit is None:
                pose = blade_pose(blade, j * self._step)
                hit = (
                    segment_segment_distance(pose.seg_a, pose.seg_b, origin, target)
                    <= blade.half_width + self._padding
                )
                self._hits[(bid, j)] = hit
            if hit:
                return j * self._step
        return None


@dataclass(frozen=True)
class StepRecord:
    t: float
    position: Vec2
    velocity: Vec2
    action: str
    leg_index: int
    clearance: float
    delta: Optional[float]


@dataclass(frozen=True)
class TrajectoryLog:
    steps: Tuple[StepRecord, ...]
    outcome: str  # "goal" | "collision" | "timeout"


@dataclass(frozen=True)
class Metrics:
    outcome: str
    path_length: float
    ideal_length: float
    time_to_goal: Optional[float]
    min_clearance: float
    replan_count: int
    boost_time_fraction: float


def run_simulation(scenario: Scenario, policy: str = "fuzzy") -> Tuple[TrajectoryLog, Metrics]:
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}, expected one of {POLICIES}")
    params = scenario.policy_params
    dt = scenario.dt
    goal = scenario.goal
    ideal = (scenario.start, goal)

    drone = DroneState(
        position=scenario.start,
        velocity=(goal - scenario.start).unit() * scenario.nominal_speed,
        radius=scenario.drone_radius,
        nominal_speed=scenario.nominal_speed,
        max_speed=scenario.max_speed,
    )
    leg = LegPlan(origin=scenario.start, target=goal, leg_index=0)
    tracked: Dict[int, object] = {}
    steps: List[StepRecord] = []
    vertices: List[Vec2] = [scenario.start]
    min_clearance = math.inf
    boost_steps = 0
    replan_count = 0
    outcome = "timeout"
    time_to_goal: Optional[float] = None

    sampler = _CrossingSampler(scenario)
    for k in range(scenario.max_steps):
        t = k * dt
        sensed = sense(drone, scenario.blades, t, scenario.sensor_range)
        was_tracking = bool(tracked)
        sampler.set_leg(leg.origin, leg.target)
        tracked, geoms = detect_and_track(
            drone, leg.origin, leg.target, scenario.blades, sensed, tracked,
            t, params.horizon, dt, crossing_fn=sampler.first_crossing,
        )

        if geoms:
            entries = []
            deltas = {}
            for bid, g in geoms:
                mu = memberships(max(-1.0, min(1.0, g.delta)), params)
                action = defuzzify(mu, g, params)
                cmd = steering_vector(action, drone, g, params)
                entries.append((bid, time_to_conflict(g, drone.velocity), cmd))
                deltas[bid] = g.delta
            command = merge_commands(entries)
            winner = min(entries, key=lambda e: (e[1], e[0]))[0]
            action_label = command.action.value
            delta: Optional[float] = deltas[winner]
            if command.action is Action.PLUS_BOOST:
                boost_steps += 1
        else:
            to_target = leg.target - drone.position
            heading = to_target.unit() if to_target.norm() > 1e-9 else drone.velocity.unit()
            command = None
            action_label = FOLLOW_LABEL
            delta = None
        velocity = command.velocity if command is not None else heading * scenario.nominal_speed

        drone = step_drone(drone, velocity, dt)
        t_next = t + dt
        midpoint = drone.position - velocity * (dt / 2.0)
        clearance = math.inf
        for blade in scenario.blades:
            clearance = min(
                clearance,
                blade_clearance(drone.position, drone.radius, blade, t_next),
                blade_clearance(midpoint, drone.radius, blade, t + dt / 2.0),
            )
        min_clearance = min(min_clearance, clearance)

        steps.append(
            StepRecord(t_next, drone.position, velocity, action_label, leg.leg_index, clearance, delta)
        )
        vertices.append(drone.position)

        if clearance < 0.0:
            outcome = "collision"
            break
        if (drone.position - goal).norm() <= scenario.goal_tolerance:
            outcome = "goal"
            time_to_goal = t_next
            break

        if was_tracking and not tracked:
            replan_count += 1
            if policy == "fuzzy":
                leg = replan(drone.position, goal, leg.leg_index)
            else:
                rejoin = baseline_rejoin(drone.position, ideal, goal, leg.leg_index)
                if rejoin.length() <= scenario.goal_tolerance:
                    # already back on the original path: run it to the goal
                    leg = LegPlan(rejoin.target, goal, rejoin.leg_index)
                else:
                    leg = rejoin
        elif (
            policy == "baseline"
            and not tracked
            and (leg.target - goal).norm() > 0.0
            and (drone.position - leg.target).norm() <= scenario.goal_tolerance
        ):
            # rejoin foot reached: continue along the original path
            leg = LegPlan(leg.target, goal, leg.leg_index + 1)

    record = PathRecord(vertices=tuple(vertices), ideal=ideal)
    n_steps = len(steps)
    metrics = Metrics(
        outcome=outcome,
        path_length=path_cost(record),
        ideal_length=scenario.ideal_length(),
        time_to_goal=time_to_goal,
        min_clearance=min_clearance if n_steps else math.inf,
        replan_count=replan_count,
        boost_time_fraction=boost_steps / n_steps if n_steps else 0.0,
    )
    return TrajectoryLog(steps=tuple(steps), outcome=outcome), metrics


@dataclass(frozen=True)
class PolicyComparison:
    fuzzy: Metrics
    baseline: Metrics
    path_length_ratio: Optional[float]  # baseline/fuzzy, None unless both reach goal


def compare_policies(scenario: Scenario) -> PolicyComparison:
    _, fuzzy_metrics = run_simulation(scenario, "fuzzy")
    _, baseline_metrics = run_simulation(scenario, "baseline")
    ratio = None
    if fuzzy_metrics.outcome == "goal" and baseline_metrics.outcome == "goal":
        ratio = baseline_metrics.path_length / fuzzy_metrics.path_length
    return PolicyComparison(fuzzy=fuzzy_metrics, baseline=baseline_metrics, path_length_ratio=ratio)
