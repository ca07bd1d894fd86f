"""Deterministic 2D navigator for a constant-speed drone crossing a field
of oscillating blade obstacles, with a fuzzy evasion policy and a
return-to-path baseline for cost comparison."""

from .geom import Vec2
from .planner import LegPlan, PathRecord, baseline_rejoin, detour_estimate, path_cost, replan
from .policy import (
    Action,
    DecisionGeometry,
    FuzzyMembership,
    PolicyParams,
    SteeringCommand,
    build_geometry,
    decision_delta,
    defuzzify,
    detect_and_track,
    memberships,
    merge_commands,
    steering_vector,
)
from .scenario import Scenario, ScenarioError, generate_scenario, load_scenario
from .sim import Metrics, PolicyComparison, TrajectoryLog, compare_policies, run_simulation
from .world import Blade, BladePose, DroneState, blade_clearance, blade_pose, sense, step_drone

__all__ = [
    "Action",
    "Blade",
    "BladePose",
    "DecisionGeometry",
    "DroneState",
    "FuzzyMembership",
    "LegPlan",
    "Metrics",
    "PathRecord",
    "PolicyComparison",
    "PolicyParams",
    "Scenario",
    "ScenarioError",
    "SteeringCommand",
    "TrajectoryLog",
    "Vec2",
    "baseline_rejoin",
    "blade_clearance",
    "blade_pose",
    "build_geometry",
    "compare_policies",
    "decision_delta",
    "defuzzify",
    "detect_and_track",
    "detour_estimate",
    "generate_scenario",
    "load_scenario",
    "memberships",
    "merge_commands",
    "path_cost",
    "replan",
    "run_simulation",
    "sense",
    "steering_vector",
    "step_drone",
]

__version__ = "0.1.0"
