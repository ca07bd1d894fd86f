"""Leg management: replanning to goal, path cost, and the rejoin baseline.

After an evasion the fuzzy navigator draws a fresh straight leg from the
current position to the goal (the hypotenuse).  The comparison baseline
instead returns to the original straight path at the perpendicular foot
before continuing, mimicking force-field navigators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .geom import Vec2, closest_point_on_segment
from .policy import Action, DecisionGeometry

_TINY = 1e-12


@dataclass(frozen=True)
class LegPlan:
    origin: Vec2
    target: Vec2
    leg_index: int

    def length(self) -> float:
        return (self.target - self.origin).norm()


@dataclass(frozen=True)
class PathRecord:
    vertices: Tuple[Vec2, ...]
    ideal: Tuple[Vec2, Vec2]


def replan(current: Vec2, goal: Vec2, legs_so_far: int) -> LegPlan:
    """New straight leg from the present location to the goal."""
    return LegPlan(origin=current, target=goal, leg_index=legs_so_far + 1)


def path_cost(record: PathRecord) -> float:
    verts = record.vertices
    return sum((verts[i + 1] - verts[i]).norm() for i in range(len(verts) - 1))


def baseline_rejoin(
    current: Vec2, ideal: Tuple[Vec2, Vec2], goal: Vec2, legs_so_far: int = 0
) -> LegPlan:
    """Leg back to the original path: target is the perpendicular foot of the
    current position on the ideal segment, clamped to the segment."""
    a, b = ideal
    if (b - a).norm() == 0.0:
        raise ValueError("baseline_rejoin: ideal segment has zero length")
    foot = closest_point_on_segment(current, a, b)
    return LegPlan(origin=current, target=foot, leg_index=legs_so_far + 1)


def detour_estimate(g: DecisionGeometry, action: Action, goal: Vec2) -> float:
    """Projected extra path length of a one-conflict dodge, for logging only.

    The dodge is modeled as a straight hop of length |D-E| along the action
    direction, followed by a straight run to the goal.
    """
    if action is Action.MAINTAIN:
        return 0.0
    d = g.d_point
    direct = (goal - d).norm()
    hop = (g.e_point - d).norm()
    direction = _action_direction(g, action)
    if direction.norm() < _TINY or hop < _TINY:
        return 0.0
    p = d + direction.unit() * hop
    extra = hop + (goal - p).norm() - direct
    return max(0.0, extra)


def _action_direction(g: DecisionGeometry, action: Action) -> Vec2:
    # Vd proxy: along the leg, scaled to the obstacle's speed (the rules'
    # equal-speed convention) so the diagonals keep their shape.
    leg_dir = g.b_point - g.d_point
    if leg_dir.norm() < _TINY:
        return Vec2(0.0, 0.0)
    speed = g.v_o.norm() if g.v_o.norm() > _TINY else 1.0
    v_d = leg_dir.unit() * speed
    if action in (Action.PLUS, Action.PLUS_BOOST):
        return v_d + g.v_o
    return v_d - g.v_o
