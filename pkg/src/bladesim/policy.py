"""Fuzzy evasion policy: decision geometry, memberships, defuzzification.

For each tracked obstacle the policy compares the bearing sine at detection
time (sin of angle B-A-C) with the bearing sine now (sin of angle B-D-E).
The sign of their difference selects among three candidate headings: the
combined vector Vd+Vo, the unchanged Vd, or the counter vector Vd-Vo, with
a widening term when the blade subtends more of the view than the free gap
and a speed boost against very wide blades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .geom import (
    DegenerateGeometryError,
    Vec2,
    angle_at,
    segment_segment_distance,
    sin_between,
)
from .world import Blade, BladePose, DroneState, blade_pose

_TINY = 1e-12


class Action(str, Enum):
    PLUS = "plus"
    MAINTAIN = "maintain"
    MINUS = "minus"
    MINUS_WIDENED = "minus_widened"
    PLUS_BOOST = "plus_boost"


@dataclass(frozen=True)
class PolicyParams:
    eq_band: float = 0.05
    wide_angle: float = math.pi / 3.0
    k_beta: float = 1.0
    k_alpha: float = 0.5
    horizon: float = 1.0  # seconds; scenario loader defaults this to 20*dt
    wide_override_direction: str = "plus"  # "plus" | "minus"

    def __post_init__(self) -> None:
        if not (0.0 < self.eq_band <= 0.5):
            raise ValueError("eq_band must be in (0, 0.5]")
        if not (0.0 < self.wide_angle < math.pi):
            raise ValueError("wide_angle must be in (0, pi)")
        if self.k_beta < 0.0 or self.k_alpha < 0.0:
            raise ValueError("k_beta and k_alpha must be >= 0")
        if self.horizon <= 0.0:
            raise ValueError("horizon must be > 0")
        if self.wide_override_direction not in ("plus", "minus"):
            raise ValueError("wide_override_direction must be 'plus' or 'minus'")


@dataclass(frozen=True)
class DecisionGeometry:
    """Points A-F for one tracked obstacle plus the derived angle quantities.

    A/C are the drone position and obstacle leading edge at detection time;
    D/E/F are the drone position and obstacle leading/trailing edges now;
    B is the current leg endpoint.
    """

    a_point: Vec2
    c_point: Vec2
    d_point: Vec2
    e_point: Vec2
    f_point: Vec2
    b_point: Vec2
    v_o: Vec2
    sin_bac: float
    sin_bde: float
    ang_edf: float
    ang_edb: float
    delta: float


@dataclass(frozen=True)
class FuzzyMembership:
    mu_plus: float
    mu_maintain: float
    mu_minus: float


@dataclass(frozen=True)
class SteeringCommand:
    action: Action
    velocity: Vec2
    boost_factor: float = 1.0


@dataclass(frozen=True)
class Track:
    """First-detection record for one obstacle."""

    a_point: Vec2
    c_point: Vec2
    detected_at: float
    crossing_time: float  # predicted first body/leg crossing, updated each step


def _safe_sin(u: Vec2, v: Vec2) -> float:
    if u.norm() < _TINY or v.norm() < _TINY:
        return 0.0
    return sin_between(u, v)


def _safe_angle(vertex: Vec2, p: Vec2, q: Vec2) -> float:
    if (p - vertex).norm() < _TINY or (q - vertex).norm() < _TINY:
        return 0.0
    return angle_at(vertex, p, q)


def build_geometry(
    a: Vec2, c: Vec2, d: Vec2, e: Vec2, f: Vec2, b: Vec2, v_o: Vec2
) -> DecisionGeometry:
    sin_bac = _safe_sin(b - a, c - a)
    sin_bde = _safe_sin(b - d, e - d)
    return DecisionGeometry(
        a_point=a,
        c_point=c,
        d_point=d,
        e_point=e,
        f_point=f,
        b_point=b,
        v_o=v_o,
        sin_bac=sin_bac,
        sin_bde=sin_bde,
        ang_edf=_safe_angle(d, e, f),
        ang_edb=_safe_angle(d, e, b),
        delta=sin_bac - sin_bde,
    )


def first_crossing_time(
    blade: Blade,
    leg_origin: Vec2,
    leg_target: Vec2,
    t0: float,
    horizon: float,
    step: float,
    padding: float = 0.0,
) -> Optional[float]:
    """Earliest sampled time in [t0, t0+horizon] at which the blade body
    touches the leg segment, or None if it never does within the horizon.

    `padding` widens the test by the drone radius so a blade that can reach
    the drone disc without touching the leg line still registers.
    """
    n = max(1, int(round(horizon / step)))
    threshold = blade.half_width + padding
    for k in range(n + 1):
        tk = t0 + k * step
        pose = blade_pose(blade, tk)
        if segment_segment_distance(pose.seg_a, pose.seg_b, leg_origin, leg_target) <= threshold:
            return tk
    return None


def detect_and_track(
    drone: DroneState,
    leg_origin: Vec2,
    leg_target: Vec2,
    blades: Sequence[Blade],
    sensed: Sequence[Tuple[int, BladePose]],
    tracked: Mapping[int, Track],
    t: float,
    horizon: float,
    dt: float,
    crossing_fn: Optional[Callable[[int, float], Optional[float]]] = None,
) -> Tuple[Dict[int, Track], List[Tuple[int, DecisionGeometry]]]:
    """Update the track map and emit decision geometry per tracked obstacle.

    A sensed blade becomes tracked when its body crosses the leg within
    `horizon` seconds (sampled at dt/4); it is dropped once it is no longer
    sensed or no longer crossing.  `crossing_fn(bid, t)` may be supplied to
    memoize the sampled crossing test; it must agree with
    first_crossing_time on the same grid.
    """
    if (leg_target - leg_origin).norm() == 0.0:
        raise DegenerateGeometryError("detect_and_track: zero-length leg")
    new_tracked: Dict[int, Track] = {}
    geoms: List[Tuple[int, DecisionGeometry]] = []
    for bid, pose in sensed:
        if crossing_fn is not None:
            tc = crossing_fn(bid, t)
        else:
            tc = first_crossing_time(
                blades[bid], leg_origin, leg_target, t, horizon, dt / 4.0,
                padding=drone.radius,
            )
        if tc is None:
            continue
        prev = tracked.get(bid)
        if prev is None:
            rec = Track(a_point=drone.position, c_point=pose.e_edge, detected_at=t, crossing_time=tc)
        else:
            rec = Track(prev.a_point, prev.c_point, prev.detected_at, tc)
        new_tracked[bid] = rec
        geoms.append(
            (
                bid,
                build_geometry(
                    a=rec.a_point,
                    c=rec.c_point,
                    d=drone.position,
                    e=pose.e_edge,
                    f=pose.f_edge,
                    b=leg_target,
                    v_o=pose.edge_velocity,
                ),
            )
        )
    return new_tracked, geoms


def decision_delta(g: DecisionGeometry) -> float:
    return g.sin_bac - g.sin_bde


def memberships(delta: float, params: PolicyParams) -> FuzzyMembership:
    """Membership degrees over the action set {Vd+Vo, keep Vd, Vd-Vo}.

    Piecewise constant: full weight on the combined vector inside the
    equality band, full weight on the counter vector when the bearing sine
    is growing, and a maintain-dominant (1.0 vs 0.3/0.3) split when it is
    shrinking.
    """
    if not (-1.0 <= delta <= 1.0):
        raise ValueError(f"delta must be in [-1, 1], got {delta}")
    if abs(delta) <= params.eq_band:
        return FuzzyMembership(1.0, 0.0, 0.0)
    if delta < 0.0:
        return FuzzyMembership(0.3, 1.0, 0.3)
    return FuzzyMembership(0.0, 0.0, 1.0)


def defuzzify(mu: FuzzyMembership, g: DecisionGeometry, params: PolicyParams) -> Action:
    """Pick the crisp action: wide-blade boost override, then argmax with
    tie-break Maintain > Plus > Minus, then the width gate on the counter
    dodge."""
    if g.ang_edf >= params.wide_angle:
        return Action.PLUS_BOOST
    best = max(
        ((mu.mu_maintain, 2), (mu.mu_plus, 1), (mu.mu_minus, 0)),
        key=lambda p: (p[0], p[1]),
    )
    action = {2: Action.MAINTAIN, 1: Action.PLUS, 0: Action.MINUS}[best[1]]
    if action is Action.MINUS and g.ang_edf >= g.ang_edb:
        return Action.MINUS_WIDENED
    return action


def _drone_direction(drone: DroneState, g: DecisionGeometry) -> Vec2:
    # The drone-path vector is the current leg direction at nominal speed,
    # not the instantaneous velocity: anchoring the rules to the path keeps
    # dodges from compounding on one another.
    leg = g.b_point - g.d_point
    if leg.norm() > _TINY:
        return leg.unit() * drone.nominal_speed
    return drone.velocity


def steering_vector(
    action: Action, drone: DroneState, g: DecisionGeometry, params: PolicyParams
) -> SteeringCommand:
    """Turn an action label into a constant-speed velocity command.

    All actions run at nominal speed except the wide-blade boost, which
    scales speed by the blade's angular excess, capped at max_speed.
    """
    v_d = _drone_direction(drone, g)
    if action is Action.PLUS:
        raw = v_d + g.v_o
    elif action is Action.MAINTAIN:
        raw = v_d
    elif action is Action.MINUS:
        raw = v_d - g.v_o
    elif action is Action.MINUS_WIDENED:
        raw = (v_d - g.v_o) + _widening_vector(drone, g, params)
    else:  # PLUS_BOOST
        raw = v_d + g.v_o if params.wide_override_direction == "plus" else v_d - g.v_o

    if raw.norm() < 1e-9:
        raw = v_d  # degenerate resultant (e.g. Vo exactly opposes Vd)

    if action is Action.PLUS_BOOST:
        boost = 1.0 + params.k_alpha * g.ang_edf / max(g.ang_edb, params.eq_band)
        speed = min(drone.max_speed, drone.nominal_speed * boost)
    else:
        speed = drone.nominal_speed
    return SteeringCommand(
        action=action,
        velocity=raw.unit() * speed,
        boost_factor=speed / drone.nominal_speed,
    )


def _widening_vector(drone: DroneState, g: DecisionGeometry, params: PolicyParams) -> Vec2:
    sight = g.e_point - g.d_point
    if sight.norm() < _TINY:
        return Vec2(0.0, 0.0)
    n = sight.unit().perp()
    if n.dot(g.f_point - g.d_point) > 0.0:
        n = -n  # point away from the trailing edge
    return n * (params.k_beta * drone.nominal_speed * (g.ang_edf - g.ang_edb))


def time_to_conflict(g: DecisionGeometry, drone_velocity: Vec2) -> float:
    """Time for the obstacle's leading edge to close the D-E gap, inf when
    it is not closing."""
    gap = g.d_point - g.e_point
    dist = gap.norm()
    if dist < _TINY:
        return 0.0
    closing = (g.v_o - drone_velocity).dot(gap.unit())
    if closing <= _TINY:
        return math.inf
    return dist / closing


def merge_commands(
    entries: Sequence[Tuple[int, float, SteeringCommand]],
) -> SteeringCommand:
    """Pick the command for the obstacle with the smallest time-to-conflict.

    Entries are (blade id, time_to_conflict, command); ties break by blade id.
    """
    if not entries:
        raise ValueError("merge_commands: empty command list")
    return min(entries, key=lambda e: (e[1], e[0]))[2]
