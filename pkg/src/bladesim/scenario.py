"""Scenario schema, YAML loading with strict validation, and generation.

Scenario files are YAML documents with `schema: 1`.  Units are meters,
seconds and radians throughout.  Unknown fields are errors: a scenario that
loads is a scenario that reproduces.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional

import yaml

from .geom import Vec2
from .policy import PolicyParams
from .world import Blade

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Scenario file failed to parse or validate."""


@dataclass(frozen=True)
class Scenario:
    name: str
    start: Vec2
    goal: Vec2
    goal_tolerance: float
    drone_radius: float
    nominal_speed: float
    max_speed: float
    sensor_range: float
    dt: float
    max_steps: int
    blades: List[Blade]
    policy_params: PolicyParams

    def __post_init__(self) -> None:
        if (self.goal - self.start).norm() == 0.0:
            raise ScenarioError("start and goal must differ")
        if self.goal_tolerance <= 0.0:
            raise ScenarioError("goal_tolerance must be > 0")
        if self.sensor_range <= 0.0:
            raise ScenarioError("sensor_range must be > 0")
        if self.dt <= 0.0:
            raise ScenarioError("dt must be > 0")
        if self.max_steps <= 0:
            raise ScenarioError("max_steps must be > 0")
        if self.nominal_speed <= 0.0 or self.max_speed < self.nominal_speed:
            raise ScenarioError("need 0 < nominal_speed <= max_speed")
        bound = self.dt_bound()
        if self.dt > bound:
            raise ScenarioError(
                f"dt={self.dt} violates the anti-tunneling bound "
                f"dt <= half_width/(4*max(edge speed, max_speed)) = {bound:.6g}"
            )

    def dt_bound(self) -> float:
        """Largest dt that keeps per-step motion under a quarter blade width."""
        bound = math.inf
        for blade in self.blades:
            fastest = max(blade.max_edge_speed(), self.max_speed)
            bound = min(bound, blade.half_width / (4.0 * fastest))
        return bound

    def ideal_length(self) -> float:
        return (self.goal - self.start).norm()


_TOP_FIELDS = {
    "schema", "name", "start", "goal", "goal_tolerance", "drone",
    "sensor_range", "dt", "max_steps", "blades", "policy",
}
_DRONE_FIELDS = {"radius", "nominal_speed", "max_speed"}
_BLADE_FIELDS = {"kind", "anchor", "length", "half_width", "omega", "phase", "axis", "amplitude"}
_POLICY_FIELDS = {"eq_band", "wide_angle", "k_beta", "k_alpha", "horizon", "wide_override_direction"}


def _check_fields(mapping: Mapping[str, Any], allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ScenarioError(f"unknown field(s) in {where}: {', '.join(sorted(unknown))}")


def _vec(value: Any, where: str) -> Vec2:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ScenarioError(f"{where} must be a [x, y] pair")
    return Vec2(float(value[0]), float(value[1]))


def scenario_from_mapping(doc: Mapping[str, Any]) -> Scenario:
    if not isinstance(doc, Mapping):
        raise ScenarioError("scenario document must be a mapping")
    _check_fields(doc, _TOP_FIELDS, "scenario")
    if doc.get("schema") != SCHEMA_VERSION:
        raise ScenarioError(f"schema must be {SCHEMA_VERSION}, got {doc.get('schema')!r}")
    for key in ("name", "start", "goal", "drone", "dt", "blades"):
        if key not in doc:
            raise ScenarioError(f"missing required field {key!r}")

    drone = doc["drone"]
    if not isinstance(drone, Mapping):
        raise ScenarioError("drone must be a mapping")
    _check_fields(drone, _DRONE_FIELDS, "drone")

    blades = []
    for i, entry in enumerate(doc["blades"]):
        if not isinstance(entry, Mapping):
            raise ScenarioError(f"blades[{i}] must be a mapping")
        _check_fields(entry, _BLADE_FIELDS, f"blades[{i}]")
        try:
            blades.append(
                Blade(
                    kind=str(entry["kind"]),
                    anchor=_vec(entry["anchor"], f"blades[{i}].anchor"),
                    length=float(entry["length"]),
                    half_width=float(entry["half_width"]),
                    omega=float(entry["omega"]),
                    phase=float(entry.get("phase", 0.0)),
                    axis=_vec(entry["axis"], f"blades[{i}].axis"),
                    amplitude=float(entry.get("amplitude", 0.0)),
                )
            )
        except KeyError as exc:
            raise ScenarioError(f"blades[{i}] missing field {exc.args[0]!r}") from exc
        except ValueError as exc:
            raise ScenarioError(f"blades[{i}]: {exc}") from exc

    dt = float(doc["dt"])
    policy_doc = dict(doc.get("policy") or {})
    _check_fields(policy_doc, _POLICY_FIELDS, "policy")
    policy_doc.setdefault("horizon", 20.0 * dt)
    try:
        params = PolicyParams(**policy_doc)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"policy: {exc}") from exc

    try:
        return Scenario(
            name=str(doc["name"]),
            start=_vec(doc["start"], "start"),
            goal=_vec(doc["goal"], "goal"),
            goal_tolerance=float(doc.get("goal_tolerance", 0.25)),
            drone_radius=float(drone.get("radius", 0.2)),
            nominal_speed=float(drone.get("nominal_speed", 1.0)),
            max_speed=float(drone.get("max_speed", 2.0)),
            sensor_range=float(doc.get("sensor_range", 6.0)),
            dt=dt,
            max_steps=int(doc.get("max_steps", 5000)),
            blades=blades,
            policy_params=params,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def load_scenario(path: str) -> Scenario:
    """Load and fully validate a scenario file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ScenarioError(f"{path}: parse error: {exc}") from exc
    try:
        return scenario_from_mapping(doc)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def generate_scenario(seed: int, n_blades: int, corridor: float = 24.0) -> Dict[str, Any]:
    """Seeded random corridor scenario as a plain mapping (YAML-ready).

    Generator: python random.Random(seed); blades are placed at evenly
    spaced stations along the corridor with uniformly drawn kind, size,
    frequency and phase, then dt is chosen to satisfy the anti-tunneling
    bound.  Identical (seed, n_blades) always yields an identical document.
    """
    if n_blades < 0:
        raise ScenarioError("n_blades must be >= 0")
    rng = random.Random(seed)
    max_speed = 2.0
    blades = []
    for i in range(n_blades):
        x = corridor * (i + 1) / (n_blades + 1)
        kind = rng.choice(["slider", "pendulum"])
        half_width = round(rng.uniform(0.3, 0.6), 3)
        omega = round(rng.uniform(0.5, 1.2), 3)
        phase = round(rng.uniform(0.0, 2.0 * math.pi), 3)
        if kind == "slider":
            blades.append({
                "kind": "slider",
                "anchor": [x, 0.0],
                "axis": [0.0, 1.0],
                "length": round(rng.uniform(2.0, 3.5), 3),
                "half_width": half_width,
                "omega": omega,
                "phase": phase,
            })
        else:
            length = round(rng.uniform(2.0, 3.0), 3)
            blades.append({
                "kind": "pendulum",
                "anchor": [x, round(length * 0.9, 3)],
                "axis": [0.0, -1.0],
                "length": length,
                "half_width": half_width,
                "omega": omega,
                "phase": phase,
                "amplitude": round(rng.uniform(0.5, 1.0), 3),
            })
    fastest = max_speed
    for entry in blades:
        if entry["kind"] == "pendulum":
            fastest = max(fastest, entry["length"] * entry["amplitude"] * entry["omega"])
        else:
            fastest = max(fastest, entry["length"] * entry["omega"])
    min_hw = min((entry["half_width"] for entry in blades), default=0.5)
    dt = round(min(0.02, 0.9 * min_hw / (4.0 * fastest)), 5)
    return {
        "schema": SCHEMA_VERSION,
        "name": f"gen-seed{seed}-blades{n_blades}",
        "start": [0.0, 0.0],
        "goal": [corridor, 0.0],
        "goal_tolerance": 0.25,
        "drone": {"radius": 0.2, "nominal_speed": 1.0, "max_speed": max_speed},
        "sensor_range": 6.0,
        "dt": dt,
        "max_steps": 20000,
        "blades": blades,
    }
