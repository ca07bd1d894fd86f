"""Trajectory artifacts: CSV log, SVG plot, metrics document."""

from __future__ import annotations

import math
from typing import List, Optional

import yaml

from .geom import Vec2
from .scenario import Scenario
from .sim import Metrics, PolicyComparison, TrajectoryLog

CSV_HEADER = "t,x,y,vx,vy,action,leg,clearance,delta"


def _num(x: float) -> str:
    return format(x, ".9g")


def export_csv(log: TrajectoryLog, path: str) -> None:
    """One row per step; floats with 9 significant digits; delta blank on
    non-deciding steps."""
    lines = [CSV_HEADER]
    for s in log.steps:
        clearance = _num(s.clearance) if math.isfinite(s.clearance) else "inf"
        delta = _num(s.delta) if s.delta is not None else ""
        lines.append(
            f"{_num(s.t)},{_num(s.position.x)},{_num(s.position.y)},"
            f"{_num(s.velocity.x)},{_num(s.velocity.y)},{s.action},{s.leg_index},"
            f"{clearance},{delta}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def metrics_to_mapping(m: Metrics) -> dict:
    return {
        "outcome": m.outcome,
        "path_length": m.path_length,
        "ideal_length": m.ideal_length,
        "time_to_goal": m.time_to_goal,
        "min_clearance": m.min_clearance if math.isfinite(m.min_clearance) else None,
        "replan_count": m.replan_count,
        "boost_time_fraction": m.boost_time_fraction,
    }


def export_metrics(m: Metrics, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        yaml.safe_dump(metrics_to_mapping(m), fh, sort_keys=False)


def export_comparison(c: PolicyComparison, path: str) -> None:
    doc = {
        "fuzzy": metrics_to_mapping(c.fuzzy),
        "baseline": metrics_to_mapping(c.baseline),
        "path_length_ratio": c.path_length_ratio,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def export_svg(log: TrajectoryLog, scenario: Scenario, path: str) -> None:
    """Standalone SVG: blade sweep envelopes (grey), the ideal path as a bold
    line, the flown path as a dashed polyline, start/goal markers.

    World-to-screen transform: uniform scale to a 800px-wide viewport with a
    5% margin, y axis flipped (screen y = top - scale*world_y).
    """
    xs = [scenario.start.x, scenario.goal.x] + [s.position.x for s in log.steps]
    ys = [scenario.start.y, scenario.goal.y] + [s.position.y for s in log.steps]
    envelopes = [_envelope_points(scenario, i) for i in range(len(scenario.blades))]
    for pts in envelopes:
        xs.extend(p.x for p in pts)
        ys.extend(p.y for p in pts)
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    span_x = max(max_x - min_x, 1e-6)
    span_y = max(max_y - min_y, 1e-6)
    width = 800.0
    scale = width * 0.9 / span_x
    height = span_y * scale / 0.9
    margin_x = width * 0.05
    margin_y = height * 0.05
    height = height + 2 * margin_y

    def to_screen(p: Vec2) -> str:
        sx = margin_x + (p.x - min_x) * scale
        sy = height - margin_y - (p.y - min_y) * scale
        return f"{sx:.2f},{sy:.2f}"

    parts: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for pts in envelopes:
        poly = " ".join(to_screen(p) for p in pts)
        parts.append(f'<polygon points="{poly}" fill="#c8c8c8" stroke="#888888" stroke-width="1"/>')
    parts.append(
        f'<line x1="{to_screen(scenario.start).split(",")[0]}" '
        f'y1="{to_screen(scenario.start).split(",")[1]}" '
        f'x2="{to_screen(scenario.goal).split(",")[0]}" '
        f'y2="{to_screen(scenario.goal).split(",")[1]}" '
        'stroke="black" stroke-width="3"/>'
    )
    actual = [scenario.start] + [s.position for s in log.steps]
    poly = " ".join(to_screen(p) for p in actual)
    parts.append(
        f'<polyline points="{poly}" fill="none" stroke="#cc3333" '
        'stroke-width="2" stroke-dasharray="8 5"/>'
    )
    r = max(4.0, scenario.drone_radius * scale)
    sx, sy = to_screen(scenario.start).split(",")
    gx, gy = to_screen(scenario.goal).split(",")
    parts.append(f'<circle cx="{sx}" cy="{sy}" r="{r:.1f}" fill="#3366cc"/>')
    parts.append(f'<circle cx="{gx}" cy="{gy}" r="{r:.1f}" fill="none" stroke="#33aa33" stroke-width="2"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def _envelope_points(scenario: Scenario, index: int) -> List[Vec2]:
    """Polygon outlining everywhere a blade body can reach.

    Pendulum: the swept circular sector (anchor plus the tip arc, padded by
    half_width).  Slider: the swept rectangle along the travel axis.
    """
    blade = scenario.blades[index]
    axis = blade.axis.unit()
    if blade.kind == "pendulum":
        pts = [blade.anchor]
        n = 32
        reach = blade.length + blade.half_width
        for i in range(n + 1):
            theta = -blade.amplitude + 2.0 * blade.amplitude * i / n
            pts.append(blade.anchor + axis.rotated(theta) * reach)
        return pts
    along = axis * (blade.length + blade.half_width)
    side = axis.perp() * blade.half_width
    c = blade.anchor
    return [c - along - side, c + along - side, c + along + side, c - along + side]
