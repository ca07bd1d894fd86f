"""Planar vector and angle helpers for the blade-field navigator.

Angles are unsigned and live in [0, pi].  Any sidedness a caller needs is
carried by explicit direction vectors at the call site, so the comparisons
in the steering rules stay exactly as written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


class DegenerateGeometryError(ValueError):
    """An angle or direction was requested for a zero-length vector."""


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Vec2 components must be finite, got ({self.x!r}, {self.y!r})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise DegenerateGeometryError("cannot normalize a zero vector")
        return Vec2(self.x / n, self.y / n)

    def perp(self) -> "Vec2":
        # counter-clockwise quarter turn
        return Vec2(-self.y, self.x)

    def rotated(self, angle: float) -> "Vec2":
        c, s = math.cos(angle), math.sin(angle)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)


def sin_between(u: Vec2, v: Vec2) -> float:
    """Sine of the unsigned angle between two directions, in [0, 1].

    Symmetric in its arguments and invariant to positive rescaling of
    either one.
    """
    nu = u.norm()
    nv = v.norm()
    if nu == 0.0:
        raise DegenerateGeometryError("sin_between: first direction has zero length")
    if nv == 0.0:
        raise DegenerateGeometryError("sin_between: second direction has zero length")
    s = abs(u.cross(v)) / (nu * nv)
    return min(1.0, max(0.0, s))


def angle_at(vertex: Vec2, p: Vec2, q: Vec2) -> float:
    """Interior angle between rays vertex->p and vertex->q, in [0, pi]."""
    rp = p - vertex
    rq = q - vertex
    if rp.norm() == 0.0:
        raise DegenerateGeometryError("angle_at: p coincides with the vertex")
    if rq.norm() == 0.0:
        raise DegenerateGeometryError("angle_at: q coincides with the vertex")
    return math.atan2(abs(rp.cross(rq)), rp.dot(rq))


def point_segment_distance(p: Vec2, s1: Vec2, s2: Vec2) -> float:
    """Euclidean distance from p to the closest point of the closed segment.

    A degenerate segment (s1 == s2) is treated as a point.
    """
    return (p - closest_point_on_segment(p, s1, s2)).norm()


def closest_point_on_segment(p: Vec2, s1: Vec2, s2: Vec2) -> Vec2:
    d = s2 - s1
    dd = d.dot(d)
    if dd == 0.0:
        return s1
    t = (p - s1).dot(d) / dd
    t = min(1.0, max(0.0, t))
    return s1 + d * t


_EPS = 1e-12


def segment_intersection(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> Optional[Vec2]:
    """Intersection point of two closed segments, or None when disjoint.

    For a collinear overlap the overlap endpoint nearest a1 is returned,
    which keeps the result deterministic.
    """
    da = a2 - a1
    db = b2 - b1
    scale = max(da.norm(), db.norm(), 1.0)
    # degenerate segments are points: containment test, not line algebra
    if da.norm() <= _EPS * scale:
        return a1 if point_segment_distance(a1, b1, b2) <= _EPS * scale else None
    if db.norm() <= _EPS * scale:
        return b1 if point_segment_distance(b1, a1, a2) <= _EPS * scale else None
    denom = da.cross(db)
    offset = b1 - a1
    if abs(denom) > _EPS * scale * scale:
        t = offset.cross(db) / denom
        s = offset.cross(da) / denom
        if -_EPS <= t <= 1.0 + _EPS and -_EPS <= s <= 1.0 + _EPS:
            t = min(1.0, max(0.0, t))
            return a1 + da * t
        return None

    # Parallel. Not collinear -> disjoint.
    if abs(offset.cross(da)) > _EPS * scale * scale and abs(offset.cross(db)) > _EPS * scale * scale:
        return None

    # Collinear: project everything onto the longer segment's axis.
    axis = da if da.norm() >= db.norm() else db
    if axis.norm() == 0.0:
        # both segments are points
        return a1 if (a1 - b1).norm() <= _EPS else None
    u = axis.unit()
    ta1, ta2 = a1.dot(u), a2.dot(u)
    tb1, tb2 = b1.dot(u), b2.dot(u)
    lo = max(min(ta1, ta2), min(tb1, tb2))
    hi = min(max(ta1, ta2), max(tb1, tb2))
    if lo > hi + _EPS * scale:
        return None
    # offset of the common line from the origin, perpendicular to u
    base = a1 - u * a1.dot(u)
    p_lo = base + u * lo
    p_hi = base + u * hi
    return p_lo if (p_lo - a1).norm() <= (p_hi - a1).norm() else p_hi


def segment_segment_distance(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> float:
    """Minimum distance between two closed segments."""
    if segment_intersection(a1, a2, b1, b2) is not None:
        return 0.0
    return min(
        point_segment_distance(a1, b1, b2),
        point_segment_distance(a2, b1, b2),
        point_segment_distance(b1, a1, a2),
        point_segment_distance(b2, a1, a2),
    )
