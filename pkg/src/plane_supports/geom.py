"""Planar geometry primitives: distance, orientation, segment conflicts.

Coordinates are plain floats. Predicates use an absolute tolerance on the
cross product instead of exact arithmetic, which is plenty for the
coordinate scales this package works at (generated instances live in a
100 x 100 square).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

# Absolute tolerance on cross products below which three points count as
# collinear. Instance feature sizes are O(1)..O(100), far above this.
ORIENT_EPS = 1e-9


class Orientation(IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"zero-length segment at {self.a}")


def distance(p: Point, q: Point) -> float:
    """Euclidean distance between two points."""
    return math.hypot(q.x - p.x, q.y - p.y)


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    """Turn direction of the path p -> q -> r (sign of (q-p) x (r-p))."""
    cross = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if cross > ORIENT_EPS:
        return Orientation.COUNTERCLOCKWISE
    if cross < -ORIENT_EPS:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def _strictly_between(a: Point, b: Point, p: Point) -> bool:
    # p is already known to be collinear with a-b; true iff p lies on the
    # closed segment but is not one of its endpoints.
    if p == a or p == b:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def segments_conflict(s1: Segment, s2: Segment) -> bool:
    """True iff the segments share any point that is not a common endpoint.

    Segments meeting only at one shared endpoint do not conflict. Collinear
    overlaps conflict, as does a segment whose interior passes through the
    other's endpoint.
    """
    a, b = s1.a, s1.b
    c, d = s2.a, s2.b
    if {a, b} == {c, d}:
        return True
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    # Proper crossing: each segment's endpoints strictly straddle the other.
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    # Touching cases: an endpoint in the other segment's interior. This also
    # covers every collinear overlap of non-identical segments.
    if o1 == Orientation.COLLINEAR and _strictly_between(a, b, c):
        return True
    if o2 == Orientation.COLLINEAR and _strictly_between(a, b, d):
        return True
    if o3 == Orientation.COLLINEAR and _strictly_between(c, d, a):
        return True
    if o4 == Orientation.COLLINEAR and _strictly_between(c, d, b):
        return True
    return False
