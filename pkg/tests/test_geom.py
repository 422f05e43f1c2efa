import random
from fractions import Fraction

import pytest

from plane_supports.geom import (Orientation, Point, Segment, distance,
                                 orientation, segments_conflict)


def seg(ax, ay, bx, by):
    return Segment(Point(ax, ay), Point(bx, by))


def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        Point(float("nan"), 0.0)
    with pytest.raises(ValueError):
        Point(0.0, float("inf"))


def test_segment_rejects_zero_length():
    with pytest.raises(ValueError):
        Segment(Point(1, 2), Point(1, 2))


def test_orientation_examples():
    assert orientation(Point(0, 0), Point(1, 0), Point(2, 0)) is Orientation.COLLINEAR
    assert orientation(Point(0, 0), Point(1, 0), Point(1, 1)) is Orientation.COUNTERCLOCKWISE
    assert orientation(Point(0, 0), Point(1, 0), Point(1, -1)) is Orientation.CLOCKWISE


def test_orientation_antisymmetric_in_last_two_args():
    rng = random.Random(7)
    for _ in range(300):
        p, q, r = (Point(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(3))
        assert orientation(p, q, r) == -orientation(p, r, q)


def test_distance_examples():
    assert distance(Point(0, 0), Point(3, 4)) == 5
    assert distance(Point(0, 0), Point(0, 0)) == 0
    assert distance(Point(0, 0), Point(1, 1)) == pytest.approx(2 ** 0.5)


def test_distance_triangle_inequality():
    rng = random.Random(11)
    for _ in range(300):
        p, q, r = (Point(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(3))
        assert distance(p, r) <= distance(p, q) + distance(q, r) + 1e-9


def test_conflict_examples():
    # X-configuration crosses
    assert segments_conflict(seg(0, 0, 1, 1), seg(0, 1, 1, 0))
    # shared endpoint only: no conflict
    assert not segments_conflict(seg(0, 0, 1, 0), seg(0, 0, 0, 1))
    # collinear overlap conflicts
    assert segments_conflict(seg(0, 0, 2, 0), seg(1, 0, 3, 0))


def test_conflict_touch_and_overlap_cases():
    # interior of one passes through the other's endpoint
    assert segments_conflict(seg(0, 0, 2, 0), seg(1, 0, 1, 1))
    # collinear, touching at one endpoint only: no conflict
    assert not segments_conflict(seg(0, 0, 1, 0), seg(1, 0, 2, 0))
    # collinear sharing an endpoint but overlapping
    assert segments_conflict(seg(0, 0, 2, 0), seg(0, 0, 1, 0))
    # identical segments fully overlap
    assert segments_conflict(seg(0, 0, 1, 1), seg(0, 0, 1, 1))
    # containment
    assert segments_conflict(seg(0, 0, 3, 0), seg(1, 0, 2, 0))
    # disjoint parallel
    assert not segments_conflict(seg(0, 0, 1, 0), seg(0, 1, 1, 1))


def _conflict_oracle(s1, s2):
    """Independent exact predicate on rational coordinates.

    Intersects the two supporting lines with Fraction arithmetic and checks
    the meeting set against the 'shared point that is no common endpoint'
    definition; collinear segments are compared as 1-d intervals.
    """
    a = (Fraction(s1.a.x), Fraction(s1.a.y))
    b = (Fraction(s1.b.x), Fraction(s1.b.y))
    c = (Fraction(s2.a.x), Fraction(s2.a.y))
    d = (Fraction(s2.b.x), Fraction(s2.b.y))
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    denom = r[0] * s[1] - r[1] * s[0]
    ac = (c[0] - a[0], c[1] - a[1])
    cross_ac_r = ac[0] * r[1] - ac[1] * r[0]
    endpoints1 = {a, b}
    endpoints2 = {c, d}
    if denom == 0:
        if cross_ac_r != 0:
            return False  # parallel, never meet
        # collinear: project on the dominant axis and intersect intervals
        axis = 0 if r[0] != 0 else 1
        i1 = sorted((a[axis], b[axis]))
        i2 = sorted((c[axis], d[axis]))
        lo, hi = max(i1[0], i2[0]), min(i1[1], i2[1])
        if lo > hi:
            return False
        if lo < hi:
            return True  # overlap of positive length
        # single touching point: conflict unless it is an endpoint of both
        shared = [p for p in endpoints1 & endpoints2 if p[axis] == lo]
        return not shared
    t = (ac[0] * s[1] - ac[1] * s[0]) / denom
    u = cross_ac_r / denom
    if not (0 <= t <= 1 and 0 <= u <= 1):
        return False
    point = (a[0] + t * r[0], a[1] + t * r[1])
    return not (point in endpoints1 and point in endpoints2)


def test_conflict_matches_independent_oracle():
    rng = random.Random(23)
    cases = 0
    while cases < 1500:
        coords = [rng.randint(0, 7) for _ in range(8)]
        try:
            s1 = seg(coords[0], coords[1], coords[2], coords[3])
            s2 = seg(coords[4], coords[5], coords[6], coords[7])
        except ValueError:
            continue
        cases += 1
        assert segments_conflict(s1, s2) == _conflict_oracle(s1, s2), (s1, s2)


def test_conflict_symmetry():
    rng = random.Random(31)
    done = 0
    while done < 500:
        coords = [rng.uniform(0, 10) for _ in range(8)]
        s1 = seg(coords[0], coords[1], coords[2], coords[3])
        s2 = seg(coords[4], coords[5], coords[6], coords[7])
        assert segments_conflict(s1, s2) == segments_conflict(s2, s1)
        done += 1
