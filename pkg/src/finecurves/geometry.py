"""Exact planar primitives: orientation tests, segment intersection,
winding numbers, polyline parameters, and clearance radii.

Points are plain (mpq, mpq) tuples; keeping them as tuples rather than
objects matters for the inner loops (pairwise segment tests dominate
every higher-level operation).

Conventions:
  * a "segment" is a pair of distinct points (p, q);
  * a directed line through (p, q) has the "left" side where
    orient(p, q, z) > 0;
  * polyline parameters are rationals i + t with i the segment index and
    t in [0, 1] the position within segment i.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import mpq

from .rationals import Q, q_sign, rational_sqrt_lower

Point = tuple  # (mpq, mpq)


def pt(x, y) -> Point:
    return (Q(x), Q(y))


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Point, b: Point) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def scale(a: Point, s) -> Point:
    return (a[0] * s, a[1] * s)


def cross(a: Point, b: Point):
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Point, b: Point):
    return a[0] * b[0] + a[1] * b[1]


def perp(a: Point) -> Point:
    """Rotate by +90 degrees (left normal of a direction)."""
    return (-a[1], a[0])


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the signed area of triangle (a, b, c)."""
    return q_sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def collinear(a: Point, b: Point, c: Point) -> bool:
    return orient(a, b, c) == 0


def lerp(a: Point, b: Point, t) -> Point:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def dist2(a: Point, b: Point):
    dx, dy = a[0] - b[0], a[1] - b[1]
    return dx * dx + dy * dy


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """Is p on the closed segment [a, b]?"""
    if orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def seg_param(p: Point, a: Point, b: Point):
    """Parameter t with p == lerp(a, b, t); requires p on line(a, b)."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx != 0:
        return (p[0] - a[0]) / dx
    return (p[1] - a[1]) / dy


# ---------------------------------------------------------------------------
# Segment / segment intersection
# ---------------------------------------------------------------------------

def seg_intersect(a: Point, b: Point, c: Point, d: Point):
    """Exact intersection of closed segments [a,b] and [c,d].

    Returns one of:
      None                          -- disjoint
      ("point", p, t_ab, t_cd)      -- a single point
      ("overlap", t0, t1, u0, u1)   -- a shared sub-segment; t* are
                                       parameters on [a,b], u* on [c,d],
                                       with t0 < t1. u0/u1 correspond to
                                       t0/t1 respectively (u may decrease).
    """
    r = sub(b, a)
    s = sub(d, c)
    denom = cross(r, s)
    qp = sub(c, a)
    if denom != 0:
        t = cross(qp, s) / denom
        u = cross(qp, r) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            return ("point", lerp(a, b, t), t, u)
        return None
    # Parallel.
    if cross(qp, r) != 0:
        return None
    # Collinear: project onto r.
    rr = dot(r, r)
    t_c = dot(sub(c, a), r) / rr
    t_d = dot(sub(d, a), r) / rr
    lo, hi = (t_c, t_d) if t_c <= t_d else (t_d, t_c)
    t0 = max(lo, Q(0))
    t1 = min(hi, Q(1))
    if t0 > t1:
        return None
    if t0 == t1:
        p = lerp(a, b, t0)
        return ("point", p, t0, seg_param(p, c, d))
    u0 = seg_param(lerp(a, b, t0), c, d)
    u1 = seg_param(lerp(a, b, t1), c, d)
    return ("overlap", t0, t1, u0, u1)


def seg_ray_intersect(a: Point, b: Point, base: Point, direction: Point):
    """Intersection of segment [a,b] with the ray base + t*direction, t >= 0.

    Same result shapes as seg_intersect; ray parameters are unbounded
    above. For overlaps, t* are segment parameters and u* ray parameters.
    """
    r = sub(b, a)
    denom = cross(r, direction)
    qp = sub(base, a)
    if denom != 0:
        t = cross(qp, direction) / denom
        u = cross(qp, r) / denom
        if 0 <= t <= 1 and u >= 0:
            return ("point", lerp(a, b, t), t, u)
        return None
    if cross(qp, r) != 0:
        return None
    dd = dot(direction, direction)
    u_a = dot(sub(a, base), direction) / dd
    u_b = dot(sub(b, base), direction) / dd
    (u_lo, t_lo), (u_hi, t_hi) = sorted([(u_a, Q(0)), (u_b, Q(1))])
    u0 = max(u_lo, Q(0))
    if u0 > u_hi:
        return None
    t_at = lambda u: t_lo + (t_hi - t_lo) * ((u - u_lo) / (u_hi - u_lo))
    if u0 == u_hi:
        return ("point", add(base, scale(direction, u0)), t_at(u0), u0)
    return ("overlap", t_at(u0), t_at(u_hi), u0, u_hi)


# ---------------------------------------------------------------------------
# Winding / containment
# ---------------------------------------------------------------------------

def winding_number(poly: Sequence[Point], q: Point) -> int:
    """Winding number of a closed polygon around q (q must avoid the polygon).

    Standard exact quadrant-free algorithm: count signed crossings of the
    upward vertical ray, with half-open edge rule so vertices on the ray
    are counted once.
    """
    wn = 0
    m = len(poly)
    for i in range(m):
        a = poly[i]
        b = poly[(i + 1) % m]
        if a[1] <= q[1]:
            if b[1] > q[1] and orient(a, b, q) > 0:
                wn += 1
        else:
            if b[1] <= q[1] and orient(a, b, q) < 0:
                wn -= 1
    return wn


def point_on_polyline(q: Point, pts: Sequence[Point], closed: bool) -> bool:
    m = len(pts) if closed else len(pts) - 1
    for i in range(m):
        if on_segment(q, pts[i], pts[(i + 1) % len(pts)]):
            return True
    return False


def polygon_area2(poly: Sequence[Point]):
    """Twice the signed area (positive for counterclockwise)."""
    total = Q(0)
    m = len(poly)
    for i in range(m):
        a = poly[i]
        b = poly[(i + 1) % m]
        total += cross(a, b)
    return total


# ---------------------------------------------------------------------------
# Angular order around a point
# ---------------------------------------------------------------------------

def pseudo_angle_key(d: Point):
    """Sort key giving counterclockwise angular order of directions,
    starting from the positive x-axis. Exact (no trig)."""
    x, y = d
    if y > 0 or (y == 0 and x > 0):
        half = 0
    else:
        half = 1
    return (half, _SlopeKey(d))


class _SlopeKey:
    __slots__ = ("d",)

    def __init__(self, d: Point):
        self.d = d

    def __lt__(self, other: "_SlopeKey") -> bool:
        # Within a half-plane, ccw order is decreasing cross product sign.
        return cross(self.d, other.d) > 0

    def __eq__(self, other) -> bool:
        return cross(self.d, other.d) == 0 and dot(self.d, other.d) > 0


def same_direction(a: Point, b: Point) -> bool:
    return cross(a, b) == 0 and dot(a, b) > 0


# ---------------------------------------------------------------------------
# Distances and clearances
# ---------------------------------------------------------------------------

def point_seg_dist2(p: Point, a: Point, b: Point):
    r = sub(b, a)
    rr = dot(r, r)
    if rr == 0:
        return dist2(p, a)
    t = dot(sub(p, a), r) / rr
    if t <= 0:
        return dist2(p, a)
    if t >= 1:
        return dist2(p, b)
    return dist2(p, lerp(a, b, t))


def seg_seg_dist2(a: Point, b: Point, c: Point, d: Point):
    if seg_intersect(a, b, c, d) is not None:
        return Q(0)
    return min(
        point_seg_dist2(a, c, d),
        point_seg_dist2(b, c, d),
        point_seg_dist2(c, a, b),
        point_seg_dist2(d, a, b),
    )


def clearance_radius(
    segments: Sequence[tuple[Point, Point]],
    points: Iterable[Point] = (),
    skip_touching: bool = True,
) -> mpq:
    """A rational radius safely below half the smallest feature distance.

    Considers segment/segment distances (pairs at distance zero are
    skipped when skip_touching, so adjacency in polylines is harmless),
    point/segment distances and segment lengths. Raises if no positive
    distance exists at all.
    """
    best = None

    def consider(d2):
        nonlocal best
        if d2 > 0 and (best is None or d2 < best):
            best = d2

    segs = list(segments)
    for i, (a, b) in enumerate(segs):
        consider(dist2(a, b))
        for c, d in segs[i + 1 :]:
            consider(seg_seg_dist2(a, b, c, d))
    for p in points:
        for a, b in segs:
            consider(point_seg_dist2(p, a, b))
    if best is None:
        raise ValueError("no positive clearance in configuration")
    return rational_sqrt_lower(best) / 4


# ---------------------------------------------------------------------------
# Bounding-box sweep for candidate segment pairs
# ---------------------------------------------------------------------------

def candidate_pairs(
    segs_a: Sequence[tuple[Point, Point]],
    segs_b: Sequence[tuple[Point, Point]],
) -> Iterable[tuple[int, int]]:
    """Indices (i, j) whose bounding boxes overlap; sort-and-sweep on x."""
    events = []
    for i, (p, q) in enumerate(segs_a):
        events.append((min(p[0], q[0]), 0, i))
    for j, (p, q) in enumerate(segs_b):
        events.append((min(p[0], q[0]), 1, j))
    events.sort(key=lambda e: e[0])
    xmax_a = [max(p[0], q[0]) for p, q in segs_a]
    xmax_b = [max(p[0], q[0]) for p, q in segs_b]
    ybounds_a = [(min(p[1], q[1]), max(p[1], q[1])) for p, q in segs_a]
    ybounds_b = [(min(p[1], q[1]), max(p[1], q[1])) for p, q in segs_b]
    active_a: list[int] = []
    active_b: list[int] = []
    out = []
    for x, side, idx in events:
        if side == 0:
            active_b = [j for j in active_b if xmax_b[j] >= x]
            lo, hi = ybounds_a[idx]
            for j in active_b:
                blo, bhi = ybounds_b[j]
                if bhi >= lo and blo <= hi:
                    out.append((idx, j))
            active_a.append(idx)
        else:
            active_a = [i for i in active_a if xmax_a[i] >= x]
            lo, hi = ybounds_b[idx]
            for i in active_a:
                alo, ahi = ybounds_a[i]
                if ahi >= lo and alo <= hi:
                    out.append((i, idx))
            active_b.append(idx)
    return out


# ---------------------------------------------------------------------------
# Polyline parameter helpers (cyclic parameters i + t on vertex lists)
# ---------------------------------------------------------------------------

def param_point(pts: Sequence[Point], param, closed: bool = True) -> Point:
    m = len(pts) if closed else len(pts) - 1
    if closed:
        param = param % m
    i = int(param)
    if i == m:
        i -= 1
    t = param - i
    a = pts[i]
    b = pts[(i + 1) % len(pts)]
    return lerp(a, b, t)


def cyclic_between(lo, x, hi, period) -> bool:
    """Is x in the cyclic interval (lo, hi) of given period?"""
    lo, x, hi = lo % period, x % period, hi % period
    if lo < hi:
        return lo < x < hi
    return x > lo or x < hi
