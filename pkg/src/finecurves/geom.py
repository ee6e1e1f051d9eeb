"""Simple closed polygonal curves over exact rationals: validation and
canonical form, intersection sets (isolated points and shared
segments), winding-based enclosure, and the arrangement wrapper.

A curve is stored in canonical form: counterclockwise, no repeated or
collinear-through vertices, rotated so the lexicographically least
vertex comes first. Canonical form makes point-set equality of curves
coincide with equality of vertex tuples.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .rationals import Q
from .geometry import (
    Point,
    candidate_pairs,
    collinear,
    lerp,
    on_segment,
    orient,
    param_point,
    polygon_area2,
    seg_intersect,
    sub,
    winding_number,
)
from .planar import CurveArrangement, FaceRecord


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class PolyCurve:
    """A simple closed polygonal curve with rational vertices."""

    vertices: tuple

    def __len__(self) -> int:
        return len(self.vertices)

    def segments(self):
        v = self.vertices
        m = len(v)
        return [(v[i], v[(i + 1) % m]) for i in range(m)]

    def point_at(self, param) -> Point:
        return param_point(self.vertices, param, closed=True)

    def contains_point_on_curve(self, p: Point) -> bool:
        return any(on_segment(p, a, b) for a, b in self.segments())

    def param_of_point(self, p: Point):
        """Cyclic parameter of a point lying on the curve."""
        v = self.vertices
        m = len(v)
        for i in range(m):
            a, b = v[i], v[(i + 1) % m]
            if on_segment(p, a, b):
                from .geometry import seg_param

                return i + seg_param(p, a, b)
        raise CurveError("point not on curve")

    def subpath(self, t0, t1) -> list[Point]:
        """Vertices of the arc from parameter t0 forward (ccw) to t1."""
        m = len(self.vertices)
        t0, t1 = t0 % m, t1 % m
        pts = [self.point_at(t0)]
        i = int(t0)
        while True:
            i = (i + 1) % m
            boundary = Q(i) if i != 0 else Q(m)
            # walk vertex by vertex until passing t1
            pts.append(self.vertices[i % m])
            lo = t0 if len(pts) == 2 else None
            # stop when t1 lies between the previous param and this vertex
            prev_param = (i - 1) % m
            if _cyclic_in(t0, t1, i, m):
                break
            if len(pts) > m + 2:
                break
        # Rebuild properly: simple explicit walk.
        return _walk_subpath(self.vertices, t0, t1)

    def area2(self):
        return polygon_area2(self.vertices)

    def __lt__(self, other):
        return self.vertices < other.vertices


def _cyclic_in(t0, t1, i, m):
    # helper retained for subpath; superseded by _walk_subpath
    return False


def _walk_subpath(verts, t0, t1) -> list[Point]:
    m = len(verts)
    t0, t1 = t0 % m, t1 % m
    pts = [param_point(verts, t0)]
    pos = t0
    guard = 0
    while True:
        next_vertex = (int(pos) + 1) % m
        next_param = Q(int(pos) + 1) % m
        # distance (cyclic, forward) from pos to t1 vs to next vertex
        d_target = (t1 - pos) % m
        d_vertex = (Q(int(pos) + 1) - pos) % m
        if d_vertex == 0:
            d_vertex = Q(m)
        if 0 < d_target <= d_vertex:
            pts.append(param_point(verts, t1))
            break
        pts.append(verts[next_vertex])
        pos = next_param
        guard += 1
        if guard > 2 * m + 2:
            raise CurveError("subpath walk failed")
    out = [pts[0]]
    for p in pts[1:]:
        if p != out[-1]:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Validation / canonical form
# ---------------------------------------------------------------------------

def canonical_vertices(raw) -> tuple:
    pts = [(Q(x), Q(y)) for x, y in raw]
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts = pts[:-1]
    # drop consecutive duplicates
    dedup = []
    for p in pts:
        if not dedup or p != dedup[-1]:
            dedup.append(p)
    if len(dedup) >= 2 and dedup[0] == dedup[-1]:
        dedup.pop()
    pts = dedup
    # drop collinear-through vertices until stable
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        m = len(pts)
        for i in range(m):
            a, b, c = pts[(i - 1) % m], pts[i], pts[(i + 1) % m]
            if collinear(a, b, c) and _strictly_between(a, b, c):
                changed = True
                continue
            out.append(b)
        pts = out
    if len(pts) < 3:
        raise CurveError("degenerate")
    if polygon_area2(pts) < 0:
        pts.reverse()
    start = min(range(len(pts)), key=lambda i: pts[i])
    pts = pts[start:] + pts[:start]
    return tuple(pts)


def _strictly_between(a, b, c) -> bool:
    return (
        min(a[0], c[0]) <= b[0] <= max(a[0], c[0])
        and min(a[1], c[1]) <= b[1] <= max(a[1], c[1])
        and (a != b and b != c)
        and ((c[0] - a[0]) * (b[0] - a[0]) + (c[1] - a[1]) * (b[1] - a[1])) >= 0
    )


def is_simple(verts: tuple) -> bool:
    m = len(verts)
    segs = [(verts[i], verts[(i + 1) % m]) for i in range(m)]
    for i, j in candidate_pairs(segs, segs):
        if j <= i:
            continue
        hit = seg_intersect(*segs[i], *segs[j])
        if hit is None:
            continue
        adjacent = (j == i + 1) or (i == 0 and j == m - 1)
        if not adjacent:
            return False
        if hit[0] != "point":
            return False
        shared = segs[i][1] if j == i + 1 else segs[i][0]
        if hit[1] != shared:
            return False
    return True


def validate_curve(raw, surface) -> PolyCurve:
    """Canonicalize a raw vertex sequence into a PolyCurve.

    Raises CurveError("degenerate" | "not simple" | "puncture on curve").
    """
    verts = canonical_vertices(raw)
    if not is_simple(verts):
        raise CurveError("not simple")
    curve = PolyCurve(verts)
    for p in surface.punctures:
        if curve.contains_point_on_curve(p):
            raise CurveError("puncture on curve")
    if polygon_area2(verts) == 0:
        raise CurveError("degenerate")
    return curve


# ---------------------------------------------------------------------------
# Intersection sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionSet:
    """a intersect b: isolated points plus maximal shared subpaths."""

    points: tuple  # sorted points
    segments: tuple  # tuple of vertex tuples (open polylines, or a full cycle)

    def is_empty(self) -> bool:
        return not self.points and not self.segments

    def is_single_interval(self) -> bool:
        """Exactly one shared segment with nonempty interior, nothing else."""
        return len(self.segments) == 1 and not self.points

    def total_components(self) -> int:
        return len(self.points) + len(self.segments)


def intersect(a: PolyCurve, b: PolyCurve) -> IntersectionSet:
    """Exact intersection of two curves as isolated points and maximal
    shared segments, organized along a's parameterization."""
    if a.vertices == b.vertices:
        return IntersectionSet(points=(), segments=(a.vertices + (a.vertices[0],),))
    sa = a.segments()
    sb = b.segments()
    m = len(sa)
    events = []  # (param0, param1) closed intervals on a
    for i, j in candidate_pairs(sa, sb):
        hit = seg_intersect(*sa[i], *sb[j])
        if hit is None:
            continue
        if hit[0] == "point":
            events.append((i + hit[2], i + hit[2]))
        else:
            _, t0, t1, _, _ = hit
            events.append((i + t0, i + t1))
    if not events:
        return IntersectionSet((), ())
    # Merge components on the cyclic parameter circle of a.
    events = sorted(set(events))
    merged = []
    for lo, hi in events:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    # cyclic wrap: an event touching param m wraps to 0
    if len(merged) > 1 and merged[0][0] == 0 and merged[-1][1] == m:
        merged[0][0] = merged[-1][0] - m
        merged.pop()
    points = []
    segments = []
    for lo, hi in merged:
        if hi - lo >= m:
            return IntersectionSet((), (a.vertices + (a.vertices[0],),))
        if lo == hi:
            points.append(a.point_at(lo))
        else:
            segments.append(tuple(_walk_subpath(a.vertices, lo, hi)))
    return IntersectionSet(tuple(sorted(points)), tuple(sorted(segments)))


def brute_force_crossing_points(a: PolyCurve, b: PolyCurve) -> set:
    """Oracle: all isolated intersection points by raw enumeration."""
    out = set()
    for s in a.segments():
        for t in b.segments():
            hit = seg_intersect(*s, *t)
            if hit is not None and hit[0] == "point":
                out.add(hit[1])
    return out


# ---------------------------------------------------------------------------
# Enclosure and arrangement
# ---------------------------------------------------------------------------

def enclosed_punctures(c: PolyCurve, surface) -> frozenset:
    """Finite punctures with odd winding number (the side of c away
    from infinity)."""
    out = set()
    for i, p in enumerate(surface.punctures):
        if winding_number(c.vertices, p) % 2 != 0:
            out.add(i)
    return frozenset(out)


def arrangement(curves, surface) -> CurveArrangement:
    """Faces of the complement of the curve union, with exact puncture
    contents and topology classes."""
    curves = list(curves)
    if not curves:
        raise CurveError("arrangement needs at least one curve")
    return CurveArrangement(curves, surface)
