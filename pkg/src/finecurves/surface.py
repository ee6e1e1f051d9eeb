"""Models of the punctured sphere and the punctured disk.

The sphere with n punctures is modeled as the rational plane plus one
puncture at infinity. The n-1 finite punctures sit at exact rational
points on the unit circle, approximately regularly spaced; rational
points on a circle are automatically in strictly convex position, which
keeps every triangulation construction below trivially valid.

Two reference triangulations are built here, both with punctures as
ideal vertices:

  * the standard one (finite punctures + infinity): convex-hull rim, a
    diagonal fan from puncture 0, and one radial ray from each puncture
    out to infinity;
  * a fill-in variant without the infinity vertex, used when testing
    homotopy "with a puncture filled": the outer disk is fanned from
    puncture 0 by polyline hooks routed around the outside.

Everything is validated exactly at construction (Euler counts, pairwise
edge disjointness away from shared endpoints).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .rationals import Q, q_str
from .geometry import (
    Point,
    add,
    cross,
    dist2,
    on_segment,
    orient,
    pt,
    scale,
    seg_intersect,
    seg_ray_intersect,
    sub,
)

INF = -1  # vertex id of the puncture at infinity


class SurfaceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Rational points on the unit circle
# ---------------------------------------------------------------------------

_AXIS_POINTS = {
    Fraction(0): (Q(1), Q(0)),
    Fraction(1, 4): (Q(0), Q(1)),
    Fraction(1, 2): (Q(-1), Q(0)),
    Fraction(3, 4): (Q(0), Q(-1)),
}


def unit_direction(turns: Fraction) -> Point:
    """An exact rational point on the unit circle near angle 2*pi*turns.

    The tangent half-angle parametrization keeps the point exactly on
    the circle; the approximation only nudges the angle. Denominators
    stay below 10**6.
    """
    turns = Fraction(turns) % 1
    if turns in _AXIS_POINTS:
        return _AXIS_POINTS[turns]
    if Fraction(1, 4) < turns < Fraction(3, 4):
        x, y = unit_direction(turns - Fraction(1, 2))
        return (-x, -y)
    theta = 2.0 * math.pi * float(turns)
    t = Fraction(math.tan(theta / 2.0)).limit_denominator(300)
    a, b = t.numerator, t.denominator
    den = a * a + b * b
    return (Q(b * b - a * a, den), Q(2 * a * b, den))


def circle_layout(count: int, turn_offset: Fraction = Fraction(0)) -> list[Point]:
    """count distinct rational circle points, angularly ordered."""
    pts = [unit_direction(Fraction(k, count) + turn_offset) for k in range(count)]
    if len(set(pts)) != count:
        raise SurfaceError("circle layout degenerated; punctures collide")
    return pts


def gap_direction(punctures: list[Point], i: int, sub_num: int = 1, sub_den: int = 2) -> Point:
    """Rational unit vector in the angular gap after puncture i.

    sub_num/sub_den positions the direction within the gap (1/2 = middle).
    The plane angle is recovered in floating point only to choose the
    approximation target; the output is an exact circle point, and its
    strict angular position is verified by the callers that care.
    """
    m = len(punctures)
    a = math.atan2(float(punctures[i][1]), float(punctures[i][0]))
    b = math.atan2(float(punctures[(i + 1) % m][1]), float(punctures[(i + 1) % m][0]))
    if b <= a:
        b += 2 * math.pi
    frac = a + (b - a) * sub_num / sub_den
    return unit_direction(Fraction(frac / (2 * math.pi)).limit_denominator(3000))


# ---------------------------------------------------------------------------
# Triangulation structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TriEdge:
    """An ideal edge: a polyline between punctures, possibly ending in a
    ray to the puncture at infinity. pieces are ("seg", a, b) or
    ("ray", base, dir); a ray can only be the final piece."""

    index: int
    tail: int
    head: int
    pieces: tuple

    def direction_at(self, piece_idx: int) -> Point:
        piece = self.pieces[piece_idx]
        if piece[0] == "seg":
            return sub(piece[2], piece[1])
        return piece[2]

    def point_at(self, piece_idx: int, t) -> Point:
        piece = self.pieces[piece_idx]
        if piece[0] == "seg":
            return (
                piece[1][0] + (piece[2][0] - piece[1][0]) * t,
                piece[1][1] + (piece[2][1] - piece[1][1]) * t,
            )
        return add(piece[1], scale(piece[2], t))

    def bounded_segments(self, reach) -> list[tuple[Point, Point]]:
        """Pieces as segments, rays truncated at parameter reach."""
        out = []
        for piece in self.pieces:
            if piece[0] == "seg":
                out.append((piece[1], piece[2]))
            else:
                out.append((piece[1], add(piece[1], scale(piece[2], reach))))
        return out


@dataclass(frozen=True)
class TriFace:
    """An ideal triangle: vertices are puncture ids (INF allowed),
    edges[k] is the edge opposite vertices[k]."""

    index: int
    vertices: tuple
    edges: tuple

    def corner_edges(self, k: int) -> tuple[int, int]:
        """The two edges meeting at vertices[k] (i.e. not edges[k])."""
        return (self.edges[(k + 1) % 3], self.edges[(k + 2) % 3])


@dataclass(frozen=True)
class Triangulation:
    edges: tuple
    faces: tuple
    has_infinity: bool

    def edge_count(self) -> int:
        return len(self.edges)

    def validate(self, punctures: list[Point]) -> None:
        """Exact structural checks: Euler count, edges meet only at
        shared puncture endpoints, no edge passes through a puncture."""
        n_vertices = len(punctures) + (1 if self.has_infinity else 0)
        if len(self.edges) != 3 * n_vertices - 6:
            raise SurfaceError(
                f"edge count {len(self.edges)} != {3 * n_vertices - 6}"
            )
        if len(self.faces) != 2 * n_vertices - 4:
            raise SurfaceError("face count mismatch")
        reach = Q(64)
        segs = [e.bounded_segments(reach) for e in self.edges]
        for i, e in enumerate(self.edges):
            for a, b in segs[i]:
                for p_idx, p in enumerate(punctures):
                    if p_idx in (e.tail, e.head):
                        continue
                    if on_segment(p, a, b):
                        raise SurfaceError(
                            f"edge {i} passes through puncture {p_idx}"
                        )
        for i in range(len(self.edges)):
            for j in range(i + 1, len(self.edges)):
                allowed = _shared_endpoints(self.edges[i], self.edges[j], punctures)
                for a, b in segs[i]:
                    for c, d in segs[j]:
                        hit = seg_intersect(a, b, c, d)
                        if hit is None:
                            continue
                        if hit[0] == "overlap":
                            raise SurfaceError(f"edges {i},{j} overlap")
                        if hit[1] not in allowed:
                            raise SurfaceError(
                                f"edges {i},{j} cross at {hit[1]}"
                            )
        # Adjacent pieces within one edge may only share their joint.
        for i, e in enumerate(self.edges):
            ss = segs[i]
            for a in range(len(ss)):
                for b in range(a + 1, len(ss)):
                    hit = seg_intersect(*ss[a], *ss[b])
                    if hit is None:
                        continue
                    if b == a + 1 and hit[0] == "point" and hit[1] == ss[a][1]:
                        continue
                    raise SurfaceError(f"edge {i} self-intersects")


def _shared_endpoints(e1: TriEdge, e2: TriEdge, punctures: list[Point]) -> set:
    shared = set()
    for v in (e1.tail, e1.head):
        if v != INF and v in (e2.tail, e2.head):
            shared.add(punctures[v])
    return shared


# ---------------------------------------------------------------------------
# Triangulation builders
# ---------------------------------------------------------------------------

def _rim_and_fan(punctures: list[Point]) -> tuple[list, list]:
    """Hull rim edges and the inner diagonal fan from puncture 0.

    Returns (edge specs, inner face specs) where an edge spec is
    (tail, head, pieces) and a face spec is (vertices, edge keys); edge
    keys are resolved to indices by the caller.
    """
    m = len(punctures)
    edges = []
    for i in range(m):
        edges.append(("rim", i, (i + 1) % m, (("seg", punctures[i], punctures[(i + 1) % m]),)))
    for i in range(2, m - 1):
        edges.append(("fan", 0, i, (("seg", punctures[0], punctures[i]),)))
    faces = []
    for i in range(1, m - 1):
        left = ("fan", 0, i) if i >= 2 else ("rim", 0, 1)
        right = ("fan", 0, i + 1) if i + 1 <= m - 2 else ("rim", m - 1, 0)
        faces.append(((0, i, i + 1), (("rim", i, i + 1), right, left)))
    return edges, faces


def build_standard_triangulation(punctures: list[Point]) -> Triangulation:
    """Rim + inner fan + radial rays to the puncture at infinity."""
    m = len(punctures)
    edge_specs, inner_faces = _rim_and_fan(punctures)
    for i in range(m):
        edge_specs.append(("ray", i, INF, (("ray", punctures[i], punctures[i]),)))
    index = {}
    edges = []
    for spec in edge_specs:
        kind, tail, head, pieces = spec
        idx = len(edges)
        index[(kind, tail, head)] = idx
        index[(kind, head, tail)] = idx
        edges.append(TriEdge(idx, tail, head, tuple(pieces)))
    faces = []
    for verts, ekeys in inner_faces:
        faces.append(TriFace(len(faces), verts, tuple(index[k] for k in ekeys)))
    for i in range(m):
        j = (i + 1) % m
        faces.append(
            TriFace(
                len(faces),
                (i, j, INF),
                (
                    index[("ray", j, INF)],
                    index[("ray", i, INF)],
                    index[("rim", i, j)],
                ),
            )
        )
        # edge opposite vertex i is the ray at j, etc.; fix ordering:
        faces[-1] = TriFace(
            faces[-1].index,
            (i, j, INF),
            (index[("ray", j, INF)], index[("ray", i, INF)], index[("rim", i, j)]),
        )
    tri = Triangulation(tuple(edges), tuple(faces), True)
    tri.validate(punctures)
    return tri


def build_filled_triangulation(punctures: list[Point]) -> Triangulation:
    """Triangulation of the sphere whose only ideal vertices are the
    given punctures: rim + inner fan + outer hooks from puncture 0.

    Hook i runs from puncture 0 outward, counterclockwise above the
    intermediate punctures at radius R_i, and dives radially into
    puncture i. Radii grow geometrically so outer hooks clear inner
    ones; validate() certifies the result exactly.
    """
    m = len(punctures)
    if m < 4:
        raise SurfaceError("filled triangulation needs at least 4 punctures")
    edge_specs, inner_faces = _rim_and_fan(punctures)

    exit_dir = gap_direction(punctures, 0, 1, 4)
    waypoints = []
    for i in range(m):
        waypoints.append(punctures[i])
        waypoints.append(gap_direction(punctures, i))
    # waypoints[2k] is puncture k's direction, ordered ccw from p0.

    for i in range(2, m - 1):
        radius = Q(2) * Q(11, 10) ** (i - 2)
        path = [punctures[0], scale(exit_dir, radius)]
        for w in waypoints[1 : 2 * i]:
            path.append(scale(w, radius))
        path.append(punctures[i])
        pieces = tuple(
            ("seg", path[k], path[k + 1]) for k in range(len(path) - 1)
        )
        edge_specs.append(("hook", 0, i, pieces))

    index = {}
    edges = []
    for kind, tail, head, pieces in edge_specs:
        idx = len(edges)
        index[(kind, tail, head)] = idx
        index[(kind, head, tail)] = idx
        edges.append(TriEdge(idx, tail, head, tuple(pieces)))
    faces = []
    for verts, ekeys in inner_faces:
        faces.append(TriFace(len(faces), verts, tuple(index[k] for k in ekeys)))
    for i in range(1, m - 1):
        left = ("hook", 0, i) if i >= 2 else ("rim", 0, 1)
        right = ("hook", 0, i + 1) if i + 1 <= m - 2 else ("rim", m - 1, 0)
        faces.append(
            TriFace(
                len(faces),
                (0, i, i + 1),
                (index[("rim", i, i + 1)], index[right], index[left]),
            )
        )
    tri = Triangulation(tuple(edges), tuple(faces), False)
    tri.validate(punctures)
    return tri


# ---------------------------------------------------------------------------
# Surface model
# ---------------------------------------------------------------------------

@dataclass
class SurfaceModel:
    """The sphere with n punctures: n-1 finite punctures plus infinity."""

    n: int
    punctures: list
    triangulation: Triangulation = field(repr=False)
    _filled_cache: dict = field(default_factory=dict, repr=False)
    _coords_cache: dict = field(default_factory=dict, repr=False)

    @property
    def finite_count(self) -> int:
        return len(self.punctures)

    def puncture_labels(self) -> list[str]:
        return [f"p{i}" for i in range(self.finite_count)] + ["inf"]

    def filled_model(self, puncture: int) -> "SurfaceModel":
        """The surface with one puncture removed from the puncture set.

        puncture is a finite index or INF. Curves keep their geometry;
        only the reference triangulation (and thus homotopy) changes.
        """
        if puncture in self._filled_cache:
            return self._filled_cache[puncture]
        if puncture == INF:
            tri = build_filled_triangulation(self.punctures)
            model = SurfaceModel(self.n - 1, list(self.punctures), tri)
        else:
            remaining = [p for i, p in enumerate(self.punctures) if i != puncture]
            tri = build_standard_triangulation(remaining)
            model = SurfaceModel(self.n - 1, remaining, tri)
        self._filled_cache[puncture] = model
        return model

    def __hash__(self):
        return hash((self.n, tuple(self.punctures)))

    def __eq__(self, other):
        return (
            isinstance(other, SurfaceModel)
            and self.n == other.n
            and self.punctures == other.punctures
        )


def make_surface(n: int) -> SurfaceModel:
    """The default n-punctured sphere model.

    n-1 finite punctures at rational points on the unit circle plus the
    puncture at infinity.
    """
    if n < 5:
        raise SurfaceError("too few punctures: no essential curve machinery")
    punctures = circle_layout(n - 1)
    tri = build_standard_triangulation(punctures)
    return SurfaceModel(n, punctures, tri)


def surface_from_punctures(punctures: list[Point]) -> SurfaceModel:
    """A sphere model with explicitly given finite punctures.

    The punctures must be distinct rational points on the unit circle
    (this keeps convex position and the triangulation builders valid).
    """
    if len(punctures) < 4:
        raise SurfaceError("too few punctures: no essential curve machinery")
    for p in punctures:
        if p[0] * p[0] + p[1] * p[1] != 1:
            raise SurfaceError("explicit punctures must lie on the unit circle")
    if len(set(punctures)) != len(punctures):
        raise SurfaceError("punctures must be distinct")
    ordered = sorted(punctures, key=_angle_key)
    tri = build_standard_triangulation(ordered)
    return SurfaceModel(len(punctures) + 1, ordered, tri)


def _angle_key(p: Point):
    from .geometry import pseudo_angle_key

    return pseudo_angle_key(p)


# ---------------------------------------------------------------------------
# Disk model
# ---------------------------------------------------------------------------

@dataclass
class DiskModel:
    """The disk with n punctures: boundary polygon at radius 3 with the
    punctures on the unit circle inside, plus the base arc v0 cutting
    off the first two punctures."""

    n: int
    punctures: list
    boundary: list
    base_arc: list
    _sphere_cache: object = field(default=None, repr=False)

    def boundary_segments(self) -> list[tuple[Point, Point]]:
        b = self.boundary
        return [(b[i], b[(i + 1) % len(b)]) for i in range(len(b))]

    def contains(self, p: Point) -> bool:
        """Strict interior test against the boundary polygon."""
        from .geometry import winding_number, point_on_polyline

        if point_on_polyline(p, self.boundary, closed=True):
            return False
        return winding_number(self.boundary, p) != 0

    def sphere_model(self) -> SurfaceModel:
        """The ambient sphere used for arc invariants: the n punctures
        plus infinity hiding behind the boundary."""
        if self._sphere_cache is None:
            tri = build_standard_triangulation(self.punctures)
            self._sphere_cache = SurfaceModel(self.n + 1, list(self.punctures), tri)
        return self._sphere_cache

    def __hash__(self):
        return hash((self.n, tuple(self.punctures)))


def make_disk(n: int) -> DiskModel:
    """The punctured disk D_n with its base arc."""
    if n < 3:
        raise SurfaceError("disk model needs at least 3 punctures")
    punctures = circle_layout(n)
    boundary = []
    for i in range(n):
        boundary.append(scale(punctures[i], 3))
        boundary.append(scale(gap_direction(punctures, i), 3))
    base = standard_disk_arc(punctures, 0, 1)
    disk = DiskModel(n, punctures, boundary, base)
    for p in punctures:
        if not disk.contains(p):
            raise SurfaceError("puncture escaped the disk boundary")
    return disk


def standard_disk_arc(
    punctures: list[Point],
    first: int,
    last: int,
    inner_radius=Q(3, 4),
    sub_num: int = 1,
    sub_den: int = 2,
) -> list[Point]:
    """A tidily drawn arc cutting off punctures first..last (inclusive,
    contiguous in the circular order). Endpoints on the radius-3
    boundary circle at the adjacent gap directions."""
    m = len(punctures)
    g_before = gap_direction(punctures, (first - 1) % m, sub_num, sub_den)
    g_after = gap_direction(punctures, last % m, sub_num, sub_den)
    return [
        scale(g_before, 3),
        scale(g_before, inner_radius),
        scale(g_after, inner_radius),
        scale(g_after, 3),
    ]
