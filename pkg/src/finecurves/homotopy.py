"""Homotopy of simple closed curves via normal coordinates.

A curve is tightened against the reference ideal triangulation by
computing its exact crossing word (the cyclic sequence of triangulation
edges it crosses transversally) and then cancelling adjacent equal
letters. A cancellation corresponds to pushing an arc that enters and
leaves a triangle through the same edge across that edge; since the
faces are ideal triangles, such a disk never contains a puncture, so
every cancellation is a legal isotopy. A cyclic word with no adjacent
equal letters realizes a normal curve, and normal curves intersect each
edge minimally. The resulting count vector, together with the enclosed
puncture set, is a complete isotopy invariant.

Tangencies are handled exactly rather than perturbed: a maximal contact
between the curve and an edge contributes a letter only when the curve
changes sides of the edge across the contact.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from gmpy2 import mpq

from .rationals import Q
from .geometry import (
    Point,
    add,
    cross,
    dot,
    lerp,
    on_segment,
    orient,
    scale,
    seg_intersect,
    seg_ray_intersect,
    sub,
)
from .geom import PolyCurve, CurveError, enclosed_punctures, validate_curve
from .surface import INF, SurfaceModel, TriEdge

_cache_lock = threading.Lock()


@dataclass(frozen=True)
class NormalCoords:
    """Minimal intersection counts with the triangulation edges plus the
    enclosed finite-puncture set (the side not containing infinity)."""

    edge_counts: tuple
    side_partition: frozenset

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.edge_counts)

    def total_weight(self) -> int:
        return sum(self.edge_counts)

    def __str__(self) -> str:
        counts = " ".join(str(c) for c in self.edge_counts)
        part = ",".join(str(i) for i in sorted(self.side_partition))
        return f"[{counts}] enclosing {{{part}}}"


# ---------------------------------------------------------------------------
# Crossing words
# ---------------------------------------------------------------------------

def _edge_contacts(curve: PolyCurve, edge: TriEdge):
    """Maximal contact intervals of the curve with one edge, as closed
    cyclic parameter intervals [lo, hi] on the curve."""
    verts = curve.vertices
    m = len(verts)
    raw = []
    for i in range(m):
        a, b = verts[i], verts[(i + 1) % m]
        for piece in edge.pieces:
            if piece[0] == "seg":
                hit = seg_intersect(a, b, piece[1], piece[2])
            else:
                hit = seg_ray_intersect(a, b, piece[1], piece[2])
            if hit is None:
                continue
            if hit[0] == "point":
                raw.append((i + hit[2], i + hit[2]))
            else:
                raw.append((i + hit[1], i + hit[2]))
    if not raw:
        return []
    raw = sorted(set(raw))
    merged = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if len(merged) > 1 and merged[0][0] == 0 and merged[-1][1] == m:
        merged[0][0] = merged[-1][0] - m
        merged.pop()
    return [(lo, hi) for lo, hi in merged]


def _edge_joints(edge: TriEdge) -> dict:
    """Interior junction points of the edge polyline mapped to the pair
    (incoming piece dir, outgoing piece dir)."""
    joints = {}
    for k in range(len(edge.pieces) - 1):
        piece = edge.pieces[k]
        joint = piece[2] if piece[0] == "seg" else None
        if joint is None:
            raise ValueError("ray must be the final piece of an edge")
        joints[joint] = (edge.direction_at(k), edge.direction_at(k + 1))
    return joints


def _in_ccw_sector(w: Point, start: Point, end: Point) -> bool:
    """Is direction w strictly inside the ccw sector from start to end?"""
    c = cross(start, end)
    if c > 0:
        return cross(start, w) > 0 and cross(w, end) > 0
    if c < 0:
        return cross(start, w) > 0 or cross(w, end) > 0
    # start and end parallel: sector is a half turn (or degenerate)
    if dot(start, end) < 0:
        return cross(start, w) > 0
    raise ValueError("degenerate sector")


def _side_at_contact(edge: TriEdge, contact: Point, probe: Point, joints: dict) -> int:
    """+1 if the probe direction sits on the left of the directed edge
    at the contact point, -1 on the right."""
    w = sub(probe, contact)
    if contact in joints:
        u1, u2 = joints[contact]
        return 1 if _in_ccw_sector(w, u2, scale(u1, -1)) else -1
    for k, piece in enumerate(edge.pieces):
        if piece[0] == "seg":
            if on_segment(contact, piece[1], piece[2]):
                s = cross(edge.direction_at(k), w)
                if s == 0:
                    raise ValueError("probe on edge line; contact analysis failed")
                return 1 if s > 0 else -1
        else:
            base, d = piece[1], piece[2]
            if cross(d, sub(contact, base)) == 0 and dot(d, sub(contact, base)) >= 0:
                s = cross(d, w)
                if s == 0:
                    raise ValueError("probe on ray line; contact analysis failed")
                return 1 if s > 0 else -1
    raise ValueError("contact point not on edge")


def _probe_before(curve: PolyCurve, param) -> Point:
    m = len(curve.vertices)
    if param == int(param):
        seg = (int(param) - 1) % m
    else:
        seg = int(param % m)
    return curve.vertices[seg]


def _probe_after(curve: PolyCurve, param) -> Point:
    m = len(curve.vertices)
    if param == int(param):
        seg = int(param) % m
    else:
        seg = int(param % m)
    return curve.vertices[(seg + 1) % m]


def crossing_word(curve: PolyCurve, surface: SurfaceModel) -> list[int]:
    """Cyclic sequence of triangulation edge indices crossed by the
    curve, in curve order, tangencies excluded."""
    events = []  # (sort param, edge index)
    for edge in surface.triangulation.edges:
        joints = _edge_joints(edge)
        for lo, hi in _edge_contacts(curve, edge):
            entry = curve.point_at(lo)
            exit_ = curve.point_at(hi)
            side_in = _side_at_contact(edge, entry, _probe_before(curve, lo), joints)
            side_out = _side_at_contact(edge, exit_, _probe_after(curve, hi), joints)
            if side_in != side_out:
                m = len(curve.vertices)
                events.append((lo % m, edge.index))
    events.sort()
    return [e for _, e in events]


def reduce_cyclic_word(word: list[int]) -> list[int]:
    """Cancel adjacent equal letters, cyclically, until none remain."""

    def reduce_linear(w):
        out = []
        for x in w:
            if out and out[-1] == x:
                out.pop()
            else:
                out.append(x)
        return out

    w = reduce_linear(word)
    while len(w) >= 2 and w[0] == w[-1]:
        w = reduce_linear(w[1:-1])
    return w


# ---------------------------------------------------------------------------
# Tighten / compare
# ---------------------------------------------------------------------------

def tighten(curve: PolyCurve, surface: SurfaceModel) -> NormalCoords:
    """Normal coordinates of the isotopy class of the curve."""
    cache = surface._coords_cache
    key = curve.vertices
    hit = cache.get(key)
    if hit is not None:
        return hit
    word = reduce_cyclic_word(crossing_word(curve, surface))
    counts = [0] * surface.triangulation.edge_count()
    for e in word:
        counts[e] += 1
    enclosed = enclosed_punctures(curve, surface)
    if not surface.triangulation.has_infinity:
        # Without the infinity anchor the two sides are interchangeable
        # by isotopy across the old point at infinity; normalize to the
        # smaller side of the unordered pair.
        complement = frozenset(range(surface.finite_count)) - enclosed
        enclosed = min(
            (enclosed, complement), key=lambda s: (len(s), tuple(sorted(s)))
        )
    coords = NormalCoords(tuple(counts), enclosed)
    _check_matching(coords, surface)
    cache[key] = coords
    return coords


def _check_matching(coords: NormalCoords, surface: SurfaceModel) -> None:
    for face in surface.triangulation.faces:
        x, y, z = (coords.edge_counts[e] for e in face.edges)
        if (x + y + z) % 2 != 0 or x > y + z or y > x + z or z > x + y:
            raise AssertionError(
                f"normal matching violated on face {face.index}: {(x, y, z)}"
            )


def is_essential(curve: PolyCurve, surface: SurfaceModel) -> bool:
    """Neither side bounds a disk or once-punctured disk: at least two
    punctures on each side (infinity counts)."""
    k = len(enclosed_punctures(curve, surface))
    return 2 <= k <= surface.n - 2


def are_homotopic(a: PolyCurve, b: PolyCurve, surface: SurfaceModel) -> bool:
    return tighten(a, surface) == tighten(b, surface)


def are_quasi_homotopic(a: PolyCurve, b: PolyCurve, surface: SurfaceModel) -> bool:
    """Homotopic after filling some puncture (possibly infinity)."""
    if are_homotopic(a, b, surface):
        return True
    for q in list(range(surface.finite_count)) + [INF]:
        filled = surface.filled_model(q)
        if tighten(a, filled) == tighten(b, filled):
            return True
    return False


# ---------------------------------------------------------------------------
# Reconstruction of a tidy representative from coordinates
# ---------------------------------------------------------------------------

def redraw(coords: NormalCoords, surface: SurfaceModel) -> PolyCurve:
    """An explicit rational polygon realizing the given coordinates.

    Only supported over the standard triangulation (single-piece edges,
    convex ideal triangles). Used to keep representatives small after
    braid actions: tighten(redraw(tighten(c))) == tighten(c).
    """
    tri = surface.triangulation
    if not tri.has_infinity:
        raise ValueError("redraw requires the standard triangulation")
    if coords.is_zero():
        raise ValueError("cannot redraw a contractible class")
    points: list[list[Point]] = []
    for edge in tri.edges:
        k = coords.edge_counts[edge.index]
        piece = edge.pieces[0]
        pts = []
        for j in range(1, k + 1):
            if piece[0] == "seg":
                pts.append(lerp(piece[1], piece[2], Q(j, k + 1)))
            else:
                pts.append(add(piece[1], scale(piece[2], Q(j))))
        points.append(pts)

    # chords[(edge, slot)] -> list of (edge', slot') connections
    links: dict = {}

    def connect(a, b):
        links.setdefault(a, []).append(b)
        links.setdefault(b, []).append(a)

    for face in tri.faces:
        counts = [coords.edge_counts[e] for e in face.edges]
        for k in range(3):
            e1 = face.edges[(k + 1) % 3]
            e2 = face.edges[(k + 2) % 3]
            e0 = face.edges[k]
            alpha = (counts[(k + 1) % 3] + counts[(k + 2) % 3] - counts[k]) // 2
            v = face.vertices[k]
            for j in range(alpha):
                connect(
                    (e1, _slot_near(tri.edges[e1], v, j, coords.edge_counts[e1])),
                    (e2, _slot_near(tri.edges[e2], v, j, coords.edge_counts[e2])),
                )

    for key, ends in links.items():
        if len(ends) != 2:
            raise AssertionError(f"crossing point {key} has degree {len(ends)}")

    start = min(links)
    cycle = [start]
    prev = None
    cur = start
    while True:
        nxts = [x for x in links[cur] if x != prev]
        if len(nxts) == 2:  # first step: pick deterministically
            nxt = min(nxts)
        else:
            nxt = nxts[0]
        prev, cur = cur, nxt
        if cur == start:
            break
        cycle.append(cur)
    if len(cycle) != sum(coords.edge_counts):
        raise AssertionError("coordinates reconstruct a disconnected multicurve")

    verts = [points[e][slot] for e, slot in cycle]
    curve = validate_curve(verts, surface)
    check = tighten(curve, surface)
    if check != coords:
        raise AssertionError("redraw failed to realize coordinates")
    return curve


def _slot_near(edge: TriEdge, vertex: int, j: int, count: int) -> int:
    """Slot index of the j-th crossing point counted from the given
    endpoint of the edge (slots are ordered from tail to head)."""
    if edge.tail == vertex:
        return j
    if edge.head == vertex:
        return count - 1 - j
    raise AssertionError("vertex not an endpoint of edge")


def tidy_representative(curve: PolyCurve, surface: SurfaceModel) -> PolyCurve:
    """An isotopic curve with vertex count proportional to its
    coordinate weight (falls back to the input for contractible ones)."""
    coords = tighten(curve, surface)
    if coords.is_zero():
        return curve
    return redraw(coords, surface)
