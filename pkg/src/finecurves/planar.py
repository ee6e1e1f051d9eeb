"""Planar subdivision induced by a finite collection of closed polygonal
curves (which may share segments), with exact face extraction.

The construction is the classical one: split every input segment at
every intersection event, deduplicate coincident sub-segments, sort the
star of every vertex angularly, and trace face cycles with the interior
kept on the left. Faces are assembled from one counterclockwise outer
cycle plus the clockwise hole cycles nested immediately inside it.

Because every arrangement edge lies on at least one of the input curves
(each of which separates the plane), no edge can have the same face on
both sides; face walks may pinch through vertices but never double back
along an edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .rationals import Q
from .geometry import (
    Point,
    add,
    candidate_pairs,
    clearance_radius,
    cross,
    dot,
    lerp,
    on_segment,
    orient,
    perp,
    polygon_area2,
    pseudo_angle_key,
    scale,
    seg_intersect,
    sub,
)


@dataclass(frozen=True)
class FaceRecord:
    """One connected component of the complement of the curve union."""

    index: int
    bounded: bool
    simply_connected: bool
    punctures: tuple  # finite puncture indices; INF is implied for the unbounded face
    contains_infinity: bool
    topology_class: str  # "disk" | "once-punctured disk" | "other"
    boundary_curves: tuple  # indices of input curves on the boundary
    n_boundary_cycles: int


class Subdivision:
    """Exact arrangement of closed polylines; query by ray shooting."""

    def __init__(self, curve_vertex_lists: list[list[Point]]):
        self.curves = [list(c) for c in curve_vertex_lists]
        self._build()

    # -- construction -----------------------------------------------------

    def _build(self) -> None:
        segs = []  # (curve_idx, seg_idx, a, b)
        for ci, pts in enumerate(self.curves):
            m = len(pts)
            for si in range(m):
                segs.append((ci, si, pts[si], pts[(si + 1) % m]))
        cuts: list[set] = [set() for _ in segs]
        geoms = [(s[2], s[3]) for s in segs]
        for i, j in candidate_pairs(geoms, geoms):
            if j <= i:
                continue
            a, b = geoms[i]
            c, d = geoms[j]
            hit = seg_intersect(a, b, c, d)
            if hit is None:
                continue
            if hit[0] == "point":
                cuts[i].add(hit[2])
                cuts[j].add(hit[3])
            else:
                _, t0, t1, u0, u1 = hit
                cuts[i].update((t0, t1))
                cuts[j].update((u0, u1))

        edge_map: dict = {}
        self.edge_owners: list[list] = []
        self.edge_points: list[tuple] = []
        for (ci, si, a, b), ts in zip(segs, cuts):
            params = sorted(ts | {Q(0), Q(1)})
            for t0, t1 in zip(params, params[1:]):
                if t0 == t1:
                    continue
                p, q = lerp(a, b, t0), lerp(a, b, t1)
                key = (p, q) if (p < q) else (q, p)
                if key not in edge_map:
                    edge_map[key] = len(self.edge_points)
                    self.edge_points.append(key)
                    self.edge_owners.append([])
                self.edge_owners[edge_map[key]].append((ci, si, t0, t1))

        # Vertex star and half-edge tables. A half-edge is (edge_idx, dirflag)
        # with dirflag 0 meaning key[0] -> key[1].
        self.vertices: dict = {}
        star: dict = {}
        for ei, (p, q) in enumerate(self.edge_points):
            self.vertices.setdefault(p, []).append((ei, 0))
            self.vertices.setdefault(q, []).append((ei, 1))
        for v, out in self.vertices.items():
            out.sort(
                key=lambda h: pseudo_angle_key(
                    sub(self._head(h), v)
                )
            )
            star[v] = out
        self._star = star

        # Trace faces: next half-edge after h=(u->v) is the clockwise
        # neighbor of twin(h) in the star of v; interior stays on the left.
        self._face_of: dict = {}
        cycles = []
        all_halfedges = sorted(
            ((ei, d) for ei in range(len(self.edge_points)) for d in (0, 1)),
            key=lambda h: (self._tail(h), self._head(h)),
        )
        seen = set()
        for h0 in all_halfedges:
            if h0 in seen:
                continue
            cycle = []
            h = h0
            while h not in seen:
                seen.add(h)
                cycle.append(h)
                v = self._head(h)
                out = star[v]
                twin = (h[0], 1 - h[1])
                k = out.index(twin)
                h = out[(k - 1) % len(out)]
            cycles.append(cycle)

        areas = [self._cycle_area2(c) for c in cycles]
        ccw = [i for i, a2 in enumerate(areas) if a2 > 0]
        cw = [i for i, a2 in enumerate(areas) if a2 <= 0]
        if any(a2 == 0 for a2 in areas):
            raise ValueError("degenerate zero-area face walk")

        self._cycles = cycles
        self._delta = None  # lazy clearance for interior offsets

        cycle_polys = {i: [self._tail(h) for h in cycles[i]] for i in ccw}

        # Faces: index 0 is the unbounded face; bounded faces follow in
        # cycle-discovery order (deterministic).
        self.face_cycles: list[list[int]] = [[]]
        face_of_cycle = {}
        for i in ccw:
            face_of_cycle[i] = len(self.face_cycles)
            self.face_cycles.append([i])
        for i in cw:
            q = self._inside_probe(cycles[i])
            containers = [
                j
                for j in ccw
                if _winding(cycle_polys[j], q) != 0
            ]
            if not containers:
                self.face_cycles[0].append(i)
            else:
                inner = min(containers, key=lambda j: areas[j])
                self.face_cycles[face_of_cycle[inner]].append(i)
        for fi, cyc_list in enumerate(self.face_cycles):
            for i in cyc_list:
                for h in cycles[i]:
                    self._face_of[h] = fi

    def _tail(self, h) -> Point:
        ei, d = h
        return self.edge_points[ei][d]

    def _head(self, h) -> Point:
        ei, d = h
        return self.edge_points[ei][1 - d]

    def _cycle_area2(self, cycle):
        total = Q(0)
        for h in cycle:
            total += cross(self._tail(h), self._head(h))
        return total

    def _clearance(self):
        if self._delta is None:
            self._delta = clearance_radius(self.edge_points)
        return self._delta

    def _inside_probe(self, cycle) -> Point:
        """A point strictly inside the face bounded by this cycle walk,
        obtained by nudging an edge midpoint to the left of its half-edge."""
        h = cycle[0]
        a, b = self._tail(h), self._head(h)
        mid = lerp(a, b, Q(1, 2))
        d = sub(b, a)
        n = perp(d)
        m = max(abs(n[0]), abs(n[1]))
        return add(mid, scale(n, self._clearance() / m))

    # -- queries -----------------------------------------------------------

    def locate(self, p: Point) -> int:
        """Face index containing p; p must avoid the curve union."""
        verts = list(self.vertices.keys())
        k = 0
        while True:
            d = (Q(1), Q(k))
            ok = True
            for v in verts:
                w = sub(v, p)
                if cross(d, w) == 0 and dot(d, w) > 0:
                    ok = False
                    break
            if ok:
                break
            k += 1
        best = None
        for ei, (a, b) in enumerate(self.edge_points):
            r = sub(b, a)
            denom = cross(r, d)
            if denom == 0:
                continue
            qp = sub(p, a)
            t = cross(qp, d) / denom
            u = cross(qp, r) / denom  # u along ray from p... sign fix below
            # Solve a + t*r = p + u*d exactly:
            u = cross(sub(a, p), r) / cross(d, r)
            if 0 <= t <= 1 and u > 0:
                if best is None or u < best[0]:
                    best = (u, ei, a, b)
        if best is None:
            return 0
        _, ei, a, b = best
        side = orient(a, b, p)
        if side == 0:
            raise ValueError("locate: point on an arrangement edge")
        h = (ei, 0) if side > 0 else (ei, 1)
        return self._face_of[h]

    def face_interior_point(self, face_idx: int) -> Point:
        if face_idx == 0:
            xs = [v[0] for v in self.vertices] or [Q(0)]
            ys = [v[1] for v in self.vertices] or [Q(0)]
            return (max(xs) + 1, max(ys) + 1)
        cyc = self.face_cycles[face_idx][0]
        return self._inside_probe(self._cycles[cyc])

    def face_boundary_owner_runs(self, face_idx: int):
        """For each boundary cycle of the face: the walk as a list of
        (halfedge, tail point, owner curve set). Used by bigon finders."""
        out = []
        for ci in self.face_cycles[face_idx]:
            walk = []
            for h in self._cycles[ci]:
                owners = frozenset(o[0] for o in self.edge_owners[h[0]])
                walk.append((h, self._tail(h), owners))
            out.append(walk)
        return out

    def halfedge_polyline(self, h) -> tuple[Point, Point]:
        return self._tail(h), self._head(h)

    def n_faces(self) -> int:
        return len(self.face_cycles)


def _winding(poly: list[Point], q: Point) -> int:
    from .geometry import winding_number

    return winding_number(poly, q)


class CurveArrangement:
    """Subdivision of the punctured sphere induced by curves, with face
    puncture contents and topology classes."""

    def __init__(self, curves, surface):
        self.surface = surface
        self.curves = list(curves)
        self.sub = Subdivision([list(c.vertices) for c in self.curves])
        self._puncture_face = {}
        for pi, p in enumerate(surface.punctures):
            self._puncture_face[pi] = self.sub.locate(p)
        self.faces = self._build_faces()

    def _build_faces(self):
        recs = []
        for fi in range(self.sub.n_faces()):
            punct = tuple(
                sorted(pi for pi, f in self._puncture_face.items() if f == fi)
            )
            bounded = fi != 0
            n_cycles = len(self.sub.face_cycles[fi])
            simply = n_cycles == 1
            contains_inf = not bounded
            total = len(punct) + (1 if contains_inf else 0)
            if simply and total == 0:
                klass = "disk"
            elif simply and total == 1:
                klass = "once-punctured disk"
            else:
                klass = "other"
            owners = set()
            for ci in self.sub.face_cycles[fi]:
                for h in self.sub._cycles[ci]:
                    for o in self.sub.edge_owners[h[0]]:
                        owners.add(o[0])
            recs.append(
                FaceRecord(
                    index=fi,
                    bounded=bounded,
                    simply_connected=simply,
                    punctures=punct,
                    contains_infinity=contains_inf,
                    topology_class=klass,
                    boundary_curves=tuple(sorted(owners)),
                    n_boundary_cycles=n_cycles,
                )
            )
        return recs

    def locate(self, p: Point) -> int:
        return self.sub.locate(p)

    def face(self, idx: int) -> FaceRecord:
        return self.faces[idx]

    def qualifying_faces(self):
        """Faces that are neither a disk nor a once-punctured disk."""
        return [f for f in self.faces if f.topology_class == "other"]
